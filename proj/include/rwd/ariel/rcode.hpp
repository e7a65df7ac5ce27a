#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rwd::ariel {

enum class Opcode {
  PushPhase,    // kind id        -> push phase of entity (-1 when unset)
  PushConst,    // k              -> push k
  CmpEq,        //                   pop b, a; push a == b
  And,          //                   pop b, a; push a && b
  Or,           //                   pop b, a; push a || b
  Not,          //                   pop a; push !a
  CountGe,      // logical phase k -> push (#members in phase) >= k
  JumpIfFalse,  // target         -> pop a; if !a jump to target
  ActSend,      // message task
  ActRemove,    // kind id
  EndGuard,
};

std::string_view mnemonic(Opcode op);
int operand_count(Opcode op);

struct Instruction {
  Opcode op = Opcode::EndGuard;
  std::array<std::int64_t, 3> operands{};

  bool operator==(const Instruction&) const = default;
};

// Compiled recovery program: one guard/jump/actions/END_GUARD block per clause.
struct RCode {
  std::vector<Instruction> code;

  std::size_t clause_count() const;
  bool operator==(const RCode&) const = default;
};

// Text form: one instruction per line, mnemonic followed by integer operands.
// Blank lines and lines starting with `#` are ignored when parsing.
std::string to_text(const RCode& rcode);

// Parses and verifies the text form. Throws InputError with a line number.
RCode parse_rcode(std::string_view text);

// Checks stack balance and forward-only jumps. Throws InputError.
void verify(const RCode& rcode);

}  // namespace rwd::ariel
