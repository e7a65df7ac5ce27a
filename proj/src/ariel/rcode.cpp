#include "rwd/ariel/rcode.hpp"

#include <charconv>
#include <sstream>

#include "rwd/error.hpp"

namespace rwd::ariel {
namespace {

struct OpInfo {
  Opcode op;
  std::string_view name;
  int operands;
  int pops;
  int pushes;
};

constexpr OpInfo kOps[] = {
    {Opcode::PushPhase, "PUSH_PHASE", 2, 0, 1}, {Opcode::PushConst, "PUSH_CONST", 1, 0, 1},
    {Opcode::CmpEq, "CMP_EQ", 0, 2, 1},         {Opcode::And, "AND", 0, 2, 1},
    {Opcode::Or, "OR", 0, 2, 1},                {Opcode::Not, "NOT", 0, 1, 1},
    {Opcode::CountGe, "COUNT_GE", 3, 0, 1},     {Opcode::JumpIfFalse, "JUMP_IF_FALSE", 1, 1, 0},
    {Opcode::ActSend, "ACT_SEND", 2, 0, 0},     {Opcode::ActRemove, "ACT_REMOVE", 2, 0, 0},
    {Opcode::EndGuard, "END_GUARD", 0, 0, 0},
};

const OpInfo& info(Opcode op) {
  for (const auto& i : kOps)
    if (i.op == op) return i;
  throw std::logic_error("unknown opcode");
}

[[noreturn]] void bad(std::size_t index, const std::string& msg) {
  throw InputError("rcode instruction " + std::to_string(index) + ": " + msg);
}

}  // namespace

std::string_view mnemonic(Opcode op) { return info(op).name; }
int operand_count(Opcode op) { return info(op).operands; }

std::size_t RCode::clause_count() const {
  std::size_t n = 0;
  for (const auto& ins : code)
    if (ins.op == Opcode::EndGuard) ++n;
  return n;
}

std::string to_text(const RCode& rcode) {
  std::ostringstream os;
  for (const auto& ins : rcode.code) {
    os << mnemonic(ins.op);
    for (int k = 0; k < operand_count(ins.op); ++k) os << ' ' << ins.operands[k];
    os << '\n';
  }
  return os.str();
}

void verify(const RCode& rcode) {
  // Within a clause: guard evaluation leaves one value, the jump consumes it,
  // actions run on an empty stack and END_GUARD closes the block.
  enum class Stage { Guard, Actions };
  Stage stage = Stage::Guard;
  int depth = 0;
  std::size_t jump_target = 0;
  for (std::size_t i = 0; i < rcode.code.size(); ++i) {
    const Instruction& ins = rcode.code[i];
    const OpInfo& op = info(ins.op);
    if (stage == Stage::Guard) {
      if (ins.op == Opcode::ActSend || ins.op == Opcode::ActRemove || ins.op == Opcode::EndGuard)
        bad(i, std::string(op.name) + " before the clause's JUMP_IF_FALSE");
      if (depth < op.pops) bad(i, std::string(op.name) + " pops an empty stack");
      if (ins.op == Opcode::JumpIfFalse) {
        if (depth != 1) bad(i, "guard must leave exactly one value, left " + std::to_string(depth));
        if (ins.operands[0] <= static_cast<std::int64_t>(i) ||
            ins.operands[0] >= static_cast<std::int64_t>(rcode.code.size()))
          bad(i, "jump target must be a later instruction");
        jump_target = static_cast<std::size_t>(ins.operands[0]);
        depth = 0;
        stage = Stage::Actions;
        continue;
      }
      if ((ins.op == Opcode::PushPhase || ins.op == Opcode::ActRemove) &&
          (ins.operands[0] < 0 || ins.operands[0] > 1))
        bad(i, "entity kind must be 0 (task) or 1 (logical)");
      depth += op.pushes - op.pops;
    } else {
      if (ins.op == Opcode::EndGuard) {
        if (i != jump_target) bad(i, "clause jump does not target its END_GUARD");
        stage = Stage::Guard;
        continue;
      }
      if (ins.op != Opcode::ActSend && ins.op != Opcode::ActRemove)
        bad(i, std::string(op.name) + " in action list");
      if (ins.op == Opcode::ActRemove && (ins.operands[0] < 0 || ins.operands[0] > 1))
        bad(i, "entity kind must be 0 (task) or 1 (logical)");
    }
  }
  if (stage != Stage::Guard || depth != 0) bad(rcode.code.size(), "unterminated clause at end of r-code");
}

RCode parse_rcode(std::string_view text) {
  RCode rcode;
  int lineno = 0;
  while (!text.empty()) {
    ++lineno;
    auto nl = text.find('\n');
    std::string line(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream is(line);
    std::string word;
    if (!(is >> word) || word[0] == '#') continue;

    const OpInfo* found = nullptr;
    for (const auto& i : kOps)
      if (i.name == word) found = &i;
    if (!found) throw InputError("rcode line " + std::to_string(lineno) + ": unknown mnemonic '" + word + "'");

    Instruction ins{found->op, {}};
    std::string operand;
    int n = 0;
    while (is >> operand) {
      if (n == found->operands)
        throw InputError("rcode line " + std::to_string(lineno) + ": too many operands for " + word);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(operand.data(), operand.data() + operand.size(), v);
      if (ec != std::errc{} || ptr != operand.data() + operand.size())
        throw InputError("rcode line " + std::to_string(lineno) + ": invalid operand '" + operand + "'");
      ins.operands[n++] = v;
    }
    if (n != found->operands)
      throw InputError("rcode line " + std::to_string(lineno) + ": " + word + " expects " +
                       std::to_string(found->operands) + " operands");
    rcode.code.push_back(ins);
  }
  verify(rcode);
  return rcode;
}

}  // namespace rwd::ariel
