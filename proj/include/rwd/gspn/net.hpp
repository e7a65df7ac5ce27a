#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rwd/error.hpp"

namespace rwd::gspn {

using PlaceId = std::size_t;
using TransitionId = std::size_t;
using Marking = std::vector<int>;

enum class ServerSemantics { Single, Infinite };

struct Timed {
  double rate = 1.0;
  ServerSemantics server = ServerSemantics::Infinite;
};

struct Immediate {
  double weight = 1.0;
  int priority = 1;
};

struct Place {
  std::string name;
  int initial = 0;
};

struct Transition {
  std::string name;
  std::variant<Timed, Immediate> kind;

  bool is_immediate() const { return std::holds_alternative<Immediate>(kind); }
  const Timed& timed() const { return std::get<Timed>(kind); }
  const Immediate& immediate() const { return std::get<Immediate>(kind); }
};

enum class ArcKind { Input, Output, Inhibitor };

struct Arc {
  PlaceId place;
  TransitionId transition;
  int multiplicity;
  ArcKind kind;
};

// Malformed net: bad rate, duplicate name, unknown endpoint...
class NetError : public InputError {
 public:
  using InputError::InputError;
};

class PetriNet {
 public:
  PlaceId add_place(std::string name, int initial);
  TransitionId add_timed(std::string name, double rate, ServerSemantics server = ServerSemantics::Infinite);
  TransitionId add_immediate(std::string name, double weight = 1.0, int priority = 1);

  void add_input(PlaceId place, TransitionId t, int multiplicity = 1);
  void add_output(TransitionId t, PlaceId place, int multiplicity = 1);
  void add_inhibitor(PlaceId place, TransitionId t, int multiplicity = 1);

  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t place_count() const { return places_.size(); }
  std::size_t transition_count() const { return transitions_.size(); }

  std::optional<PlaceId> find_place(std::string_view name) const;
  std::optional<TransitionId> find_transition(std::string_view name) const;
  PlaceId place(std::string_view name) const;            // throws NetError
  TransitionId transition(std::string_view name) const;  // throws NetError

  Marking initial_marking() const;

  // Input/inhibitor conditions only, ignoring priorities.
  bool has_concession(TransitionId t, const Marking& m) const;
  // How many times `t` could fire concurrently (min over input arcs).
  int enabling_degree(TransitionId t, const Marking& m) const;
  // Rate of a timed transition in `m`, honouring server semantics.
  double effective_rate(TransitionId t, const Marking& m) const;
  Marking fire(TransitionId t, const Marking& m) const;

  // C[p][t] = outputs - inputs; inhibitor arcs do not contribute.
  std::vector<std::vector<long long>> incidence() const;

  std::string describe(const Marking& m) const;  // "Ap1=1 Wd1=3"

 private:
  struct ArcRef {
    PlaceId place;
    int multiplicity;
  };
  struct Wiring {
    std::vector<ArcRef> inputs, outputs, inhibitors;
  };

  void check_place(PlaceId p) const;
  void check_transition(TransitionId t) const;
  TransitionId add_transition(Transition t);

  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  std::vector<Wiring> wiring_;
};

// Transitions that may fire in `m`: if any immediate transition has
// concession, only the immediates of highest priority; otherwise every timed
// transition with concession.
std::vector<TransitionId> enabled(const PetriNet& net, const Marking& m);

}  // namespace rwd::gspn
