#include "rwd/gspn/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwd::gspn {

void PetriNet::check_place(PlaceId p) const {
  if (p >= places_.size()) throw NetError("unknown place index " + std::to_string(p));
}

void PetriNet::check_transition(TransitionId t) const {
  if (t >= transitions_.size()) throw NetError("unknown transition index " + std::to_string(t));
}

PlaceId PetriNet::add_place(std::string name, int initial) {
  if (name.empty()) throw NetError("place name must not be empty");
  if (initial < 0) throw NetError("place '" + name + "' has negative initial marking");
  if (find_place(name)) throw NetError("duplicate place '" + name + "'");
  places_.push_back({std::move(name), initial});
  return places_.size() - 1;
}

TransitionId PetriNet::add_transition(Transition t) {
  if (t.name.empty()) throw NetError("transition name must not be empty");
  if (find_transition(t.name)) throw NetError("duplicate transition '" + t.name + "'");
  transitions_.push_back(std::move(t));
  wiring_.emplace_back();
  return transitions_.size() - 1;
}

TransitionId PetriNet::add_timed(std::string name, double rate, ServerSemantics server) {
  if (!(rate > 0) || !std::isfinite(rate)) throw NetError("transition '" + name + "' needs a positive rate");
  return add_transition(Transition{std::move(name), Timed{rate, server}});
}

TransitionId PetriNet::add_immediate(std::string name, double weight, int priority) {
  if (!(weight > 0) || !std::isfinite(weight)) throw NetError("transition '" + name + "' needs a positive weight");
  if (priority < 1) throw NetError("transition '" + name + "' needs a positive priority");
  return add_transition(Transition{std::move(name), Immediate{weight, priority}});
}

void PetriNet::add_input(PlaceId place, TransitionId t, int multiplicity) {
  check_place(place);
  check_transition(t);
  if (multiplicity < 1) throw NetError("arc multiplicity must be at least 1");
  arcs_.push_back({place, t, multiplicity, ArcKind::Input});
  wiring_[t].inputs.push_back({place, multiplicity});
}

void PetriNet::add_output(TransitionId t, PlaceId place, int multiplicity) {
  check_place(place);
  check_transition(t);
  if (multiplicity < 1) throw NetError("arc multiplicity must be at least 1");
  arcs_.push_back({place, t, multiplicity, ArcKind::Output});
  wiring_[t].outputs.push_back({place, multiplicity});
}

void PetriNet::add_inhibitor(PlaceId place, TransitionId t, int multiplicity) {
  check_place(place);
  check_transition(t);
  if (multiplicity < 1) throw NetError("arc multiplicity must be at least 1");
  arcs_.push_back({place, t, multiplicity, ArcKind::Inhibitor});
  wiring_[t].inhibitors.push_back({place, multiplicity});
}

std::optional<PlaceId> PetriNet::find_place(std::string_view name) const {
  for (std::size_t i = 0; i < places_.size(); ++i)
    if (places_[i].name == name) return i;
  return std::nullopt;
}

std::optional<TransitionId> PetriNet::find_transition(std::string_view name) const {
  for (std::size_t i = 0; i < transitions_.size(); ++i)
    if (transitions_[i].name == name) return i;
  return std::nullopt;
}

PlaceId PetriNet::place(std::string_view name) const {
  if (auto p = find_place(name)) return *p;
  throw NetError("unknown place '" + std::string(name) + "'");
}

TransitionId PetriNet::transition(std::string_view name) const {
  if (auto t = find_transition(name)) return *t;
  throw NetError("unknown transition '" + std::string(name) + "'");
}

Marking PetriNet::initial_marking() const {
  Marking m;
  m.reserve(places_.size());
  for (const auto& p : places_) m.push_back(p.initial);
  return m;
}

bool PetriNet::has_concession(TransitionId t, const Marking& m) const {
  const Wiring& w = wiring_[t];
  for (const auto& a : w.inputs)
    if (m[a.place] < a.multiplicity) return false;
  for (const auto& a : w.inhibitors)
    if (m[a.place] >= a.multiplicity) return false;
  return true;
}

int PetriNet::enabling_degree(TransitionId t, const Marking& m) const {
  if (!has_concession(t, m)) return 0;
  int degree = std::numeric_limits<int>::max();
  for (const auto& a : wiring_[t].inputs) degree = std::min(degree, m[a.place] / a.multiplicity);
  return degree == std::numeric_limits<int>::max() ? 1 : degree;  // no inputs: a source
}

double PetriNet::effective_rate(TransitionId t, const Marking& m) const {
  const Timed& timed = transitions_[t].timed();
  if (timed.server == ServerSemantics::Single) return has_concession(t, m) ? timed.rate : 0.0;
  return timed.rate * enabling_degree(t, m);
}

Marking PetriNet::fire(TransitionId t, const Marking& m) const {
  Marking next = m;
  for (const auto& a : wiring_[t].inputs) next[a.place] -= a.multiplicity;
  for (const auto& a : wiring_[t].outputs) next[a.place] += a.multiplicity;
  return next;
}

std::vector<std::vector<long long>> PetriNet::incidence() const {
  std::vector<std::vector<long long>> c(places_.size(), std::vector<long long>(transitions_.size(), 0));
  for (const auto& a : arcs_) {
    if (a.kind == ArcKind::Input) c[a.place][a.transition] -= a.multiplicity;
    else if (a.kind == ArcKind::Output) c[a.place][a.transition] += a.multiplicity;
  }
  return c;
}

std::string PetriNet::describe(const Marking& m) const {
  std::string out;
  for (std::size_t p = 0; p < places_.size() && p < m.size(); ++p) {
    if (!m[p]) continue;
    if (!out.empty()) out += ' ';
    out += places_[p].name + "=" + std::to_string(m[p]);
  }
  return out.empty() ? "(empty)" : out;
}

std::vector<TransitionId> enabled(const PetriNet& net, const Marking& m) {
  std::vector<TransitionId> timed, immediate;
  int top = 0;
  for (TransitionId t = 0; t < net.transition_count(); ++t) {
    if (!net.has_concession(t, m)) continue;
    const Transition& tr = net.transitions()[t];
    if (tr.is_immediate()) {
      const int prio = tr.immediate().priority;
      if (prio > top) {
        top = prio;
        immediate.clear();
      }
      if (prio == top) immediate.push_back(t);
    } else {
      timed.push_back(t);
    }
  }
  return immediate.empty() ? timed : immediate;
}

}  // namespace rwd::gspn
