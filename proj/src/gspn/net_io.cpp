#include "rwd/gspn/net_io.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <vector>

namespace rwd::gspn {

namespace {

struct Tok {
  std::string text;  // ":" and ";" are their own tokens
  int line, col;
};

std::vector<Tok> lex(std::string_view src) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == ':' || c == ';') {
      out.push_back({std::string(1, c), line, col});
      advance();
    } else {
      Tok t{"", line, col};
      while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) && src[i] != ':' &&
             src[i] != ';' && src[i] != '#') {
        t.text += src[i];
        advance();
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

bool is_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  PetriNet run() {
    enum class Section { None, Places, Transitions, Arcs } section = Section::None;
    while (pos_ < toks_.size()) {
      const Tok& t = toks_[pos_];
      if (pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == ":") {
        if (t.text == "places") section = Section::Places;
        else if (t.text == "transitions") section = Section::Transitions;
        else if (t.text == "arcs") section = Section::Arcs;
        else fail(t, "unknown section '" + t.text + "'");
        pos_ += 2;
        continue;
      }
      std::vector<const Tok*> stmt;
      while (pos_ < toks_.size() && toks_[pos_].text != ";") {
        if (toks_[pos_].text == ":") fail(toks_[pos_], "unexpected ':'");
        stmt.push_back(&toks_[pos_++]);
      }
      if (pos_ >= toks_.size()) fail(*stmt.back(), "missing ';'");
      const Tok& semi = toks_[pos_++];
      if (stmt.empty()) fail(semi, "empty statement");
      switch (section) {
        case Section::None: fail(*stmt[0], "statement outside a section"); break;
        case Section::Places: place(stmt); break;
        case Section::Transitions: transition(stmt); break;
        case Section::Arcs: arc(stmt); break;
      }
    }
    return std::move(net_);
  }

 private:
  [[noreturn]] static void fail(const Tok& t, const std::string& msg) {
    throw NetError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
  }

  static std::string name(const Tok& t) {
    if (!is_name(t.text)) fail(t, "invalid name '" + t.text + "'");
    return t.text;
  }

  static double number(const Tok& t) {
    double v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(t, "expected a number, got '" + t.text + "'");
    return v;
  }

  static int integer(const Tok& t) {
    int v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(t, "expected an integer, got '" + t.text + "'");
    return v;
  }

  template <class F>
  static auto guarded(const Tok& t, F&& f) {
    try {
      return f();
    } catch (const NetError& e) {
      fail(t, e.what());
    }
  }

  void place(const std::vector<const Tok*>& s) {
    if (s.size() != 2) fail(*s[0], "place needs a name and an initial marking");
    const std::string n = name(*s[0]);
    const int init = integer(*s[1]);
    guarded(*s[0], [&] { return net_.add_place(n, init); });
  }

  void transition(const std::vector<const Tok*>& s) {
    if (s.size() < 2) fail(*s[0], "transition needs a name and a kind");
    const std::string n = name(*s[0]);
    if (s[1]->text == "timed") {
      if (s.size() < 3 || s.size() > 4) fail(*s[1], "timed transition needs a rate and an optional server");
      const double rate = number(*s[2]);
      ServerSemantics server = ServerSemantics::Infinite;
      if (s.size() == 4) {
        if (s[3]->text == "single") server = ServerSemantics::Single;
        else if (s[3]->text != "infinite") fail(*s[3], "server must be 'infinite' or 'single'");
      }
      guarded(*s[0], [&] { return net_.add_timed(n, rate, server); });
    } else if (s[1]->text == "immediate") {
      if (s.size() > 4) fail(*s[4], "immediate transition takes at most a weight and a priority");
      const double weight = s.size() > 2 ? number(*s[2]) : 1.0;
      const int priority = s.size() > 3 ? integer(*s[3]) : 1;
      guarded(*s[0], [&] { return net_.add_immediate(n, weight, priority); });
    } else {
      fail(*s[1], "transition kind must be 'timed' or 'immediate'");
    }
  }

  void arc(const std::vector<const Tok*>& s) {
    if (s.size() < 2 || s.size() > 4) fail(*s[0], "arc needs from, to, multiplicity and kind");
    int mult = 1;
    bool inhibitor = false;
    for (std::size_t i = 2; i < s.size(); ++i) {
      if (s[i]->text == "inhibitor") inhibitor = true;
      else if (s[i]->text == "normal") inhibitor = false;
      else if (i == 2) mult = integer(*s[i]);
      else fail(*s[i], "arc kind must be 'normal' or 'inhibitor'");
    }
    const auto from_place = net_.find_place(s[0]->text);
    const auto from_trans = net_.find_transition(s[0]->text);
    const auto to_place = net_.find_place(s[1]->text);
    const auto to_trans = net_.find_transition(s[1]->text);
    const bool pt = from_place && to_trans;
    const bool tp = from_trans && to_place;
    if (pt && tp) fail(*s[0], "ambiguous arc between '" + s[0]->text + "' and '" + s[1]->text + "'");
    if (!pt && !tp) {
      if (!from_place && !from_trans) fail(*s[0], "unknown node '" + s[0]->text + "'");
      if (!to_place && !to_trans) fail(*s[1], "unknown node '" + s[1]->text + "'");
      fail(*s[0], "arc must connect a place and a transition");
    }
    if (tp && inhibitor) fail(*s[0], "inhibitor arcs go from a place to a transition");
    guarded(*s[0], [&] {
      if (tp) net_.add_output(*from_trans, *to_place, mult);
      else if (inhibitor) net_.add_inhibitor(*from_place, *to_trans, mult);
      else net_.add_input(*from_place, *to_trans, mult);
      return 0;
    });
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  PetriNet net_;
};

}  // namespace

PetriNet parse_net(std::string_view text) { return Parser(lex(text)).run(); }

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string write_net(const PetriNet& net) {
  std::string out = "places:\n";
  for (const auto& p : net.places()) out += "  " + p.name + " " + std::to_string(p.initial) + ";\n";
  out += "transitions:\n";
  for (const auto& t : net.transitions()) {
    out += "  " + t.name;
    if (t.is_immediate()) {
      out += " immediate " + format_number(t.immediate().weight) + " " + std::to_string(t.immediate().priority);
    } else {
      out += " timed " + format_number(t.timed().rate) +
             (t.timed().server == ServerSemantics::Infinite ? " infinite" : " single");
    }
    out += ";\n";
  }
  out += "arcs:\n";
  for (const auto& a : net.arcs()) {
    const std::string& p = net.places()[a.place].name;
    const std::string& t = net.transitions()[a.transition].name;
    const std::string m = std::to_string(a.multiplicity);
    switch (a.kind) {
      case ArcKind::Input: out += "  " + p + " " + t + " " + m + " normal;\n"; break;
      case ArcKind::Output: out += "  " + t + " " + p + " " + m + " normal;\n"; break;
      case ArcKind::Inhibitor: out += "  " + p + " " + t + " " + m + " inhibitor;\n"; break;
    }
  }
  return out;
}

std::string solution_csv(const TangibleChain& chain, std::span<const double> pi) {
  std::string out = "state_index,probability\n";
  for (std::size_t i = 0; i < chain.size(); ++i)
    out += std::to_string(chain.states[i]) + "," + format_number(pi[i]) + "\n";
  return out;
}

std::string throughput_csv(const PetriNet& net, std::span<const double> thr) {
  std::string out = "transition,throughput\n";
  for (std::size_t t = 0; t < net.transition_count(); ++t)
    out += net.transitions()[t].name + "," + format_number(thr[t]) + "\n";
  return out;
}

}  // namespace rwd::gspn
