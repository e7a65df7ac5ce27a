#include "rwd/gspn/invariants.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace rwd::gspn {

namespace {

// Row of the Farkas tableau: remaining incidence columns, then the place weights.
struct Row {
  std::vector<long long> c;
  std::vector<long long> y;
};

void normalise(Row& r) {
  long long g = 0;
  for (long long v : r.c) g = std::gcd(g, std::llabs(v));
  for (long long v : r.y) g = std::gcd(g, std::llabs(v));
  if (g > 1) {
    for (long long& v : r.c) v /= g;
    for (long long& v : r.y) v /= g;
  }
}

bool support_subset(const std::vector<long long>& a, const std::vector<long long>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] == 0) return false;
  return true;
}

// Drops rows whose support strictly contains another row's support, and duplicates.
void keep_minimal(std::vector<Row>& rows) {
  std::vector<char> drop(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size() && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      if (!support_subset(rows[j].y, rows[i].y)) continue;
      const bool same = support_subset(rows[i].y, rows[j].y);
      if (!same || (rows[i].y == rows[j].y && j < i)) drop[i] = 1;
    }
  }
  std::vector<Row> kept;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!drop[i]) kept.push_back(std::move(rows[i]));
  rows = std::move(kept);
}

}  // namespace

std::vector<PlaceId> PInvariant::support() const {
  std::vector<PlaceId> out;
  for (std::size_t p = 0; p < coefficients.size(); ++p)
    if (coefficients[p] != 0) out.push_back(p);
  return out;
}

long long PInvariant::weighted_sum(const Marking& m) const {
  long long s = 0;
  for (std::size_t p = 0; p < coefficients.size(); ++p) s += coefficients[p] * m[p];
  return s;
}

std::vector<PInvariant> p_invariants(const PetriNet& net) {
  const std::size_t np = net.place_count();
  const std::size_t nt = net.transition_count();
  const auto c = net.incidence();

  std::vector<Row> rows;
  for (std::size_t p = 0; p < np; ++p) {
    Row r{c[p], std::vector<long long>(np, 0)};
    r.y[p] = 1;
    rows.push_back(std::move(r));
  }

  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<Row> next;
    std::vector<const Row*> pos, neg;
    for (const Row& r : rows) {
      if (r.c[t] == 0) next.push_back(r);
      else (r.c[t] > 0 ? pos : neg).push_back(&r);
    }
    for (const Row* a : pos) {
      for (const Row* b : neg) {
        const long long wa = -b->c[t];
        const long long wb = a->c[t];
        Row r{std::vector<long long>(nt), std::vector<long long>(np)};
        for (std::size_t k = 0; k < nt; ++k) r.c[k] = wa * a->c[k] + wb * b->c[k];
        for (std::size_t k = 0; k < np; ++k) r.y[k] = wa * a->y[k] + wb * b->y[k];
        normalise(r);
        next.push_back(std::move(r));
      }
    }
    keep_minimal(next);
    rows = std::move(next);
  }

  std::vector<PInvariant> out;
  for (Row& r : rows) out.push_back({std::move(r.y)});
  std::sort(out.begin(), out.end(), [](const PInvariant& a, const PInvariant& b) {
    const auto sa = a.support(), sb = b.support();
    if (sa != sb) return sa < sb;
    return a.coefficients < b.coefficients;
  });
  return out;
}

std::string format_invariant(const PetriNet& net, const PInvariant& inv) {
  std::string out;
  for (PlaceId p : inv.support()) {
    if (!out.empty()) out += " + ";
    out += std::to_string(inv.coefficients[p]) + "*" + net.places()[p].name;
  }
  out += " = " + std::to_string(inv.weighted_sum(net.initial_marking()));
  return out;
}

}  // namespace rwd::gspn
