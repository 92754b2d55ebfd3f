#include "gdl/rauzy.hpp"

#include <algorithm>
#include <cmath>

namespace gdl {

RauzyGraph build_rauzy(const ProblemPtr& p, int order, int pad) {
  if (order < 1) throw Error("Rauzy order must be positive");
  if (pad < 0) pad = std::max(2, p->radius());
  const int h = order + 1 + 2 * pad;
  if (h > kMaxHeight) throw CapacityExceeded("Rauzy height exceeds packing capacity");
  auto set = enumerate_states(p, h, Mode::interior, false);
  const int bits = p->bits();
  const Packed mask = (static_cast<Packed>(1) << (bits * order)) - 1;
  std::vector<std::pair<Packed, Packed>> pairs;
  pairs.reserve(set->size());
  for (Packed s : set->states()) {
    Packed w = s >> (bits * pad);
    pairs.emplace_back(w & mask, (w >> bits) & mask);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  RauzyGraph g;
  g.order = order;
  g.pad = pad;
  for (const auto& [u, v] : pairs) {
    g.vertices.push_back(u);
    g.vertices.push_back(v);
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  auto idx = [&](Packed x) {
    return static_cast<std::uint32_t>(
        std::lower_bound(g.vertices.begin(), g.vertices.end(), x) - g.vertices.begin());
  };
  auto& a = g.adjacency;
  a.dim = g.vertices.size();
  a.row_ptr.assign(a.dim + 1, 0);
  for (const auto& e : pairs) ++a.row_ptr[idx(e.first) + 1];
  for (std::size_t i = 0; i < a.dim; ++i) a.row_ptr[i + 1] += a.row_ptr[i];
  // pairs are sorted by source, then target, so columns come out ascending
  for (const auto& e : pairs) a.cols.push_back(idx(e.second));
  return g;
}

double growth_rate(const RauzyGraph& g) { return spectral_radius(g.adjacency); }

RauzySweep rauzy_sweep(const ProblemPtr& p, int max_order, double tol, int pad, int first_order) {
  RauzySweep s;
  s.first_order = first_order;
  for (int i = first_order; i <= max_order; ++i) {
    double lambda = growth_rate(build_rauzy(p, i, pad));
    s.lambdas.push_back(lambda);
    s.rate = lambda;
    if (s.lambdas.size() >= 2 && std::fabs(lambda - s.lambdas[s.lambdas.size() - 2]) < tol) {
      s.stable_order = i;
      break;
    }
  }
  return s;
}

}  // namespace gdl
