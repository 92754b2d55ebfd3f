#include "gdl/counting.hpp"

#include <cmath>

#include "gdl/solver.hpp"

namespace gdl {

namespace {

void require_counting(const Problem& p) {
  if (!p.counting_safe())
    throw Unsupported("problem " + p.name() + " uses a reduced encoding and cannot count sets");
}

template <class S>
SparseMatrix<S> pattern_as(const SparseMatrix<MinPlus>& m) {
  SparseMatrix<S> out;
  out.dim = m.dim;
  out.row_ptr = m.row_ptr;
  out.cols = m.cols;
  return out;
}

}  // namespace

CountResult count_sets(const ProblemPtr& p, int n, int m) {
  require_counting(*p);
  if (n < 1 || m < 1) throw Error("grid dimensions must be positive");
  CountResult r;
  r.problem = p->name();
  r.n = n;
  r.m = m;
  const int h = std::min(n, m), len = std::max(n, m);
  auto set = enumerate_states(p, h, Mode::interior, false);
  std::vector<BigNat> v(set->size());
  Cells c{};
  for (std::size_t i = 0; i < set->size(); ++i) {
    set->decode(i, c.data());
    if (is_first(*p, c.data(), h)) v[i] = 1;
  }
  if (len > 1) {
    auto tt = transpose(pattern_as<PlusTimesBig>(successor_pattern(*set)));
    for (int k = 1; k < len; ++k) v = vec_mat_t(v, tt);
  }
  BigNat total = 0;
  for (std::size_t i = 0; i < set->size(); ++i) {
    if (v[i].is_zero()) continue;
    set->decode(i, c.data());
    if (is_end(*p, c.data(), h)) total += v[i];
  }
  r.count = total;
  return r;
}

double transfer_radius(const ProblemPtr& p, int n, Mode mode) {
  require_counting(*p);
  auto set = enumerate_states(p, n, mode, false);
  return spectral_radius(pattern_as<PlusTimesFloat>(successor_pattern(*set)));
}

GrowthBracket growth_bounds(const ProblemPtr& p, int n, bool with_ratio) {
  if (n < 3) throw DimensionTooSmall("growth bounds need n >= 3");
  GrowthBracket g;
  g.problem = p->name();
  g.n = n;
  g.radius = transfer_radius(p, n, Mode::interior);
  g.radius_relaxed = transfer_radius(p, n, Mode::relaxed);
  g.lower = std::pow(g.radius, 1.0 / n);
  g.upper = std::pow(g.radius_relaxed, 1.0 / n);
  if (with_ratio) g.ratio = transfer_radius(p, n + 1, Mode::interior) / g.radius;
  return g;
}

}  // namespace gdl
