#include "gdl/semiring.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace gdl {

DenseMinPlus DenseMinPlus::identity(std::size_t n) {
  DenseMinPlus m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0;
  return m;
}

DenseMinPlus DenseMinPlus::from_sparse(const SparseMatrix<MinPlus>& s) {
  if (s.dim > budget().max_dense_dim) throw BudgetExceeded("dense dimension over budget");
  DenseMinPlus m(s.dim);
  for (std::size_t i = 0; i < s.dim; ++i)
    for (auto k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) m(i, s.cols[k]) = s.value(k);
  return m;
}

Cost DenseMinPlus::min() const {
  Cost best = kInf;
  for (Cost x : a_) best = x < best ? x : best;
  return best;
}

bool DenseMinPlus::all_finite() const {
  for (Cost x : a_)
    if (x >= kInf) return false;
  return true;
}

DenseMinPlus DenseMinPlus::shifted_down(Cost c) const {
  DenseMinPlus r = *this;
  for (Cost& x : r.a_)
    if (x < kInf) x -= c;
  return r;
}

DenseMinPlus DenseMinPlus::shifted_up(Cost c) const {
  DenseMinPlus r = *this;
  for (Cost& x : r.a_)
    if (x < kInf) x = sat_add(x, c);
  return r;
}

std::uint64_t DenseMinPlus::hash() const {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ n_;
  for (Cost x : a_) {
    h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
  }
  return h;
}

namespace {

DenseMinPlus mul_impl(const DenseMinPlus& a, const DenseMinPlus& b, bool parallel) {
  const std::size_t n = a.dim();
  DenseMinPlus c(n);
#pragma omp parallel for schedule(dynamic, 4) if (parallel) num_threads(num_threads())
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    Cost* out = c.row(i);
    const Cost* ar = a.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const Cost x = ar[k];
      if (x >= kInf) continue;
      const Cost* br = b.row(k);
      for (std::size_t j = 0; j < n; ++j) {
        const Cost s = x + br[j];
        out[j] = s < out[j] ? s : out[j];
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (out[j] > kInf) out[j] = kInf;
  }
  return c;
}

DenseMinPlus mul_sparse_impl(const DenseMinPlus& a, const SparseMatrix<MinPlus>& b, bool parallel) {
  const std::size_t n = a.dim();
  DenseMinPlus c(n);
#pragma omp parallel for schedule(dynamic, 4) if (parallel) num_threads(num_threads())
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    Cost* out = c.row(i);
    const Cost* ar = a.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const Cost x = ar[k];
      if (x >= kInf) continue;
      for (auto e = b.row_ptr[k]; e < b.row_ptr[k + 1]; ++e) {
        const Cost s = sat_add(x, b.value(e));
        Cost& o = out[b.cols[e]];
        o = s < o ? s : o;
      }
    }
  }
  return c;
}

}  // namespace

DenseMinPlus mul(const DenseMinPlus& a, const DenseMinPlus& b) { return mul_impl(a, b, true); }
DenseMinPlus mul(const DenseMinPlus& a, const SparseMatrix<MinPlus>& b) {
  return mul_sparse_impl(a, b, true);
}

namespace serial {
DenseMinPlus mul(const DenseMinPlus& a, const DenseMinPlus& b) { return mul_impl(a, b, false); }
DenseMinPlus mul(const DenseMinPlus& a, const SparseMatrix<MinPlus>& b) {
  return mul_sparse_impl(a, b, false);
}
}  // namespace serial

DenseMinPlus power(const DenseMinPlus& a, unsigned long long k) {
  DenseMinPlus result = DenseMinPlus::identity(a.dim());
  DenseMinPlus base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? base : mul(result, base);
      first = false;
    }
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

SupportStructure support_structure(const std::vector<std::uint64_t>& row_ptr,
                                   const std::vector<std::uint32_t>& cols, std::size_t dim) {
  SupportStructure out;
  if (dim == 0) return out;
  // forward reachability from 0
  auto reach = [&](const std::vector<std::uint64_t>& rp, const std::vector<std::uint32_t>& cs) {
    std::vector<char> seen(dim, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto k = rp[u]; k < rp[u + 1]; ++k) {
        if (!seen[cs[k]]) {
          seen[cs[k]] = 1;
          ++count;
          stack.push_back(cs[k]);
        }
      }
    }
    return count == dim;
  };
  SparseMatrix<MinPlus> fwd;
  fwd.dim = dim;
  fwd.row_ptr = row_ptr;
  fwd.cols = cols;
  auto bwd = transpose(fwd);
  out.strongly_connected = reach(row_ptr, cols) && reach(bwd.row_ptr, bwd.cols);
  if (!out.strongly_connected) return out;
  std::vector<long long> level(dim, -1);
  std::vector<std::uint32_t> queue{0};
  level[0] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto u = queue[qi];
    for (auto k = row_ptr[u]; k < row_ptr[u + 1]; ++k) {
      if (level[cols[k]] < 0) {
        level[cols[k]] = level[u] + 1;
        queue.push_back(cols[k]);
      }
    }
  }
  long long g = 0;
  for (std::size_t u = 0; u < dim; ++u)
    for (auto k = row_ptr[u]; k < row_ptr[u + 1]; ++k)
      g = std::gcd(g, std::llabs(level[u] + 1 - level[cols[k]]));
  out.period = static_cast<unsigned>(g);
  return out;
}

Primitivity is_primitive(const SparseMatrix<MinPlus>& m, unsigned cap) {
  const std::size_t n = m.dim;
  // entries equal to kInf are absent by construction
  SupportStructure st = support_structure(m.row_ptr, m.cols, n);
  if (!st.strongly_connected || st.period != 1) return {PrimitivityKind::no, 0};
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> base(n * words, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      base[i * words + m.cols[k] / 64] |= 1ULL << (m.cols[k] % 64);
  auto full = [&](const std::vector<std::uint64_t>& a) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t want = (w + 1 < words || n % 64 == 0) ? ~0ULL : ((1ULL << (n % 64)) - 1);
        if (a[i * words + w] != want) return false;
      }
    return true;
  };
  std::vector<std::uint64_t> cur = base;
  for (unsigned k = 1; k <= cap; ++k) {
    if (full(cur)) return {PrimitivityKind::yes, k};
    if (k == cap) break;
    std::vector<std::uint64_t> next(n * words, 0);
#pragma omp parallel for schedule(dynamic, 16) num_threads(num_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      std::uint64_t* out = next.data() + i * words;
      const std::uint64_t* row = cur.data() + i * words;
      for (std::size_t j = 0; j < n; ++j) {
        if (!((row[j / 64] >> (j % 64)) & 1)) continue;
        const std::uint64_t* b = base.data() + j * words;
        for (std::size_t w = 0; w < words; ++w) out[w] |= b[w];
      }
    }
    cur.swap(next);
  }
  return {PrimitivityKind::unknown, 0};
}

namespace {

SparseMatrix<MinPlus> to_sparse(const DenseMinPlus& d) {
  SparseMatrix<MinPlus> s;
  s.dim = d.dim();
  for (std::size_t i = 0; i < d.dim(); ++i) {
    for (std::size_t j = 0; j < d.dim(); ++j) {
      if (d(i, j) >= kInf) continue;
      s.cols.push_back(static_cast<std::uint32_t>(j));
      s.vals.push_back(d(i, j));
    }
    s.row_ptr.push_back(s.cols.size());
  }
  return s;
}

}  // namespace

Recurrence detect_recurrence(const DenseMinPlus& m, unsigned max_exponent) {
  return detect_recurrence(to_sparse(m), max_exponent);
}

Recurrence detect_recurrence(const SparseMatrix<MinPlus>& m, unsigned max_exponent) {
  SupportStructure st = support_structure(m.row_ptr, m.cols, m.dim);
  if (!st.strongly_connected || st.period != 1) throw NotPrimitive("matrix is not primitive");
  // Normalised powers kept in full for exact comparison on hash hits.
  const std::size_t bytes = std::max<std::size_t>(1, m.dim * m.dim * sizeof(Cost));
  const std::size_t window_size = std::clamp<std::size_t>((std::size_t{1} << 30) / bytes, 2, 64);
  const DenseMinPlus first = DenseMinPlus::from_sparse(m);
  auto nth_power = [&](long long l) {
    DenseMinPlus q = first;
    for (long long k = 1; k < l; ++k) q = mul(q, m);
    return q;
  };
  std::unordered_map<std::uint64_t, std::vector<long long>> seen;
  std::vector<Cost> mins{0};
  std::deque<std::pair<long long, DenseMinPlus>> window;
  DenseMinPlus p = first;
  for (long long l = 1; l <= static_cast<long long>(max_exponent); ++l) {
    Cost mn = p.min();
    mins.push_back(mn);
    DenseMinPlus norm = p.shifted_down(mn);
    std::uint64_t h = norm.hash();
    auto it = seen.find(h);
    if (it != seen.end()) {
      for (long long l0 : it->second) {
        bool equal = false;
        bool found = false;
        for (const auto& [lw, mw] : window) {
          if (lw == l0) {
            equal = mw == norm;
            found = true;
            break;
          }
        }
        if (!found) equal = nth_power(l0).shifted_down(mins[static_cast<std::size_t>(l0)]) == norm;
        if (equal) {
          return {l0, l - l0,
                  static_cast<long long>(mn) - static_cast<long long>(mins[static_cast<std::size_t>(l0)])};
        }
      }
    }
    seen[h].push_back(l);
    window.emplace_back(l, std::move(norm));
    if (window.size() > window_size) window.pop_front();
    p = mul(p, m);
  }
  throw NotFound("no recurrence up to exponent " + std::to_string(max_exponent));
}

bool replay_recurrence(const DenseMinPlus& m, const Recurrence& rec, long long first,
                       long long last) {
  return replay_recurrence(to_sparse(m), rec, first, last);
}

bool replay_recurrence(const SparseMatrix<MinPlus>& m, const Recurrence& rec, long long first,
                       long long last) {
  if (rec.period < 1 || first < 1 || rec.increment < 0) return false;
  const long long r = rec.period;
  std::vector<DenseMinPlus> ring(static_cast<std::size_t>(r + 1));
  DenseMinPlus p = DenseMinPlus::from_sparse(m);
  for (long long l = 1; l <= last + r; ++l) {
    if (l >= first + r) {
      const DenseMinPlus& earlier = ring[static_cast<std::size_t>((l - r) % (r + 1))];
      if (!(p == earlier.shifted_up(static_cast<Cost>(rec.increment)))) return false;
    }
    ring[static_cast<std::size_t>(l % (r + 1))] = p;
    if (l < last + r) p = mul(p, m);
  }
  return true;
}

double spectral_radius(const SparseMatrix<PlusTimesFloat>& m, double tol, int max_iters) {
  if (m.dim == 0) return 0.0;
  constexpr double tiny = 1e-250;
  std::vector<double> v(m.dim, 1.0);
  double prev_upper = -1.0;
  int settled = 0;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> w = mat_vec(m, v);
    double lower = std::numeric_limits<double>::infinity(), upper = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < m.dim; ++i) {
      w[i] += v[i];
      norm = std::max(norm, w[i]);
      if (v[i] < tiny) continue;
      const double r = w[i] / v[i];
      lower = std::min(lower, r);
      upper = std::max(upper, r);
    }
    if (upper - lower <= tol * upper) return std::max(0.0, 0.5 * (upper + lower) - 1.0);
    settled = std::fabs(upper - prev_upper) <= tol * upper ? settled + 1 : 0;
    if (settled >= 50) return std::max(0.0, upper - 1.0);
    prev_upper = upper;
    for (double& x : w) x /= norm;
    v.swap(w);
  }
  throw NoConvergence("power iteration did not converge");
}

}  // namespace gdl
