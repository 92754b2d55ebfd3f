#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "gdl/common.hpp"

namespace gdl {

using Cost = std::uint32_t;
/// Saturating infinity; any sum of two values <= kInf fits in 32 bits.
constexpr Cost kInf = 0x3FFFFFFF;
inline Cost sat_add(Cost a, Cost b) {
  Cost s = a + b;
  return s < kInf ? s : kInf;
}

using BigNat = boost::multiprecision::cpp_int;

struct MinPlus {
  using value_type = Cost;
  static Cost zero() { return kInf; }
  static Cost one() { return 0; }
  static Cost add(Cost a, Cost b) { return a < b ? a : b; }
  static Cost mul(Cost a, Cost b) { return sat_add(a, b); }
  static bool is_zero(Cost a) { return a >= kInf; }
};

struct PlusTimesBig {
  using value_type = BigNat;
  static BigNat zero() { return 0; }
  static BigNat one() { return 1; }
  static BigNat add(const BigNat& a, const BigNat& b) { return a + b; }
  static BigNat mul(const BigNat& a, const BigNat& b) { return a * b; }
  static bool is_zero(const BigNat& a) { return a.is_zero(); }
};

struct PlusTimesFloat {
  using value_type = double;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a * b; }
  static bool is_zero(double a) { return a == 0.0; }
};

/// Row-compressed matrix over a semiring.  Absent entries are the semiring
/// zero; an empty `vals` means every stored entry is the semiring one.
template <class S>
struct SparseMatrix {
  using T = typename S::value_type;
  std::size_t dim = 0;
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<T> vals;

  std::size_t nnz() const { return cols.size(); }
  bool pattern_only() const { return vals.empty(); }
  T value(std::size_t k) const { return vals.empty() ? S::one() : vals[k]; }

  T at(std::size_t i, std::size_t j) const {
    auto b = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    auto e = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(j));
    if (it == e || *it != j) return S::zero();
    return value(static_cast<std::size_t>(it - cols.begin()));
  }

  static SparseMatrix from_dense(const std::vector<std::vector<T>>& d) {
    SparseMatrix m;
    m.dim = d.size();
    m.row_ptr.assign(1, 0);
    for (const auto& row : d) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (S::is_zero(row[j])) continue;
        m.cols.push_back(static_cast<std::uint32_t>(j));
        m.vals.push_back(row[j]);
      }
      m.row_ptr.push_back(m.cols.size());
    }
    return m;
  }

  std::vector<std::vector<T>> to_dense() const {
    std::vector<std::vector<T>> d(dim, std::vector<T>(dim, S::zero()));
    for (std::size_t i = 0; i < dim; ++i)
      for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) d[i][cols[k]] = value(k);
    return d;
  }
};

template <class S>
SparseMatrix<S> transpose(const SparseMatrix<S>& m) {
  SparseMatrix<S> t;
  t.dim = m.dim;
  std::vector<std::uint64_t> count(m.dim + 1, 0);
  for (auto c : m.cols) ++count[c + 1];
  for (std::size_t i = 0; i < m.dim; ++i) count[i + 1] += count[i];
  t.row_ptr = count;
  t.cols.resize(m.nnz());
  if (!m.pattern_only()) t.vals.resize(m.nnz());
  for (std::size_t i = 0; i < m.dim; ++i) {
    for (auto k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      auto pos = count[m.cols[k]]++;
      t.cols[pos] = static_cast<std::uint32_t>(i);
      if (!m.pattern_only()) t.vals[pos] = m.vals[k];
    }
  }
  return t;
}

namespace detail {

template <class S>
std::vector<typename S::value_type> mat_vec_impl(const SparseMatrix<S>& m,
                                                 const std::vector<typename S::value_type>& v,
                                                 bool parallel) {
  using T = typename S::value_type;
  std::vector<T> w(m.dim, S::zero());
  const long long n = static_cast<long long>(m.dim);
#pragma omp parallel for schedule(dynamic, 256) if (parallel) num_threads(num_threads())
  for (long long i = 0; i < n; ++i) {
    T acc = S::zero();
    for (auto k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      const T& x = v[m.cols[k]];
      if (S::is_zero(x)) continue;
      acc = S::add(acc, m.pattern_only() ? x : S::mul(m.vals[k], x));
    }
    w[i] = std::move(acc);
  }
  return w;
}

}  // namespace detail

/// w[i] = sum_j M[i][j] * v[j]; row-parallel, independent of scheduling.
template <class S>
std::vector<typename S::value_type> mat_vec(const SparseMatrix<S>& m,
                                            const std::vector<typename S::value_type>& v) {
  return detail::mat_vec_impl(m, v, true);
}

/// w[j] = sum_i v[i] * M[i][j]; `mt` must be transpose(M).
template <class S>
std::vector<typename S::value_type> vec_mat_t(const std::vector<typename S::value_type>& v,
                                              const SparseMatrix<S>& mt) {
  return detail::mat_vec_impl(mt, v, true);
}

template <class S>
std::vector<typename S::value_type> vec_mat(const std::vector<typename S::value_type>& v,
                                            const SparseMatrix<S>& m) {
  return vec_mat_t(v, transpose(m));
}

namespace serial {
template <class S>
std::vector<typename S::value_type> mat_vec(const SparseMatrix<S>& m,
                                            const std::vector<typename S::value_type>& v) {
  return detail::mat_vec_impl(m, v, false);
}
template <class S>
std::vector<typename S::value_type> vec_mat(const std::vector<typename S::value_type>& v,
                                            const SparseMatrix<S>& m) {
  using T = typename S::value_type;
  std::vector<T> w(m.dim, S::zero());
  for (std::size_t i = 0; i < m.dim; ++i) {
    if (S::is_zero(v[i])) continue;
    for (auto k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      w[m.cols[k]] = S::add(w[m.cols[k]], S::mul(v[i], m.value(k)));
  }
  return w;
}
}  // namespace serial

/// Sparse product, re-sparsified; BudgetExceeded past budget().max_entries.
template <class S>
SparseMatrix<S> mat_mul(const SparseMatrix<S>& a, const SparseMatrix<S>& b) {
  using T = typename S::value_type;
  const std::size_t n = a.dim;
  std::vector<std::vector<std::uint32_t>> rc(n);
  std::vector<std::vector<T>> rv(n);
#pragma omp parallel num_threads(num_threads())
  {
    std::vector<T> acc(n, S::zero());
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      touched.clear();
      for (auto k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
        const T x = a.value(k);
        const std::uint32_t j = a.cols[k];
        for (auto l = b.row_ptr[j]; l < b.row_ptr[j + 1]; ++l) {
          const std::uint32_t c = b.cols[l];
          if (!seen[c]) {
            seen[c] = 1;
            touched.push_back(c);
          }
          acc[c] = S::add(acc[c], S::mul(x, b.value(l)));
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto c : touched) {
        if (!S::is_zero(acc[c])) {
          rc[i].push_back(c);
          rv[i].push_back(acc[c]);
        }
        acc[c] = S::zero();
        seen[c] = 0;
      }
    }
  }
  SparseMatrix<S> out;
  out.dim = n;
  std::size_t total = 0;
  for (auto& r : rc) total += r.size();
  if (total > budget().max_entries) throw BudgetExceeded("product fill exceeds entry budget");
  out.cols.reserve(total);
  out.vals.reserve(total);
  for (std::size_t i = 0; i < n; ++i) {
    out.cols.insert(out.cols.end(), rc[i].begin(), rc[i].end());
    out.vals.insert(out.vals.end(), rv[i].begin(), rv[i].end());
    out.row_ptr.push_back(out.cols.size());
  }
  return out;
}

/// Dense (min,+) matrix, row-major.
class DenseMinPlus {
 public:
  DenseMinPlus() = default;
  explicit DenseMinPlus(std::size_t n, Cost fill = kInf) : n_(n), a_(n * n, fill) {}
  static DenseMinPlus identity(std::size_t n);
  static DenseMinPlus from_sparse(const SparseMatrix<MinPlus>& m);

  std::size_t dim() const { return n_; }
  Cost& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  Cost operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const Cost* row(std::size_t i) const { return a_.data() + i * n_; }
  Cost* row(std::size_t i) { return a_.data() + i * n_; }
  const std::vector<Cost>& data() const { return a_; }

  Cost min() const;
  bool all_finite() const;
  /// Copy with `c` subtracted from every finite entry.
  DenseMinPlus shifted_down(Cost c) const;
  DenseMinPlus shifted_up(Cost c) const;
  bool operator==(const DenseMinPlus& o) const { return n_ == o.n_ && a_ == o.a_; }
  std::uint64_t hash() const;

 private:
  std::size_t n_ = 0;
  std::vector<Cost> a_;
};

/// Row-parallel (min,+) product.
DenseMinPlus mul(const DenseMinPlus& a, const DenseMinPlus& b);
/// Dense times sparse; cost proportional to dim * nnz(b).
DenseMinPlus mul(const DenseMinPlus& a, const SparseMatrix<MinPlus>& b);
/// a^k by repeated squaring; a^0 is the identity.
DenseMinPlus power(const DenseMinPlus& a, unsigned long long k);

namespace serial {
DenseMinPlus mul(const DenseMinPlus& a, const DenseMinPlus& b);
DenseMinPlus mul(const DenseMinPlus& a, const SparseMatrix<MinPlus>& b);
}

enum class PrimitivityKind { yes, no, unknown };
struct Primitivity {
  PrimitivityKind kind = PrimitivityKind::unknown;
  unsigned k = 0;
};

/// Support digraph structure: strong connectivity and period (gcd of cycle lengths).
struct SupportStructure {
  bool strongly_connected = false;
  unsigned period = 0;
};
SupportStructure support_structure(const std::vector<std::uint64_t>& row_ptr,
                                   const std::vector<std::uint32_t>& cols, std::size_t dim);

Primitivity is_primitive(const SparseMatrix<MinPlus>& m, unsigned cap);

/// M^{l+r} = M^l + p for every l >= start.
struct Recurrence {
  long long start = 0;
  long long period = 0;
  long long increment = 0;
};

Recurrence detect_recurrence(const DenseMinPlus& m, unsigned max_exponent);
Recurrence detect_recurrence(const SparseMatrix<MinPlus>& m, unsigned max_exponent);
/// Checks M^{l+r} = M^l + p for l in [first, last].
bool replay_recurrence(const DenseMinPlus& m, const Recurrence& rec, long long first,
                       long long last);
bool replay_recurrence(const SparseMatrix<MinPlus>& m, const Recurrence& rec, long long first,
                       long long last);

/// Perron root of a nonnegative matrix.  Iterates M + I from the all-ones
/// vector and stops once the Collatz-Wielandt bounds meet, or once the upper
/// bound has settled for reducible inputs.
double spectral_radius(const SparseMatrix<PlusTimesFloat>& m, double tol = 1e-12,
                       int max_iters = 10000);

}  // namespace gdl
