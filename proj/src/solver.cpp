#include "gdl/solver.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace gdl {

SparseMatrix<MinPlus> successor_pattern(const StateSet& set, bool parallel) {
  const long long n = static_cast<long long>(set.size());
  std::vector<std::vector<std::uint32_t>> lists(static_cast<std::size_t>(n));
  bool over = false;
  std::size_t total = 0;
#pragma omp parallel for schedule(dynamic, 64) if (parallel) num_threads(num_threads()) reduction(+ : total)
  for (long long i = 0; i < n; ++i) {
    lists[i] = successors(set, static_cast<std::size_t>(i));
    total += lists[i].size();
  }
  if (total > budget().max_entries) over = true;
  if (over) throw CapacityExceeded("compatible pairs exceed entry budget");
  SparseMatrix<MinPlus> m;
  m.dim = set.size();
  m.cols.reserve(total);
  for (auto& l : lists) {
    m.cols.insert(m.cols.end(), l.begin(), l.end());
    m.row_ptr.push_back(m.cols.size());
    std::vector<std::uint32_t>().swap(l);
  }
  return m;
}

TransferSystemPtr build_system(const ProblemPtr& p, int n, bool prune_symmetry, Mode mode,
                               bool parallel) {
  auto sys = std::make_shared<TransferSystem>();
  sys->states = enumerate_states(p, n, mode, prune_symmetry);
  const StateSet& set = *sys->states;
  const std::size_t count = set.size();
  sys->F.assign(count, kInf);
  sys->E.assign(count, kInf);
  sys->weight.assign(count, 0);
  Cells c{};
  for (std::size_t i = 0; i < count; ++i) {
    set.decode(i, c.data());
    Cost w = 0;
    for (int k = 0; k < n; ++k) w += static_cast<Cost>(p->cost(c[k]));
    sys->weight[i] = w;
    if (is_first(*p, c.data(), n, mode)) sys->F[i] = w;
    if (is_end(*p, c.data(), n, mode)) sys->E[i] = 0;
  }
  sys->T = successor_pattern(set, parallel);
  sys->T.vals.resize(sys->T.nnz());
  for (std::size_t k = 0; k < sys->T.nnz(); ++k) sys->T.vals[k] = sys->weight[sys->T.cols[k]];
  sys->Tt = transpose(sys->T);
  return sys;
}

namespace {
std::mutex g_cache_mu;
std::map<std::tuple<std::string, int, bool>, TransferSystemPtr> g_cache;
}  // namespace

TransferSystemPtr cached_system(const ProblemPtr& p, int n, bool prune_symmetry) {
  auto key = std::make_tuple(p->name(), n, prune_symmetry);
  {
    std::lock_guard<std::mutex> lock(g_cache_mu);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  auto sys = build_system(p, n, prune_symmetry);
  std::lock_guard<std::mutex> lock(g_cache_mu);
  g_cache[key] = sys;
  return sys;
}

void clear_system_cache() {
  std::lock_guard<std::mutex> lock(g_cache_mu);
  g_cache.clear();
}

namespace {

std::optional<long long> close_with_end(const std::vector<Cost>& v, const std::vector<Cost>& e) {
  Cost best = kInf;
  for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, sat_add(v[i], e[i]));
  if (best >= kInf) return std::nullopt;
  return static_cast<long long>(best);
}

}  // namespace

std::vector<std::optional<long long>> gamma_sequence(const TransferSystem& sys, int m_max) {
  std::vector<std::optional<long long>> out(static_cast<std::size_t>(m_max) + 1);
  std::vector<Cost> v = sys.F;
  for (int m = 1; m <= m_max; ++m) {
    out[m] = close_with_end(v, sys.E);
    if (m < m_max) v = vec_mat_t(v, sys.Tt);
  }
  return out;
}

std::optional<long long> gamma(const ProblemPtr& p, int n, int m, bool prune_symmetry) {
  if (n < 1 || m < 1) throw Error("grid dimensions must be positive");
  auto sys = cached_system(p, n, prune_symmetry);
  return gamma_sequence(*sys, m)[m];
}

namespace {

std::uint64_t hash_vector(const std::vector<Cost>& v) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (Cost x : v) {
    h ^= x;
    h *= 0x100000001B3ULL;
    h ^= h >> 29;
  }
  return h;
}

std::vector<Cost> normalised(const std::vector<Cost>& v, Cost mn) {
  std::vector<Cost> out(v);
  for (Cost& x : out)
    if (x < kInf) x -= mn;
  return out;
}

bool relation_holds(const std::vector<std::optional<long long>>& g, long long m, long long r,
                    long long p) {
  if (m - r < 1) return false;
  const auto& a = g[static_cast<std::size_t>(m)];
  const auto& b = g[static_cast<std::size_t>(m - r)];
  if (!a || !b) return !a && !b && p == 0;
  return *a == *b + p;
}

void back_shift(GammaRecurrence& rec, const std::vector<std::optional<long long>>& g) {
  long long s = rec.proven_start;
  while (s - 1 - rec.period >= 1 && relation_holds(g, s - 1, rec.period, rec.increment)) --s;
  rec.start = s;
}

}  // namespace

GammaRecurrence find_recurrence(const TransferSystem& sys, int max_exponent) {
  constexpr std::size_t kWindow = 64;
  GammaRecurrence rec;
  SupportStructure st = support_structure(sys.T.row_ptr, sys.T.cols, sys.T.dim);
  rec.primitive = st.strongly_connected && st.period == 1;
  std::unordered_map<std::uint64_t, std::vector<long long>> seen;
  std::vector<Cost> mins{0};
  std::vector<std::pair<long long, std::vector<Cost>>> window;
  std::vector<std::optional<long long>> g{std::nullopt};
  std::vector<Cost> v = sys.F;
  for (long long l = 1; l <= max_exponent; ++l) {
    g.push_back(close_with_end(v, sys.E));
    Cost mn = *std::min_element(v.begin(), v.end());
    if (mn >= kInf) throw NotFound("no valid column sequence");
    mins.push_back(mn);
    std::vector<Cost> norm = normalised(v, mn);
    std::uint64_t h = hash_vector(norm);
    auto it = seen.find(h);
    if (it != seen.end()) {
      for (long long l0 : it->second) {
        bool equal = false;
        bool found = false;
        for (const auto& [lw, w] : window)
          if (lw == l0) {
            equal = w == norm;
            found = true;
            break;
          }
        if (!found) {
          std::vector<Cost> u = sys.F;
          for (long long k = 1; k < l0; ++k) u = vec_mat_t(u, sys.Tt);
          equal = normalised(u, mins[l0]) == norm;
        }
        if (equal) {
          rec.orbit_start = l0;
          rec.period = l - l0;
          rec.increment = static_cast<long long>(mn) - static_cast<long long>(mins[l0]);
          rec.proven_start = l0 + rec.period;
          back_shift(rec, g);
          return rec;
        }
      }
    }
    seen[h].push_back(l);
    window.emplace_back(l, std::move(norm));
    if (window.size() > kWindow) window.erase(window.begin());
    v = vec_mat_t(v, sys.Tt);
  }
  throw NotFound("no recurrence within " + std::to_string(max_exponent) + " columns");
}

GammaRecurrence find_recurrence(const ProblemPtr& p, int n, int max_exponent) {
  return find_recurrence(*cached_system(p, n, true), max_exponent);
}

GammaRecurrence find_recurrence_by_powers(const TransferSystem& sys, int max_exponent) {
  Recurrence r = detect_recurrence(sys.T,
                                   static_cast<unsigned>(max_exponent));
  GammaRecurrence rec;
  rec.primitive = true;
  rec.period = r.period;
  rec.increment = r.increment;
  rec.orbit_start = r.start + 1;
  rec.proven_start = r.start + 1 + r.period;
  auto g = gamma_sequence(sys, static_cast<int>(rec.proven_start));
  back_shift(rec, g);
  return rec;
}

PiecewiseFormula synthesize_formula(const GammaRecurrence& rec,
                                    const std::vector<std::optional<long long>>& values,
                                    int height) {
  if (rec.period < 1) throw Error("period must be positive");
  PiecewiseFormula f;
  f.height = height;
  f.period = rec.period;
  f.increment = rec.increment;
  f.floor = std::max<long long>(1, rec.start - rec.period);
  if (static_cast<long long>(values.size()) <= f.floor + f.period - 1)
    throw InsufficientInitialValues("need gamma up to m = " +
                                    std::to_string(f.floor + f.period - 1));
  for (long long m = 1; m < f.floor; ++m) f.exceptions[m] = values[static_cast<std::size_t>(m)];
  for (long long c = 0; c < f.period; ++c) {
    const auto& v = values[static_cast<std::size_t>(f.floor + c)];
    if (!v) throw InsufficientInitialValues("infeasible value inside the periodic range");
    f.base.push_back(*v);
  }
  return f;
}

std::optional<long long> eval_formula(const PiecewiseFormula& f, long long m) {
  if (m < 1) return std::nullopt;
  if (m < f.floor) {
    auto it = f.exceptions.find(m);
    if (it == f.exceptions.end()) return std::nullopt;
    return it->second;
  }
  long long c = (m - f.floor) % f.period;
  long long mc = f.floor + c;
  return f.base[static_cast<std::size_t>(c)] + f.increment * ((m - mc) / f.period);
}

std::string PiecewiseFormula::describe() const {
  std::ostringstream os;
  os << "for m >= " << floor << ": value = " << increment << "*floor((m - m_c)/" << period
     << ") + b(m_c), m_c = " << floor << " + ((m - " << floor << ") mod " << period << "), b = [";
  for (std::size_t i = 0; i < base.size(); ++i) os << (i ? ", " : "") << base[i];
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Published closed formulas.

namespace {

long long cdiv(long long a, long long b) { return (a + b - 1) / b; }

bool in(long long x, std::initializer_list<long long> s) {
  return std::find(s.begin(), s.end(), x) != s.end();
}

std::optional<long long> two_dom(long long n, long long m) {
  switch (n) {
    case 1: return cdiv(m + 1, 2);
    case 2: return m;
    case 3: return m + cdiv(m, 3);
    case 4: return 2 * m - m / 4 + (m % 4 == 3 ? 0 : 1);
    case 5: return 2 * m + cdiv(m, 7) + (in(m % 7, {0, 6}) ? 1 : 0);
    case 6: return 2 * m + 6 * m / 11 + (in(m % 11, {0, 2, 6}) ? 1 : 2);
    case 7: return 3 * m - m / 18 + ((m > 9 && m % 18 <= 9 && m % 18 != 7) ? 1 : 0);
    case 8: return 3 * m + m / 3 + (m % 3 == 2 ? 2 : 1);
    default: return (n + 2) * (m + 2) / 3 - 6;
  }
}

std::optional<long long> roman(long long n, long long m) {
  switch (n) {
    case 1: return cdiv(2 * m, 3);
    case 2: return m + 1;
    case 3: return cdiv(3 * m, 2) + (m % 4 == 1 ? 0 : 1);
    case 4:
      if (m == 5 || m == 6) return 2 * m + 1;
      if (m > 5) return 2 * m;
      return std::nullopt;
    case 5: return 12 * m / 5 + 2;
    case 6: return 14 * m / 5 + (in(m % 5, {0, 3, 4}) ? 2 : 3);
    case 7: return 16 * m / 5 + ((m == 7 || m % 5 == 0) ? 2 : 3);
    case 8: return 18 * m / 5 + (m % 5 == 3 ? 4 : 3);
    default:
      return (2 * (n + 1) * (m + 1) - 2) / 5 - ((n % 5 == 4 && m % 5 == 4) ? 1 : 0);
  }
}

std::optional<long long> total(long long n, long long m) {
  switch (n) {
    case 1:
      if (m == 1) return std::nullopt;
      return m / 2 + (m % 4 == 0 ? 0 : 1);
    case 2: return (2 * m + 2) / 3 + (m % 3 == 1 ? 1 : 0);
    case 3: return m;
    case 4: return (6 * m + 3) / 5 + (in(m % 5, {0, 3}) ? 2 : 1);
    case 5: return (6 * m + 3) / 4 + (m % 4 == 0 ? 2 : 1);
    case 6: {
      long long b = 12 * m / 7;
      if (m % 7 == 5) return b + 4;
      if (in(m % 7, {1, 2, 3})) return b + 3;
      return b + 2;
    }
    case 7: return 2 * m + ((m % 2 == 0 || in(m, {9, 11, 15, 21})) ? 2 : 1);
    case 8: {
      long long b = (20 * m + 6) / 9;
      if (in(m % 9, {0, 7}) && !in(m, {9, 16})) return b + 4;
      if (in(m % 9, {2, 3, 4, 5})) return b + 3;
      return b + 2;
    }
    case 9: return (10 * m + 3) / 4 + (m % 4 == 2 ? 3 : 2);
    case 10: {
      long long b = (30 * m + 1) / 11;
      if (m % 11 == 9 && m != 20) return b + 6;
      if (in(m % 11, {2, 5, 7}) && !in(m, {13, 18})) return b + 5;
      if (in(m % 11, {0, 1, 3, 6}) || m == 20) return b + 4;
      return b + 3;
    }
    case 11:
      if (in(m, {12, 22})) return 3 * m + 4;
      if (in(m, {13, 15, 17, 19, 23, 27, 29, 33, 37, 43, 47, 57})) return 3 * m + 3;
      return 3 * m + 2;
    case 12: {
      long long b = (42 * m + 9) / 13;
      if (in(m % 13, {0, 11}) && !in(m, {13, 24, 26, 37})) return b + 6;
      if (in(m % 13, {2, 4, 7, 9}) && !in(m, {15, 17, 20})) return b + 5;
      if (in(m % 13, {3, 5, 6, 8}) || in(m, {13, 24, 26, 37})) return b + 4;
      return b + 3;
    }
    case 13: {
      long long b = (14 * m + 3) / 4;
      if (in(m, {14, 26})) return b + 5;
      if (m % 4 == 0 || m == 19) return b + 4;
      return b + 3;
    }
    case 14: {
      long long b = (56 * m + 2) / 15;
      if (m % 15 == 13 && !in(m, {28, 43})) return b + 8;
      if (in(m % 15, {2, 9, 11}) && !in(m, {17, 24, 26, 32, 41})) return b + 7;
      if ((in(m % 15, {0, 5, 6, 7}) && !in(m, {15, 21, 22, 30})) || in(m, {28, 43})) return b + 6;
      if (in(m % 15, {1, 3, 4, 10}) || in(m, {17, 24, 26, 32, 41})) return b + 5;
      return b + 4;
    }
    case 15:
      if (in(m, {16, 30})) return 4 * m + 6;
      if (in(m, {21, 23})) return 4 * m + 5;
      if ((m % 2 == 0 && !in(m, {16, 30})) ||
          in(m, {17, 19, 25, 27, 31, 35, 37, 39, 41, 45, 49, 53, 55, 59, 63, 67, 73, 77, 81, 91,
                 95, 109}))
        return 4 * m + 4;
      return 4 * m + 3;
    default: return std::nullopt;
  }
}

std::optional<long long> dist2(long long n, long long m) {
  switch (n) {
    case 1: return cdiv(m, 5);
    case 2: return m / 4 + 1;
    case 3: return cdiv(m, 3);
    case 4: return 3 * m / 7 + (in(m % 7, {0, 1, 3, 5}) ? 1 : 2);
    case 5: return (m + 1) / 2 + (m % 6 == 1 ? 0 : 1);
    case 6: return 3 * m / 5 + ((m % 5 != 3 && m != 7) ? 1 : 2);
    case 7: return m == 9 ? 7 : 2 * m / 3 + 2;
    case 8:
      if (m == 13) return 12;
      return 3 * m / 4 + (in(m % 8, {4, 7}) ? 1 : 2);
    case 9: {
      long long b = 5 * m / 6;
      if (in(m, {11, 18})) return b + 1;
      if (in(m % 6, {2, 3}) && !in(m, {4, 9, 14, 15, 20, 21, 27, 32, 39})) return b + 3;
      return b + 2;
    }
    case 10: return 10 * m / 11 + (in(m % 11, {2, 3, 5, 8}) ? 3 : 2);
    case 11:
      return m + (in(m % 30, {1, 4, 6, 7, 9, 11, 14, 16, 17, 19, 21, 24, 26, 27, 29, 0}) ? 1 : 2);
    case 12: {
      long long b = 15 * m / 14;
      if (m % 14 == 11 && m != 25) return b + 4;
      if (in(m % 14, {1, 4, 7}) || in(m, {14, 17, 19, 28})) return b + 2;
      return b + 3;
    }
    case 13: {
      long long b = 15 * m / 13;
      if (m % 13 == 5 && m != 31) return b + 4;
      if ((m != 13 && in(m % 13, {0, 2, 3, 6, 8, 10, 11, 12})) || m == 31) return b + 3;
      return b + 2;
    }
    case 14: {
      long long b = 21 * m / 17;
      if (m % 17 == 1 || in(m, {23, 30, 47})) return b + 2;
      if (m == 36 || (m > 46 && in(m % 17, {2, 3, 8, 11, 14, 16}) && !in(m, {54, 59, 71})))
        return b + 4;
      return b + 3;
    }
    case 15: {
      long long b = 21 * m / 16;
      if (in(m % 16, {1, 4, 7})) return b + 2;
      if (in(m % 16, {2, 3, 5, 8}) && !in(m, {19, 21})) return b + 4;
      return b + 3;
    }
    default: return std::nullopt;
  }
}

std::optional<long long> domination(long long n, long long m) {
  if (n >= 16) return cdiv((n + 2) * (m + 2), 5) - 4;
  return std::nullopt;
}

std::optional<long long> lookup(const std::string& problem, long long n, long long m) {
  if (n < 1 || m < 1) return std::nullopt;
  if (n > m) std::swap(n, m);
  if (problem == "2dom" || problem == "ab:0,2") return two_dom(n, m);
  if (problem == "roman") return roman(n, m);
  if (problem == "total" || problem == "ab:1,1") return total(n, m);
  if (problem == "dist2") return dist2(n, m);
  if (problem == "dom" || problem == "ab:0,1") return domination(n, m);
  return std::nullopt;
}

}  // namespace

bool reference_available(const std::string& problem, long long n, long long m) {
  return lookup(problem, n, m).has_value();
}

long long reference_formula(const std::string& problem, long long n, long long m) {
  auto v = lookup(problem, n, m);
  if (!v) throw OutOfTable("no tabulated formula for " + problem + " at (" + std::to_string(n) +
                           ", " + std::to_string(m) + ")");
  return *v;
}

}  // namespace gdl
