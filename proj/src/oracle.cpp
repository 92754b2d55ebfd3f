#include "gdl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace gdl {

namespace {

struct Grid {
  int n, m, cells;
  std::vector<std::uint32_t> open, closed, ball2;
  std::vector<int> missing;  // neighbour slots outside the grid

  Grid(int n_, int m_) : n(n_), m(m_), cells(n_ * m_) {
    open.assign(cells, 0);
    closed.assign(cells, 0);
    ball2.assign(cells, 0);
    missing.assign(cells, 0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < m; ++c) {
        int k = r * m + c;
        const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
        for (int d = 0; d < 4; ++d) {
          int rr = r + dr[d], cc = c + dc[d];
          if (rr < 0 || rr >= n || cc < 0 || cc >= m)
            ++missing[k];
          else
            open[k] |= 1u << (rr * m + cc);
        }
        closed[k] = open[k] | (1u << k);
        for (int rr = 0; rr < n; ++rr)
          for (int cc = 0; cc < m; ++cc)
            if (std::abs(rr - r) + std::abs(cc - c) <= 2) ball2[k] |= 1u << (rr * m + cc);
      }
  }
};

bool dominating(const Grid& g, std::uint32_t s) {
  for (int k = 0; k < g.cells; ++k)
    if (!(g.closed[k] & s)) return false;
  return true;
}

bool total_dominating(const Grid& g, std::uint32_t s) {
  for (int k = 0; k < g.cells; ++k)
    if (!(g.open[k] & s)) return false;
  return true;
}

bool set_ok(const Definition& def, const Grid& g, std::uint32_t s) {
  switch (def.kind) {
    case Kind::ab:
      for (int k = 0; k < g.cells; ++k) {
        int need = (s >> k) & 1 ? def.a : def.b;
        if (std::popcount(g.open[k] & s) < need) return false;
      }
      return true;
    case Kind::dist2:
      for (int k = 0; k < g.cells; ++k)
        if (!(g.ball2[k] & s)) return false;
      return true;
    case Kind::minimal_dom:
      if (!dominating(g, s)) return false;
      for (int k = 0; k < g.cells; ++k)
        if (((s >> k) & 1) && dominating(g, s & ~(1u << k))) return false;
      return true;
    case Kind::minimal_total:
      if (!total_dominating(g, s)) return false;
      for (int k = 0; k < g.cells; ++k)
        if (((s >> k) & 1) && total_dominating(g, s & ~(1u << k))) return false;
      return true;
    case Kind::roman:
      break;
  }
  return false;
}

bool roman_ok(const Grid& g, std::uint32_t s1, std::uint32_t s2) {
  for (int k = 0; k < g.cells; ++k) {
    if (((s1 | s2) >> k) & 1) continue;
    if (!(g.open[k] & s2)) return false;
  }
  return true;
}

void check_size(const Problem& p, int n, int m) {
  if (n < 1 || m < 1) throw Error("grid dimensions must be positive");
  bool roman = p.definition().kind == Kind::roman;
  if (roman ? n * m > 12 : n * m > 20) throw TooLarge("oracle search space too large");
}

// Decodes x in base 3 into (S1, S2) masks.
void roman_masks(long long x, int cells, std::uint32_t& s1, std::uint32_t& s2) {
  s1 = s2 = 0;
  for (int k = 0; k < cells; ++k) {
    int d = static_cast<int>(x % 3);
    x /= 3;
    if (d == 1) s1 |= 1u << k;
    if (d == 2) s2 |= 1u << k;
  }
}

long long pow3(int k) {
  long long r = 1;
  while (k-- > 0) r *= 3;
  return r;
}

}  // namespace

bool satisfies(const Definition& def, int n, int m, const Assignment& x) {
  Grid g(n, m);
  std::uint32_t s1 = 0, s2 = 0;
  for (int k = 0; k < g.cells; ++k) {
    if (x[k] == 1) s1 |= 1u << k;
    if (x[k] == 2) s2 |= 1u << k;
  }
  if (def.kind == Kind::roman) return roman_ok(g, s1, s2);
  if (s2) return false;
  return set_ok(def, g, s1);
}

std::optional<long long> brute_min_cost(const Problem& p, int n, int m) {
  check_size(p, n, m);
  Grid g(n, m);
  const Definition def = p.definition();
  long long best = std::numeric_limits<long long>::max();
  if (def.kind == Kind::roman) {
    const long long total = pow3(g.cells);
#pragma omp parallel for reduction(min : best) schedule(static) num_threads(num_threads())
    for (long long x = 0; x < total; ++x) {
      std::uint32_t s1, s2;
      roman_masks(x, g.cells, s1, s2);
      if (roman_ok(g, s1, s2)) {
        long long c = std::popcount(s1) + 2LL * std::popcount(s2);
        best = std::min(best, c);
      }
    }
  } else {
    const long long total = 1LL << g.cells;
#pragma omp parallel for reduction(min : best) schedule(static) num_threads(num_threads())
    for (long long x = 0; x < total; ++x) {
      auto s = static_cast<std::uint32_t>(x);
      if (set_ok(def, g, s)) best = std::min<long long>(best, std::popcount(s));
    }
  }
  if (best == std::numeric_limits<long long>::max()) return std::nullopt;
  return best;
}

BigNat brute_count(const Problem& p, int n, int m) {
  check_size(p, n, m);
  Grid g(n, m);
  const Definition def = p.definition();
  unsigned long long count = 0;
  if (def.kind == Kind::roman) {
    const long long total = pow3(g.cells);
#pragma omp parallel for reduction(+ : count) schedule(static) num_threads(num_threads())
    for (long long x = 0; x < total; ++x) {
      std::uint32_t s1, s2;
      roman_masks(x, g.cells, s1, s2);
      if (roman_ok(g, s1, s2)) ++count;
    }
  } else {
    const long long total = 1LL << g.cells;
#pragma omp parallel for reduction(+ : count) schedule(static) num_threads(num_threads())
    for (long long x = 0; x < total; ++x)
      if (set_ok(def, g, static_cast<std::uint32_t>(x))) ++count;
  }
  return BigNat(count);
}

namespace {

// Exhaustive minimum of the scaled loss over fillings of the cells in `cells`
// (row-major indices into an n x m grid).  slack[k] counts unknown neighbours
// that may still dominate cell k.
long long min_partial_loss(const Problem& p, int n, int m, const std::vector<int>& cells,
                           const std::vector<int>& slack) {
  const auto* w = p.as_weighted();
  if (!w) throw Unsupported(p.name() + " has no band loss");
  const int choices = w->choice_count();
  const int count = static_cast<int>(cells.size());
  long long total = 1;
  for (int i = 0; i < count; ++i) {
    total *= choices;
    if (total > (1LL << 31)) throw TooLarge("border search space too large");
  }
  std::vector<int> pos(n * m, -1);
  for (int i = 0; i < count; ++i) pos[cells[i]] = i;
  // neighbour lists among known cells, plus off-grid counts
  std::vector<std::vector<int>> nb(count);
  std::vector<int> off(count, 0);
  for (int i = 0; i < count; ++i) {
    int r = cells[i] / m, c = cells[i] % m;
    const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
    for (int d = 0; d < 4; ++d) {
      int rr = r + dr[d], cc = c + dc[d];
      if (rr < 0 || rr >= n || cc < 0 || cc >= m) {
        ++off[i];
        continue;
      }
      int q = pos[rr * m + cc];
      if (q >= 0) nb[i].push_back(q);
    }
  }
  long long best = std::numeric_limits<long long>::max();
#pragma omp parallel for reduction(min : best) schedule(static) num_threads(num_threads())
  for (long long x = 0; x < total; ++x) {
    std::vector<int> ch(count);
    long long y = x;
    for (int i = 0; i < count; ++i) {
      ch[i] = static_cast<int>(y % choices);
      y /= choices;
    }
    long long loss = 0;
    bool ok = true;
    for (int i = 0; i < count && ok; ++i) {
      int cnt = 0;
      for (int q : nb[i]) {
        if (w->dominates(ch[q])) ++cnt;
        if (!w->adjacent_ok(ch[i], ch[q])) ok = false;
      }
      if (cnt + slack[cells[i]] < w->requirement(ch[i])) ok = false;
      LossContext ctx{ch[i], cnt, off[i]};
      loss += w->local_loss(ctx);
    }
    if (ok) best = std::min(best, loss);
  }
  if (best == std::numeric_limits<long long>::max()) return -1;
  return best;
}

}  // namespace

long long brute_band_loss(const Problem& p, int h, int len) {
  if (h < 1 || len < 1) throw TooLarge("band must be non-empty");
  if (h * len > 18) throw TooLarge("band too large for the oracle");
  // Embed the band as rows 1..h, columns 1..len of an (h+1) x (len+2) grid.
  // Row 0 and columns 0, len+1 stay unknown; below row h lies the boundary.
  const int n = h + 1, m = len + 2;
  std::vector<int> cells, slack(n * m, 0);
  for (int r = 1; r <= h; ++r)
    for (int c = 1; c <= len; ++c) {
      cells.push_back(r * m + c);
      slack[r * m + c] = (r == 1 ? 1 : 0) + (c == len ? 1 : 0);
    }
  return min_partial_loss(p, n, m, cells, slack);
}

long long brute_border_loss(const Problem& p, int n, int m, int h) {
  if (2 * h >= std::min(n, m)) throw DimensionTooSmall("border covers the grid");
  std::vector<int> cells, slack(n * m, 0);
  auto inside = [&](int r, int c) { return r >= h && r < n - h && c >= h && c < m - h; };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c) {
      if (inside(r, c)) continue;
      cells.push_back(r * m + c);
      const int dr[4] = {-1, 1, 0, 0}, dc[4] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        int rr = r + dr[d], cc = c + dc[d];
        if (rr >= 0 && rr < n && cc >= 0 && cc < m && inside(rr, cc)) ++slack[r * m + c];
      }
    }
  return min_partial_loss(p, n, m, cells, slack);
}

}  // namespace gdl
