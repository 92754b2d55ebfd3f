#include "gdl/loss.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_map>

#include <omp.h>

namespace gdl {

namespace {

const WeightedDomination& weighted(const Problem& p) {
  const WeightedDomination* w = p.as_weighted();
  if (!w || !p.loss_model() || !p.supports(Mode::band))
    throw Unsupported("problem " + p.name() + " has no band loss support");
  return *w;
}

struct Key {
  Packed x;
  std::uint8_t ctx;
  bool east;
  bool band;
  bool operator==(const Key& o) const {
    return x == o.x && ctx == o.ctx && east == o.east && band == o.band;
  }
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t lo = static_cast<std::uint64_t>(k.x), hi = static_cast<std::uint64_t>(k.x >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6));
    h ^= (static_cast<std::uint64_t>(k.ctx) << 1 | k.east) << 2 | k.band;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

using Step = std::pair<Packed, Cost>;

/// Columns of the corner square that may follow `prev`.  Row 0 touches a cell
/// of choice `ctx` from below; `east` marks the column on the grid edge.
class SquareStepper {
 public:
  SquareStepper(const WeightedDomination& w, int h) : w_(w), h_(h) {}

  const std::vector<Step>& steps(Packed prev, int ctx, bool east, bool band) {
    Key k{prev, static_cast<std::uint8_t>(ctx), east, band};
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    std::vector<Step> out;
    std::uint8_t p[kMaxHeight];
    unpack(prev, h_, w_.bits(), p);
    int ch[kMaxHeight];
    generate(p, ctx, east, band, ch, 0, out);
    return memo_.emplace(k, std::move(out)).first->second;
  }

 private:
  const WeightedDomination& w_;
  int h_;
  std::unordered_map<Key, std::vector<Step>, KeyHash> memo_;

  int dom(int c) const { return w_.dominates(c) ? 1 : 0; }

  void generate(const std::uint8_t* p, int ctx, bool east, bool band, int* ch, int y,
                std::vector<Step>& out) const {
    if (y == h_) {
      finish(p, ctx, east, ch, out);
      return;
    }
    const auto& pv = w_.value(p[y]);
    int slack = band ? w_.slack(y, Mode::band) : 0;
    for (int c = 0; c < w_.choice_count(); ++c) {
      if (pv.deficit > slack && !w_.dominates(c)) continue;
      if (!w_.adjacent_ok(pv.choice, c)) continue;
      if (y > 0 && !w_.adjacent_ok(ch[y - 1], c)) continue;
      if (y == 0 && !w_.adjacent_ok(ctx, c)) continue;
      ch[y] = c;
      generate(p, ctx, east, band, ch, y + 1, out);
    }
  }

  void finish(const std::uint8_t* p, int ctx, bool east, const int* ch,
              std::vector<Step>& out) const {
    const int s = w_.scale();
    std::uint8_t col[kMaxHeight];
    long long cost = 0;
    for (int y = 0; y < h_; ++y) {
      const auto& pv = w_.value(p[y]);
      int c = ch[y];
      int cnt = dom(pv.choice);
      if (y > 0) cnt += dom(ch[y - 1]);
      if (y + 1 < h_) cnt += dom(ch[y + 1]);
      if (y == 0) cnt += dom(ctx);
      int req = w_.requirement(c);
      int d = std::max(0, req - cnt);
      if (d > (east ? 0 : 1)) return;
      int v = w_.find(c, d);
      if (v < 0) return;
      col[y] = static_cast<std::uint8_t>(v);
      int missing = (y == h_ - 1 ? 1 : 0) + (east ? 1 : 0);
      cost += s * (std::max(0, cnt - req) + missing * w_.missing_weight(c)) + w_.extra_loss(c);
      if (w_.dominates(c) && pv.deficit == 0) cost += s;
    }
    out.emplace_back(pack(col, h_, w_.bits()), static_cast<Cost>(cost));
  }
};

/// Corner square columns reachable for one prefix of choices along the next
/// band's first column.  Children extend the prefix by one choice.
struct CornerNode {
  std::vector<Packed> level;
  std::vector<std::uint8_t> top_dom;
  /// Steps from the parent level (or from band states at depth 0) into `level`.
  std::vector<std::uint64_t> ptr;
  std::vector<std::pair<std::uint32_t, Cost>> steps;
  std::array<int, 3> child{-1, -1, -1};
};

std::uint32_t index_in(const std::vector<Packed>& v, Packed x) {
  return static_cast<std::uint32_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
}

}  // namespace

BandSystem::BandSystem(ProblemPtr problem, int h, bool parallel)
    : problem_(std::move(problem)), w_(&weighted(*problem_)), h_(h) {
  if (h < 1) throw Error("band height must be positive");
  states_ = enumerate_states(problem_, h, Mode::band, false);
  const StateSet& set = *states_;
  const std::size_t n = set.size();
  std::vector<std::vector<std::pair<std::uint32_t, Cost>>> rows(n);
  first_self_.assign(n, kInf);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    std::uint8_t prev[kMaxHeight];
    set.decode(static_cast<std::size_t>(i), prev);
    auto& row = rows[static_cast<std::size_t>(i)];
    for_each_successor(*problem_, prev, h, Mode::band, [&](const std::uint8_t* col) {
      long long j = set.index_of(pack(col, h, problem_->bits()));
      if (j >= 0) row.emplace_back(static_cast<std::uint32_t>(j), charge(prev, col));
    });
    std::sort(row.begin(), row.end());
    if (is_first(*problem_, prev, h, Mode::band)) first_self_[static_cast<std::size_t>(i)] = first_loss(prev);
  }
  ta_.dim = n;
  ta_.row_ptr.assign(1, 0);
  for (const auto& row : rows) {
    for (const auto& [j, c] : row) {
      ta_.cols.push_back(j);
      ta_.vals.push_back(c);
    }
    ta_.row_ptr.push_back(ta_.cols.size());
  }
  if (n > budget().max_dense_dim) throw CapacityExceeded("band too large for dense products");
  ta_dense_ = DenseMinPlus::from_sparse(ta_);
  powers_.push_back(DenseMinPlus::identity(n));
}

Cost BandSystem::charge(const std::uint8_t* p, const std::uint8_t* c) const {
  const WeightedDomination& w = *w_;
  const int s = w.scale();
  long long total = 0;
  for (int i = 0; i < h_; ++i) {
    const auto& pv = w.value(p[i]);
    const auto& cv = w.value(c[i]);
    if (w.dominates(cv.choice) && pv.deficit == 0) total += s;
    int cnt = w.dominates(pv.choice) ? 1 : 0;
    if (i > 0 && w.dominates(w.value(c[i - 1]).choice)) ++cnt;
    if (i + 1 < h_ && w.dominates(w.value(c[i + 1]).choice)) ++cnt;
    int missing = i == h_ - 1 ? 1 : 0;
    total += s * (std::max(0, cnt - w.requirement(cv.choice)) + missing * w.missing_weight(cv.choice)) +
             w.extra_loss(cv.choice);
  }
  return static_cast<Cost>(total);
}

Cost BandSystem::first_loss(const std::uint8_t* c) const {
  const WeightedDomination& w = *w_;
  const int s = w.scale();
  long long total = 0;
  for (int i = 0; i < h_; ++i) {
    const auto& cv = w.value(c[i]);
    int cnt = 0;
    if (i > 0 && w.dominates(w.value(c[i - 1]).choice)) ++cnt;
    if (i + 1 < h_ && w.dominates(w.value(c[i + 1]).choice)) ++cnt;
    int missing = i == h_ - 1 ? 1 : 0;
    total += s * (std::max(0, cnt - w.requirement(cv.choice)) + missing * w.missing_weight(cv.choice)) +
             w.extra_loss(cv.choice);
  }
  return static_cast<Cost>(total);
}

void BandSystem::build_corner(bool parallel) {
  std::lock_guard<std::mutex> lock(mu_);
  if (corner_built_) return;
  const WeightedDomination& w = *w_;
  const StateSet& set = *states_;
  const std::size_t n = set.size();
  const int h = h_;
  const int bits = problem_->bits();
  const int s = w.scale();

  // Group output states by their choice sequence.
  std::map<std::vector<std::uint8_t>, std::vector<std::uint32_t>> groups;
  for (std::size_t b = 0; b < n; ++b) {
    std::uint8_t col[kMaxHeight];
    set.decode(b, col);
    std::vector<std::uint8_t> tau(static_cast<std::size_t>(h));
    for (int x = 0; x < h; ++x) tau[static_cast<std::size_t>(x)] = w.value(col[x]).choice;
    groups[tau].push_back(static_cast<std::uint32_t>(b));
  }

  SquareStepper stepper(w, h);
  std::vector<CornerNode> nodes;
  std::array<int, 3> roots{-1, -1, -1};
  auto grow = [&](std::size_t sources, auto&& source, int ctx, bool east, bool band) {
    CornerNode node;
    for (std::size_t j = 0; j < sources; ++j)
      for (const Step& st : stepper.steps(source(j), ctx, east, band)) node.level.push_back(st.first);
    std::sort(node.level.begin(), node.level.end());
    node.level.erase(std::unique(node.level.begin(), node.level.end()), node.level.end());
    node.ptr.assign(1, 0);
    for (std::size_t j = 0; j < sources; ++j) {
      for (const Step& st : stepper.steps(source(j), ctx, east, band))
        node.steps.emplace_back(index_in(node.level, st.first), st.second);
      node.ptr.push_back(node.steps.size());
    }
    for (Packed X : node.level) {
      std::uint8_t c[kMaxHeight];
      unpack(X, h, bits, c);
      node.top_dom.push_back(w.dominates(w.value(c[0]).choice) ? 1 : 0);
    }
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size() - 1);
  };
  // Path of trie nodes for each output state, indexed by depth.
  std::vector<std::vector<int>> paths;
  std::vector<std::uint32_t> outputs;
  for (const auto& [tau, members] : groups) {
    std::vector<int> path;
    int& r = roots[tau[0]];
    if (r < 0) r = grow(n, [&](std::size_t a) { return set[a]; }, tau[0], h == 1, true);
    path.push_back(r);
    for (int x = 1; x < h; ++x) {
      int parent = path.back();
      int child = nodes[static_cast<std::size_t>(parent)].child[tau[static_cast<std::size_t>(x)]];
      if (child < 0) {
        std::vector<Packed> from = nodes[static_cast<std::size_t>(parent)].level;
        child = grow(from.size(), [&](std::size_t j) { return from[j]; },
                     tau[static_cast<std::size_t>(x)], x == h - 1, false);
        nodes[static_cast<std::size_t>(parent)].child[tau[static_cast<std::size_t>(x)]] = child;
      }
      path.push_back(child);
    }
    for (std::uint32_t b : members) {
      paths.push_back(path);
      outputs.push_back(b);
    }
  }

  ca_ = DenseMinPlus(n);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (long long job = 0; job < static_cast<long long>(outputs.size()); ++job) {
    const std::vector<int>& path = paths[static_cast<std::size_t>(job)];
    const std::uint32_t b = outputs[static_cast<std::size_t>(job)];
    std::uint8_t col[kMaxHeight];
    set.decode(b, col);
    // term[x][L]: self-loss of the output column's cell x when the square cell
    // next to it dominates (L = 1) or not; kInf when its deficit disagrees.
    std::vector<std::array<Cost, 2>> term(static_cast<std::size_t>(h));
    for (int x = 0; x < h; ++x) {
      const auto& v = w.value(col[x]);
      int vert = 0;
      if (x > 0 && w.dominates(w.value(col[x - 1]).choice)) ++vert;
      if (x + 1 < h && w.dominates(w.value(col[x + 1]).choice)) ++vert;
      int req = w.requirement(v.choice);
      int missing = x == h - 1 ? 1 : 0;
      for (int L = 0; L < 2; ++L) {
        Cost& t = term[static_cast<std::size_t>(x)][static_cast<std::size_t>(L)];
        if (v.deficit != std::max(0, req - vert - L)) {
          t = kInf;
          continue;
        }
        t = static_cast<Cost>(s * (std::max(0, vert + L - req) + missing * w.missing_weight(v.choice)) +
                              w.extra_loss(v.choice));
      }
    }
    std::vector<Cost> next, cur;
    for (int x = h - 1; x >= 0; --x) {
      const CornerNode& node = nodes[static_cast<std::size_t>(path[static_cast<std::size_t>(x)])];
      const CornerNode* child =
          x < h - 1 ? &nodes[static_cast<std::size_t>(path[static_cast<std::size_t>(x + 1)])] : nullptr;
      cur.assign(node.level.size(), kInf);
      for (std::size_t j = 0; j < node.level.size(); ++j) {
        Cost t = term[static_cast<std::size_t>(x)][node.top_dom[j]];
        if (t >= kInf) continue;
        Cost best = 0;
        if (child) {
          best = kInf;
          for (auto k = child->ptr[j]; k < child->ptr[j + 1]; ++k)
            best = std::min(best, sat_add(child->steps[k].second, next[child->steps[k].first]));
        }
        cur[j] = sat_add(t, best);
      }
      next.swap(cur);
    }
    const CornerNode& root = nodes[static_cast<std::size_t>(path[0])];
    for (std::size_t a = 0; a < n; ++a) {
      Cost best = kInf;
      for (auto k = root.ptr[a]; k < root.ptr[a + 1]; ++k)
        best = std::min(best, sat_add(root.steps[k].second, next[root.steps[k].first]));
      ca_(a, b) = best;
    }
  }
  corner_built_ = true;
}

const DenseMinPlus& BandSystem::band_power(int k) {
  std::lock_guard<std::mutex> lock(mu_);
  while (static_cast<int>(powers_.size()) <= k) powers_.push_back(mul(powers_.back(), ta_));
  return powers_[static_cast<std::size_t>(k)];
}

const DenseMinPlus& BandSystem::power_times_corner(int k) {
  if (!corner_built_) build_corner();
  const DenseMinPlus& tk = band_power(k);
  std::lock_guard<std::mutex> lock(mu_);
  if (static_cast<int>(tc_.size()) <= k) tc_.resize(static_cast<std::size_t>(k) + 1);
  auto& slot = tc_[static_cast<std::size_t>(k)];
  if (!slot) slot = mul(tk, ca_);
  return *slot;
}

BandSystemPtr build_band(const ProblemPtr& p, int h, bool parallel) {
  return std::make_shared<BandSystem>(p, h, parallel);
}

namespace {
std::mutex g_band_mu;
std::map<std::pair<std::string, int>, BandSystemPtr> g_bands;
}  // namespace

BandSystemPtr cached_band(const ProblemPtr& p, int h) {
  std::lock_guard<std::mutex> lock(g_band_mu);
  auto key = std::make_pair(p->name(), h);
  auto it = g_bands.find(key);
  if (it != g_bands.end()) return it->second;
  auto band = build_band(p, h);
  band->build_corner();
  g_bands.emplace(key, band);
  return band;
}

void clear_band_cache() {
  std::lock_guard<std::mutex> lock(g_band_mu);
  g_bands.clear();
}

long long band_path_loss(BandSystem& band, int len) {
  if (len < 1) throw Error("band length must be positive");
  std::vector<Cost> v = band.first_self();
  for (int k = 1; k < len; ++k) v = vec_mat(v, band.band());
  Cost best = *std::min_element(v.begin(), v.end());
  return best >= kInf ? -1 : static_cast<long long>(best);
}

long long border_min_loss(BandSystem& band, long long n, long long m) {
  const int h = band.height();
  if (2LL * h >= std::min(n, m)) throw DimensionTooSmall("need 2h < min(n, m)");
  const DenseMinPlus& y1 = band.power_times_corner(static_cast<int>(m - 2 * h - 1));
  const DenseMinPlus& y2 = band.power_times_corner(static_cast<int>(n - 2 * h - 1));
  DenseMinPlus x = mul(y1, y2);
  const std::size_t d = x.dim();
  Cost best = kInf;
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t u = 0; u < d; ++u) best = std::min(best, sat_add(x(s, u), x(u, s)));
  if (best >= kInf) throw Error("no border filling exists");
  return static_cast<long long>(best);
}

LossResult lower_bound(const ProblemPtr& p, long long n, long long m, int h) {
  auto band = cached_band(p, h);
  LossResult r;
  r.n = n;
  r.m = m;
  r.h = h;
  r.loss = border_min_loss(*band, n, m);
  r.bound = reverse_loss(*p, n, m, r.loss);
  return r;
}

Recurrence band_recurrence(BandSystem& band, unsigned max_exponent) {
  std::lock_guard<std::mutex> lock(band.rec_mu_);
  if (!band.rec_) band.rec_ = detect_recurrence(band.band(), max_exponent);
  return *band.rec_;
}

LossResult extended_lower_bound(const ProblemPtr& p, long long n, long long m, int h) {
  auto band = cached_band(p, h);
  if (2LL * h >= std::min(n, m)) throw DimensionTooSmall("need 2h < min(n, m)");
  Recurrence rec = band_recurrence(*band);
  // T^e = T^{e-r} + p once e - r >= start; each exponent occurs twice in the trace.
  auto fold = [&](long long e, long long& shifts) {
    if (e < rec.start + rec.period) return e;
    long long k = (e - rec.start) / rec.period;
    shifts += k;
    return e - k * rec.period;
  };
  long long shifts = 0;
  long long em = fold(m - 2 * h - 1, shifts);
  long long en = fold(n - 2 * h - 1, shifts);
  LossResult r;
  r.n = n;
  r.m = m;
  r.h = h;
  r.extended = shifts > 0;
  r.loss = border_min_loss(*band, en + 2 * h + 1, em + 2 * h + 1) + 2 * shifts * rec.increment;
  r.bound = reverse_loss(*p, n, m, r.loss);
  return r;
}

}  // namespace gdl
