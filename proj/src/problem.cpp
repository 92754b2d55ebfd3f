#include "gdl/problem.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace gdl {

void Problem::finalize_labels() {
  int n = static_cast<int>(labels_.size());
  bits_ = 1;
  while ((1 << bits_) < n) ++bits_;
}

int Problem::value_id(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

int Problem::local_loss(const LossContext&) const {
  throw Unsupported(name_ + " has no loss model");
}

int cost_of(const Problem& p, std::uint8_t v) { return p.cost(v); }
int local_loss(const Problem& p, const LossContext& ctx) { return p.local_loss(ctx); }

long long reverse_loss(const Problem& p, long long n, long long m, long long scaled_loss) {
  if (!p.loss_model()) throw Unsupported(p.name() + " has no loss model");
  const LossModel& lm = *p.loss_model();
  long long num = lm.numerator_factor * n * m + scaled_loss;
  if (num <= 0) return 0;
  return (num + lm.divisor - 1) / lm.divisor;
}

// ---------------------------------------------------------------------------
// (a,b)-domination and Roman domination

WeightedDomination::WeightedDomination(std::string name, int a, int b) : a_(a), b_(b) {
  name_ = std::move(name);
  def_ = {Kind::ab, a, b};
  for (auto& row : lookup_) std::fill(std::begin(row), std::end(row), -1);
  if (a == 0) {
    add_value("stone", 1, 0, false);
  } else {
    add_value("stone_ok", 1, 0, false);
    add_value("stone_need_one", 1, 1, false);
  }
  if (b >= 1) add_value("need_one", 0, 1, false);
  add_value("ok", 0, 0, false);
  if (b >= 2) add_value("need_two", 0, 2, true);
  if (a >= 2) add_value("stone_need_two", 1, 2, true);
  finalize_labels();
  LossModel lm;
  lm.scale = 1;
  lm.numerator_factor = b;
  lm.divisor = 4 - a + b;
  loss_ = lm;
}

WeightedDomination::WeightedDomination(std::string name, bool optimized)
    : roman_(true), optimized_(optimized) {
  name_ = std::move(name);
  def_ = {Kind::roman, 0, 1};
  for (auto& row : lookup_) std::fill(std::begin(row), std::end(row), -1);
  add_value("two_stones", 2, 0, false);
  add_value("stone", 1, 0, false);
  add_value("ok", 0, 0, false);
  add_value("need_one", 0, 1, false);
  finalize_labels();
  counting_safe_ = !optimized;
  LossModel lm;
  lm.scale = 2;
  lm.numerator_factor = 2;
  lm.divisor = 5;
  loss_ = lm;
}

void WeightedDomination::add_value(const std::string& label, int choice, int deficit,
                                   bool band_only) {
  lookup_[choice][deficit] = static_cast<int>(values_.size());
  values_.push_back({static_cast<std::uint8_t>(choice), static_cast<std::uint8_t>(deficit)});
  labels_.push_back(label);
  if (!band_only) interior_labels_.push_back(label);
  costs_.push_back(choice);
}

int WeightedDomination::requirement(int choice) const {
  if (roman_) return choice == 0 ? 1 : 0;
  return choice == 1 ? a_ : b_;
}

int WeightedDomination::missing_weight(int choice) const {
  return dominates(choice) ? 1 : 0;
}

int WeightedDomination::extra_loss(int choice) const { return roman_ && choice == 1 ? 3 : 0; }

int WeightedDomination::local_loss(const LossContext& ctx) const {
  int excess = std::max(0, ctx.p - requirement(ctx.choice));
  return scale() * (excess + ctx.missing * missing_weight(ctx.choice)) + extra_loss(ctx.choice);
}

int WeightedDomination::vertical(const std::uint8_t* col, int h, int i) const {
  int c = 0;
  if (i > 0 && dominates(values_[col[i - 1]].choice)) ++c;
  if (i + 1 < h && dominates(values_[col[i + 1]].choice)) ++c;
  return c;
}

bool WeightedDomination::cell_valid(const std::uint8_t* col, int h, int i, Mode m) const {
  const Value& v = values_[col[i]];
  if (v.deficit > max_deficit(i, h, m)) return false;
  int r = row_requirement(v.choice, i, h, m);
  int vert = vertical(col, h, i);
  int d0 = std::max(0, r - vert);
  int d1 = std::max(0, r - vert - 1);
  if (v.deficit != d0 && v.deficit != d1) return false;
  if (optimized_) {
    if (i > 0 && !adjacent_ok(v.choice, values_[col[i - 1]].choice)) return false;
    if (i + 1 < h && !adjacent_ok(v.choice, values_[col[i + 1]].choice)) return false;
  }
  return true;
}

bool WeightedDomination::cell_first(const std::uint8_t* col, int h, int i, Mode m) const {
  if (!cell_valid(col, h, i, m)) return false;
  const Value& v = values_[col[i]];
  return v.deficit == std::max(0, row_requirement(v.choice, i, h, m) - vertical(col, h, i));
}

bool WeightedDomination::cell_early(const std::uint8_t* prev, const std::uint8_t* col, int i,
                                    Mode m) const {
  const Value& p = values_[prev[i]];
  const Value& v = values_[col[i]];
  if (p.deficit > slack(i, m) && !dominates(v.choice)) return false;
  return adjacent_ok(p.choice, v.choice);
}

bool WeightedDomination::cell_compat(const std::uint8_t* prev, const std::uint8_t* col, int h,
                                     int i, Mode m) const {
  if (!cell_early(prev, col, i, m)) return false;
  const Value& p = values_[prev[i]];
  const Value& v = values_[col[i]];
  if (v.deficit > max_deficit(i, h, m)) return false;
  int left = dominates(p.choice) ? 1 : 0;
  int r = row_requirement(v.choice, i, h, m);
  if (v.deficit != std::max(0, r - vertical(col, h, i) - left)) return false;
  if (optimized_) {
    if (i > 0 && !adjacent_ok(v.choice, values_[col[i - 1]].choice)) return false;
    if (i + 1 < h && !adjacent_ok(v.choice, values_[col[i + 1]].choice)) return false;
  }
  return true;
}

bool WeightedDomination::cell_end(const std::uint8_t* col, int, int i, Mode) const {
  return values_[col[i]].deficit == 0;
}

// ---------------------------------------------------------------------------
// Distance-2 domination.  A value records whether the cell holds a stone,
// whether the cell on its left holds one, and what is still owed.

namespace {

enum Dist2 : std::uint8_t { kStone, kStonePrev, kOk, kOkPrev, kNeedTwo, kNeedOne };

class Distance2 final : public Problem {
 public:
  Distance2() {
    name_ = "dist2";
    def_ = {Kind::dist2, 0, 1};
    labels_ = {"stone", "stone_prev", "ok", "ok_prev", "need_dist_two", "need_dist_one"};
    interior_labels_ = labels_;
    costs_ = {1, 1, 0, 0, 0, 0};
    finalize_labels();
    window_ = 2;
    radius_ = 2;
    history_bits_ = 1;
    LossModel lm;
    lm.scale = 1;
    lm.numerator_factor = 1;
    lm.divisor = 13;
    lm.unvalidated = true;
    lm.band_supported = false;
    loss_ = lm;
  }

  static bool stone(std::uint8_t v) { return v <= kStonePrev; }
  static bool prev_stone(std::uint8_t v) { return v == kStonePrev || v == kOkPrev; }

  static bool stone_at(const std::uint8_t* col, int h, int k) {
    return k >= 0 && k < h && stone(col[k]);
  }
  static bool prev_at(const std::uint8_t* col, int h, int k) {
    return k >= 0 && k < h && prev_stone(col[k]);
  }

  bool cell_valid(const std::uint8_t* col, int h, int i, Mode) const override {
    std::uint8_t v = col[i];
    if (v == kNeedTwo) {
      return !stone_at(col, h, i - 1) && !stone_at(col, h, i + 1) && !stone_at(col, h, i - 2) &&
             !stone_at(col, h, i + 2) && !prev_at(col, h, i - 1) && !prev_at(col, h, i + 1);
    }
    if (v == kNeedOne) {
      return !stone_at(col, h, i - 1) && !stone_at(col, h, i + 1) && !prev_at(col, h, i - 1) &&
             !prev_at(col, h, i + 1);
    }
    return true;
  }

  bool cell_first(const std::uint8_t* col, int h, int i, Mode m) const override {
    std::uint8_t v = col[i];
    if (v == kStonePrev || v == kOkPrev || v == kNeedOne) return false;
    if (v == kOk) {
      return stone_at(col, h, i - 1) || stone_at(col, h, i + 1) || stone_at(col, h, i - 2) ||
             stone_at(col, h, i + 2);
    }
    return cell_valid(col, h, i, m);
  }

  bool cell_early(const std::uint8_t* prev, const std::uint8_t* col, int i, Mode) const override {
    std::uint8_t p = prev[i], v = col[i];
    if (prev_stone(v) != stone(p)) return false;
    if (p == kNeedOne && !stone(v)) return false;
    return true;
  }

  bool cell_compat(const std::uint8_t* prev, const std::uint8_t* col, int h, int i,
                   Mode m) const override {
    if (!cell_early(prev, col, i, m)) return false;
    std::uint8_t p = prev[i], v = col[i];
    if (!stone(v)) {
      bool near1 = stone_at(col, h, i - 1) || stone_at(col, h, i + 1);
      std::uint8_t expected;
      if (p == kNeedTwo && !near1) {
        expected = kNeedOne;
      } else if (stone(p)) {
        expected = kOkPrev;
      } else {
        bool dom = near1 || stone_at(col, h, i - 2) || stone_at(col, h, i + 2) ||
                   stone_at(prev, h, i - 1) || stone_at(prev, h, i + 1) || prev_stone(p);
        expected = dom ? kOk : kNeedTwo;
      }
      if (v != expected) return false;
    }
    return cell_valid(col, h, i, m);
  }

  bool cell_end(const std::uint8_t* col, int, int i, Mode) const override {
    return col[i] != kNeedTwo && col[i] != kNeedOne;
  }

  std::uint8_t history_out(std::uint8_t v) const override { return stone(v) ? 1 : 0; }
  std::uint8_t history_in(std::uint8_t v) const override { return prev_stone(v) ? 1 : 0; }

  int local_loss(const LossContext& ctx) const override {
    int excess = std::max(0, ctx.p - 1);
    return excess + (ctx.choice ? ctx.missing : 0);
  }
};

// ---------------------------------------------------------------------------
// Minimal dominating sets (closed neighbourhoods) and minimal total dominating
// sets (open neighbourhoods).  A value at row i after column j holds
//   a = stone at (j,i), b = stone at (j-1,i),
//   f = the stone at (j-1,i) already owns a private neighbour (b = 1),
//   p = the neighbourhood of (j-1,i) minus (j,i) holds no stone.

class Minimal final : public Problem {
 public:
  explicit Minimal(bool total) : total_(total) {
    name_ = total ? "minimal-total" : "minimal-dom";
    def_ = {total ? Kind::minimal_total : Kind::minimal_dom, 0, 1};
    for (int b = 0; b <= 1; ++b)
      for (int f = 0; f <= (b ? 1 : 0); ++f)
        for (int p = 0; p <= 1; ++p) {
          if (!total && b == 1 && p == 1) continue;
          for (int a = 0; a <= 1; ++a) add(a, b, f, p);
        }
    interior_labels_ = labels_;
    finalize_labels();
    window_ = 3;
    radius_ = 2;
    history_bits_ = 1;
  }

  bool cell_valid(const std::uint8_t* col, int h, int i, Mode m) const override {
    const Cell& c = cells_[col[i]];
    if (c.p) {
      if (b_at(col, h, i - 1) || b_at(col, h, i + 1)) return false;
      if (!total_ && c.b) return false;
      bool edge = m == Mode::relaxed && (i == 0 || i == h - 1);
      if (!c.a && !edge) return false;
    }
    return true;
  }

  bool cell_first(const std::uint8_t* col, int, int i, Mode) const override {
    const Cell& c = cells_[col[i]];
    return !c.b && !c.p;
  }

  bool cell_early(const std::uint8_t* prev, const std::uint8_t* col, int i, Mode) const override {
    return cells_[col[i]].b == cells_[prev[i]].a;
  }

  bool cell_compat(const std::uint8_t* prev, const std::uint8_t* col, int h, int i,
                   Mode m) const override {
    const Cell& P = cells_[prev[i]];
    const Cell& C = cells_[col[i]];
    if (C.b != P.a) return false;
    bool edge = m == Mode::relaxed && (i == 0 || i == h - 1);
    bool side_a = a_at(prev, h, i - 1) || a_at(prev, h, i + 1);
    // domination of (j,i)
    if (!edge) {
      bool dom = P.b || side_a || C.a || (!total_ && P.a);
      if (!dom) return false;
    }
    // the stone at (j-1,i) must own a private neighbour once (j,i) is settled
    if (P.b && !edge) {
      bool here = !side_a && !C.a && (total_ || !P.a);
      if (!P.f && !here) return false;
    }
    int f = 0, p = 0;
    if (P.a) {
      bool priv = total_ ? P.p : (!P.b && P.p);
      if (!total_ && !P.b && !side_a && !C.a) priv = true;  // isolated in the set
      for (int k : {i - 1, i + 1}) {
        if (priv) break;
        if (k < 0 || k >= h) continue;
        const Cell& Q = cells_[prev[k]];
        const Cell& R = cells_[col[k]];
        if (Q.b || R.a || a_at(prev, h, 2 * k - i)) continue;
        if (!total_ && Q.a) continue;
        priv = true;
      }
      f = priv ? 1 : 0;
      p = (!P.b && !side_a) ? 1 : 0;
    } else {
      p = (!P.b && !side_a) ? 1 : 0;
    }
    if (!total_ && C.b) p = 0;
    if (C.f != f || C.p != p) return false;
    return cell_valid(col, h, i, m);
  }

  bool cell_end(const std::uint8_t* col, int h, int i, Mode m) const override {
    const Cell& c = cells_[col[i]];
    bool edge = m == Mode::relaxed && (i == 0 || i == h - 1);
    if (edge) return true;
    bool side_a = a_at(col, h, i - 1) || a_at(col, h, i + 1);
    bool dom = c.b || side_a || (!total_ && c.a);
    if (!dom) return false;
    if (c.b && !c.f && !(!side_a && (total_ || !c.a))) return false;
    if (c.a) {
      bool priv = total_ ? c.p : (!c.b && c.p);
      if (!total_ && !c.b && !side_a) priv = true;
      for (int k : {i - 1, i + 1}) {
        if (priv) break;
        if (k < 0 || k >= h) continue;
        const Cell& q = cells_[col[k]];
        if (q.b || a_at(col, h, 2 * k - i)) continue;
        if (!total_ && q.a) continue;
        priv = true;
      }
      if (!priv) return false;
    }
    return true;
  }

  std::uint8_t history_out(std::uint8_t v) const override { return cells_[v].a; }
  std::uint8_t history_in(std::uint8_t v) const override { return cells_[v].b; }

 private:
  struct Cell {
    std::uint8_t a, b, f, p;
  };
  bool total_;
  std::vector<Cell> cells_;

  void add(int a, int b, int f, int p) {
    cells_.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                      static_cast<std::uint8_t>(f), static_cast<std::uint8_t>(p)});
    std::string label = std::string(a ? "stone" : "empty") + (b ? "_after_stone" : "_after_empty");
    if (b) label += f ? "_private" : "_owing";
    if (p) label += "_clear";
    labels_.push_back(label);
    costs_.push_back(a);
  }
  bool a_at(const std::uint8_t* col, int h, int k) const {
    return k >= 0 && k < h && cells_[col[k]].a;
  }
  bool b_at(const std::uint8_t* col, int h, int k) const {
    return k >= 0 && k < h && cells_[col[k]].b;
  }
};

ProblemPtr make_problem(const std::string& name) {
  if (name == "dom") return std::make_shared<WeightedDomination>("dom", 0, 1);
  if (name == "2dom") return std::make_shared<WeightedDomination>("2dom", 0, 2);
  if (name == "total") return std::make_shared<WeightedDomination>("total", 1, 1);
  if (name == "roman") return std::make_shared<WeightedDomination>("roman", true);
  if (name == "roman-full") return std::make_shared<WeightedDomination>("roman-full", false);
  if (name == "dist2") return std::make_shared<Distance2>();
  if (name == "minimal-dom") return std::make_shared<Minimal>(false);
  if (name == "minimal-total") return std::make_shared<Minimal>(true);
  if (name.rfind("ab:", 0) == 0) {
    int a = -1, b = -1;
    char tail = 0;
    if (std::sscanf(name.c_str() + 3, "%d,%d%c", &a, &b, &tail) == 2 && a >= 0 && b >= 0 &&
        a <= 2 && b <= 2 && (a > 0 || b > 0)) {
      return std::make_shared<WeightedDomination>(name, a, b);
    }
  }
  throw UnknownProblem("unknown problem: " + name);
}

}  // namespace

ProblemPtr get_problem(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, ProblemPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  ProblemPtr p = make_problem(name);
  cache.emplace(name, p);
  return p;
}

std::vector<std::string> registered_problems() {
  return {"dom", "2dom", "total", "ab:A,B", "roman", "roman-full", "dist2", "minimal-dom",
          "minimal-total"};
}

}  // namespace gdl
