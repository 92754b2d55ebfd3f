#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gdl/common.hpp"

namespace gdl {

/// Which global definition a problem implements; the oracle reads only this.
enum class Kind : std::uint8_t { ab, roman, dist2, minimal_dom, minimal_total };

struct Definition {
  Kind kind = Kind::ab;
  int a = 0;  ///< stone-neighbours required by stones (ab only)
  int b = 1;  ///< stone-neighbours required by non-stones (ab only)
};

/// Loss bookkeeping in scaled integer units.
struct LossModel {
  int scale = 1;
  /// lower bound = ceil((numerator_factor * n * m + scaled_loss) / divisor)
  long long numerator_factor = 2;
  long long divisor = 6;
  bool unvalidated = false;
  bool band_supported = true;
};

/// Neighbourhood summary of one cell for local_loss.
struct LossContext {
  int choice = 0;   ///< 0 = empty, 1 = stone, 2 = two stones (Roman)
  int p = 0;        ///< dominating neighbours (dist2: stones within distance 2, self included)
  int missing = 0;  ///< neighbour slots outside the grid
};

class WeightedDomination;

/// A domination variant described by per-cell column rules.
///
/// Rules read cells within `radius()` of row i.  `prev` is the preceding
/// column; every predicate treats rows outside [0, h) as absent.
class Problem {
 public:
  virtual ~Problem() = default;

  const std::string& name() const { return name_; }
  const Definition& definition() const { return def_; }
  /// Interior labels; ids 0..alphabet().size()-1.
  const std::vector<std::string>& alphabet() const { return interior_labels_; }
  /// Labels including values admitted only in band mode.
  const std::vector<std::string>& all_labels() const { return labels_; }
  int value_count(Mode m) const {
    return m == Mode::band ? static_cast<int>(labels_.size())
                           : static_cast<int>(interior_labels_.size());
  }
  int bits() const { return bits_; }
  int window() const { return window_; }
  int radius() const { return radius_; }
  const std::optional<LossModel>& loss_model() const { return loss_; }
  /// True when column sequences biject with the problem's sets (safe for counting).
  bool counting_safe() const { return counting_safe_; }

  int value_id(const std::string& label) const;
  int cost(std::uint8_t v) const { return costs_[v]; }

  virtual bool supports(Mode m) const { return m != Mode::band || (loss_ && loss_->band_supported); }

  /// Intra-column validity of cell i.
  virtual bool cell_valid(const std::uint8_t* col, int h, int i, Mode m) const = 0;
  /// Cell i is valid for a column with nothing on its left.
  virtual bool cell_first(const std::uint8_t* col, int h, int i, Mode m) const = 0;
  /// Cell i of `col` may follow `prev` (implies cell_valid).
  virtual bool cell_compat(const std::uint8_t* prev, const std::uint8_t* col, int h, int i,
                           Mode m) const = 0;
  /// Cell i is acceptable in the last column.
  virtual bool cell_end(const std::uint8_t* col, int h, int i, Mode m) const = 0;
  /// Cheap necessary condition for cell_compat that only reads rows <= i.
  virtual bool cell_early(const std::uint8_t* prev, const std::uint8_t* col, int i, Mode m) const {
    (void)prev, (void)col, (void)i, (void)m;
    return true;
  }

  /// History prefilter: successor values must satisfy history_in(c) == history_out(p).
  bool has_history() const { return history_bits_ > 0; }
  int history_bits() const { return history_bits_; }
  virtual std::uint8_t history_out(std::uint8_t v) const { (void)v; return 0; }
  virtual std::uint8_t history_in(std::uint8_t v) const { (void)v; return 0; }

  /// Scaled local loss; throws Unsupported without a loss model.
  virtual int local_loss(const LossContext& ctx) const;

  virtual const WeightedDomination* as_weighted() const { return nullptr; }

 protected:
  std::string name_;
  Definition def_;
  std::vector<std::string> labels_;
  std::vector<std::string> interior_labels_;
  std::vector<int> costs_;
  int bits_ = 2;
  int window_ = 1;
  int radius_ = 1;
  int history_bits_ = 0;
  bool counting_safe_ = true;
  std::optional<LossModel> loss_;

  void finalize_labels();
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// Names: dom, 2dom, total, ab:A,B, roman, roman-full, dist2, minimal-dom, minimal-total.
ProblemPtr get_problem(const std::string& name);
std::vector<std::string> registered_problems();

int cost_of(const Problem& p, std::uint8_t v);
int local_loss(const Problem& p, const LossContext& ctx);
/// ceil((numerator_factor*n*m + scaled_loss) / divisor)
long long reverse_loss(const Problem& p, long long n, long long m, long long scaled_loss);

/// (a,b)-domination and Roman domination: a cell holds a choice and a deficit.
class WeightedDomination final : public Problem {
 public:
  struct Value {
    std::uint8_t choice;
    std::uint8_t deficit;
  };

  WeightedDomination(std::string name, int a, int b);  ///< (a,b) family
  WeightedDomination(std::string name, bool optimized);  ///< Roman

  bool roman() const { return roman_; }
  bool optimized() const { return optimized_; }
  int choice_count() const { return roman_ ? 3 : 2; }
  const Value& value(std::uint8_t v) const { return values_[v]; }
  /// Value id with the given choice and deficit, or -1.
  int find(int choice, int deficit) const {
    return lookup_[choice][deficit];
  }
  bool dominates(int choice) const { return roman_ ? choice == 2 : choice == 1; }
  int requirement(int choice) const;
  int missing_weight(int choice) const;
  int extra_loss(int choice) const;
  int scale() const { return loss_->scale; }
  /// Roman adjacency restriction between two neighbouring choices.
  bool adjacent_ok(int c1, int c2) const {
    if (!optimized_) return true;
    return !((c1 == 1 && c2 != 0) || (c2 == 1 && c1 != 0));
  }
  /// Deficit a cell of `choice` may still carry towards its right neighbour.
  int max_deficit(int i, int, Mode m) const { return (m == Mode::band && i == 0) ? 2 : 1; }
  int row_requirement(int choice, int i, int h, Mode m) const {
    if (m == Mode::relaxed && (i == 0 || i == h - 1)) return 0;
    return requirement(choice);
  }
  /// Deficit at or below which no dominator is demanded from the right.
  int slack(int i, Mode m) const { return (m == Mode::band && i == 0) ? 1 : 0; }

  bool cell_valid(const std::uint8_t* col, int h, int i, Mode m) const override;
  bool cell_first(const std::uint8_t* col, int h, int i, Mode m) const override;
  bool cell_compat(const std::uint8_t* prev, const std::uint8_t* col, int h, int i,
                   Mode m) const override;
  bool cell_end(const std::uint8_t* col, int h, int i, Mode m) const override;
  bool cell_early(const std::uint8_t* prev, const std::uint8_t* col, int i, Mode m) const override;
  int local_loss(const LossContext& ctx) const override;
  const WeightedDomination* as_weighted() const override { return this; }

 private:
  bool roman_ = false;
  bool optimized_ = false;
  int a_ = 0;
  int b_ = 1;
  std::vector<Value> values_;
  int lookup_[3][3];

  void add_value(const std::string& label, int choice, int deficit, bool band_only);
  int vertical(const std::uint8_t* col, int h, int i) const;
};

}  // namespace gdl
