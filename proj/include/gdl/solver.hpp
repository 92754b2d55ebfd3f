#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gdl/semiring.hpp"
#include "gdl/state_space.hpp"

namespace gdl {

/// (F, T, E) for one problem at fixed height.
struct TransferSystem {
  StateSetPtr states;
  std::vector<Cost> F;       ///< cost of S if first, else kInf
  std::vector<Cost> E;       ///< 0 if end, else kInf
  std::vector<Cost> weight;  ///< cost of each state
  SparseMatrix<MinPlus> T;   ///< T[S][S'] = cost(S') on compatible pairs
  SparseMatrix<MinPlus> Tt;  ///< transpose of T

  std::size_t pairs() const { return T.nnz(); }
  int height() const { return states->height(); }
};
using TransferSystemPtr = std::shared_ptr<const TransferSystem>;

/// Successor lists of every state as a pattern matrix (row = predecessor).
SparseMatrix<MinPlus> successor_pattern(const StateSet& set, bool parallel = true);

TransferSystemPtr build_system(const ProblemPtr& p, int n, bool prune_symmetry,
                               Mode mode = Mode::interior, bool parallel = true);
/// Cached build keyed on (problem, n, pruning).
TransferSystemPtr cached_system(const ProblemPtr& p, int n, bool prune_symmetry);
void clear_system_cache();

/// gamma(n, m) for m = 1..m_max (index 0 unused); nullopt marks infeasible.
std::vector<std::optional<long long>> gamma_sequence(const TransferSystem& sys, int m_max);
std::optional<long long> gamma(const ProblemPtr& p, int n, int m, bool prune_symmetry = true);

/// gamma(n, m) = gamma(n, m - period) + increment for every m >= start.
struct GammaRecurrence {
  long long start = 0;
  long long period = 0;
  long long increment = 0;
  /// First exponent of the vector orbit repeat (F T^{l-1} normalised).
  long long orbit_start = 0;
  /// start before back-shifting on solved values.
  long long proven_start = 0;
  bool primitive = false;
};

GammaRecurrence find_recurrence(const ProblemPtr& p, int n, int max_exponent = 600);
GammaRecurrence find_recurrence(const TransferSystem& sys, int max_exponent = 600);
/// Matrix-power route (dense T); feasible for small state counts only.
GammaRecurrence find_recurrence_by_powers(const TransferSystem& sys, int max_exponent = 600);

struct PiecewiseFormula {
  int height = 0;
  long long period = 1;
  long long increment = 0;
  long long floor = 1;                ///< relation holds for m >= floor
  std::vector<long long> base;        ///< gamma(floor + c) for c in [0, period)
  std::map<long long, std::optional<long long>> exceptions;  ///< m < floor
  std::string describe() const;
};

/// values[m] = gamma(n, m) for m >= 1 (index 0 ignored).
PiecewiseFormula synthesize_formula(const GammaRecurrence& rec,
                                    const std::vector<std::optional<long long>>& values,
                                    int height = 0);
std::optional<long long> eval_formula(const PiecewiseFormula& f, long long m);

/// Closed formulas from the literature; throws OutOfTable outside their range.
long long reference_formula(const std::string& problem, long long n, long long m);
bool reference_available(const std::string& problem, long long n, long long m);

}  // namespace gdl
