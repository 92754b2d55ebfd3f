#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "gdl/semiring.hpp"
#include "gdl/state_space.hpp"

namespace gdl {

/// Band and corner matrices of the border loss method for band height h.
///
/// Band row 0 faces the unseen interior, row h-1 lies on the grid boundary.
/// Appending S' after S charges the excess domination S' adds to S plus the
/// whole self-loss of S' given S.
class BandSystem {
 public:
  BandSystem(ProblemPtr problem, int h, bool parallel = true);

  const Problem& problem() const { return *problem_; }
  const ProblemPtr& problem_ptr() const { return problem_; }
  int height() const { return h_; }
  const StateSet& states() const { return *states_; }
  std::size_t size() const { return states_->size(); }
  const SparseMatrix<MinPlus>& band() const { return ta_; }
  const DenseMinPlus& band_dense() const { return ta_dense_; }
  /// Self-loss of each state used as the first band column (kInf if not first).
  const std::vector<Cost>& first_self() const { return first_self_; }

  /// Builds C_a; idempotent.
  void build_corner(bool parallel = true);
  bool corner_built() const { return corner_built_; }
  const DenseMinPlus& corner() const { return ca_; }

  /// T_a^k and T_a^k C_a, memoised.
  const DenseMinPlus& band_power(int k);
  const DenseMinPlus& power_times_corner(int k);

  /// Scaled charge of appending c after p (kInf if incompatible).
  Cost charge(const std::uint8_t* p, const std::uint8_t* c) const;
  /// Scaled self-loss of a first column.
  Cost first_loss(const std::uint8_t* c) const;

 private:
  ProblemPtr problem_;
  const WeightedDomination* w_;
  int h_;
  StateSetPtr states_;
  SparseMatrix<MinPlus> ta_;
  DenseMinPlus ta_dense_;
  DenseMinPlus ca_;
  bool corner_built_ = false;
  std::vector<Cost> first_self_;
  std::vector<DenseMinPlus> powers_;
  std::vector<std::optional<DenseMinPlus>> tc_;
  std::mutex mu_;
  std::optional<Recurrence> rec_;
  std::mutex rec_mu_;

  friend Recurrence band_recurrence(BandSystem& band, unsigned max_exponent);
};

using BandSystemPtr = std::shared_ptr<BandSystem>;

BandSystemPtr build_band(const ProblemPtr& p, int h, bool parallel = true);
/// Band with corner, cached per (problem, h).
BandSystemPtr cached_band(const ProblemPtr& p, int h);
void clear_band_cache();

/// Minimum over first states of the first-column self-loss plus len-1 band steps.
long long band_path_loss(BandSystem& band, int len);

/// min over S of ((T^{m-2h-1} C T^{n-2h-1} C)^2)[S][S]; scaled.
long long border_min_loss(BandSystem& band, long long n, long long m);

struct LossResult {
  long long n = 0, m = 0;
  int h = 0;
  long long loss = 0;
  long long bound = 0;
  bool extended = false;
};

LossResult lower_bound(const ProblemPtr& p, long long n, long long m, int h);
/// Band recurrence of T_a, detected once per band.
Recurrence band_recurrence(BandSystem& band, unsigned max_exponent = 200);
/// Exponents above the band recurrence start are folded back before the trace.
LossResult extended_lower_bound(const ProblemPtr& p, long long n, long long m, int h);

}  // namespace gdl
