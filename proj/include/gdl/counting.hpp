#pragma once

#include <optional>
#include <string>

#include "gdl/semiring.hpp"
#include "gdl/state_space.hpp"

namespace gdl {

struct CountResult {
  std::string problem;
  int n = 0, m = 0;
  BigNat count;
};

/// Exact number of sets on the n x m grid, F^T T^{m-1} E over (+, x).
/// Throws Unsupported for encodings that drop sets (optimised Roman).
CountResult count_sets(const ProblemPtr& p, int n, int m);

/// Largest eigenvalue of the height-n compatibility matrix in the given mode.
double transfer_radius(const ProblemPtr& p, int n, Mode mode);

struct GrowthBracket {
  std::string problem;
  int n = 0;
  double radius = 0;          ///< rho(T_n)
  double radius_relaxed = 0;  ///< rho(T*_n), rows 0 and n-1 need nothing
  double lower = 0;           ///< rho(T_n)^{1/n}
  double upper = 0;           ///< rho(T*_n)^{1/n}
  std::optional<double> ratio;  ///< rho(T_{n+1}) / rho(T_n)
  bool certified = false;
};

GrowthBracket growth_bounds(const ProblemPtr& p, int n, bool with_ratio = true);

}  // namespace gdl
