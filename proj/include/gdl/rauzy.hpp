#pragma once

#include <vector>

#include "gdl/semiring.hpp"
#include "gdl/state_space.hpp"

namespace gdl {

/// Order-i factor graph of the language of interior column states.
struct RauzyGraph {
  int order = 0;
  int pad = 0;
  std::vector<Packed> vertices;            ///< factors of length `order`, ascending
  SparseMatrix<PlusTimesFloat> adjacency;  ///< a.w -> w.b for each factor a.w.b
  std::size_t edges() const { return adjacency.nnz(); }
};

/// Factors are read at offset `pad` from both ends of states of height order + 1 + 2 pad.
/// pad < 0 selects max(2, radius).
RauzyGraph build_rauzy(const ProblemPtr& p, int order, int pad = -1);
double growth_rate(const RauzyGraph& g);

struct RauzySweep {
  std::vector<double> lambdas;  ///< lambdas[k] for order first_order + k
  int first_order = 1;
  int stable_order = 0;  ///< first order whose lambda agrees with the previous; 0 if none
  double rate = 0;
};

/// Raises the order until two consecutive lambdas agree within tol or max_order is hit.
RauzySweep rauzy_sweep(const ProblemPtr& p, int max_order, double tol = 1e-6, int pad = -1,
                       int first_order = 1);

}  // namespace gdl
