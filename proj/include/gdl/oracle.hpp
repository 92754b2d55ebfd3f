#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gdl/problem.hpp"
#include "gdl/semiring.hpp"

namespace gdl {

/// Row-major grid labelling: 0 empty, 1 stone, 2 two stones.
using Assignment = std::vector<std::uint8_t>;

/// Checks an assignment against the global definition of the problem.
bool satisfies(const Definition& def, int n, int m, const Assignment& x);

/// Minimum cost over all assignments; nullopt when none satisfies the definition.
std::optional<long long> brute_min_cost(const Problem& p, int n, int m);
BigNat brute_count(const Problem& p, int n, int m);

/// Minimum scaled loss over h x len band fillings.  Row 0 faces the unseen
/// interior and the last column faces unseen columns; each may still supply
/// one dominator.  Row h-1 lies on the grid boundary.
long long brute_band_loss(const Problem& p, int h, int len);

/// Minimum scaled loss over fillings of the width-h border of an n x m grid,
/// with interior cells unknown.
long long brute_border_loss(const Problem& p, int n, int m, int h);

}  // namespace gdl
