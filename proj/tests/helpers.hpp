#pragma once

#include <random>
#include <vector>

#include "gdl/oracle.hpp"
#include "gdl/problem.hpp"
#include "gdl/state_space.hpp"

namespace gdl::test {

inline int stone_neighbours(const Assignment& x, int n, int m, int i, int j) {
  int c = 0;
  if (i > 0) c += x[(i - 1) * m + j] != 0;
  if (i + 1 < n) c += x[(i + 1) * m + j] != 0;
  if (j > 0) c += x[i * m + j - 1] != 0;
  if (j + 1 < m) c += x[i * m + j + 1] != 0;
  return c;
}

inline int degree(int n, int m, int i, int j) {
  return (i > 0) + (i + 1 < n) + (j > 0) + (j + 1 < m);
}

/// Sum of local losses of a 0/1 assignment.
inline long long local_loss_sum(const Problem& p, int n, int m, const Assignment& x) {
  long long s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      LossContext ctx;
      ctx.choice = x[i * m + j];
      ctx.p = stone_neighbours(x, n, m, i, j);
      ctx.missing = 4 - degree(n, m, i, j);
      s += local_loss(p, ctx);
    }
  return s;
}

/// Random 2-dominating set: a random seed set, then stones added at random
/// undominated cells until every empty cell sees two stones.
inline Assignment random_two_dominating(std::mt19937_64& rng, int n, int m) {
  Assignment x(static_cast<std::size_t>(n * m), 0);
  std::bernoulli_distribution coin(0.3);
  for (auto& c : x) c = coin(rng);
  for (;;) {
    std::vector<int> bad;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        if (!x[i * m + j] && stone_neighbours(x, n, m, i, j) < 2) bad.push_back(i * m + j);
    if (bad.empty()) return x;
    x[bad[std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng)]] = 1;
  }
}

inline ColumnState col(const Problem& p, std::initializer_list<const char*> labels) {
  return make_state(p, std::vector<std::string>(labels.begin(), labels.end()));
}

}  // namespace gdl::test
