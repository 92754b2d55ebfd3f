#include <doctest.h>

#include <algorithm>
#include <random>

#include "gdl/oracle.hpp"
#include "gdl/problem.hpp"
#include "helpers.hpp"

using namespace gdl;

namespace {

bool has_label(const Problem& p, const std::string& l) {
  const auto& a = p.alphabet();
  return std::find(a.begin(), a.end(), l) != a.end();
}

}  // namespace

TEST_CASE("registry resolves the documented names") {
  auto two = get_problem("2dom");
  CHECK(two->alphabet().size() == 3);
  for (const char* l : {"stone", "need_one", "ok"}) CHECK(has_label(*two, l));

  auto roman = get_problem("roman");
  CHECK(roman->alphabet().size() == 4);
  for (const char* l : {"two_stones", "stone", "ok", "need_one"}) CHECK(has_label(*roman, l));

  CHECK_THROWS_AS(get_problem("frobnicate"), UnknownProblem);
  CHECK_THROWS_AS(get_problem("ab:x,1"), UnknownProblem);
  CHECK(get_problem("ab:1,1")->definition().a == 1);
  CHECK(get_problem("ab:0,2")->definition().b == 2);
}

TEST_CASE("cost of cell values") {
  auto two = get_problem("2dom");
  CHECK(cost_of(*two, two->value_id("stone")) == 1);
  auto roman = get_problem("roman");
  CHECK(cost_of(*roman, roman->value_id("two_stones")) == 2);
  CHECK(cost_of(*roman, roman->value_id("stone")) == 1);
  CHECK(cost_of(*roman, roman->value_id("ok")) == 0);
}

TEST_CASE("cost is zero exactly on values without a stone on the cell") {
  for (const char* name : {"dom", "2dom", "total", "ab:2,1", "roman", "roman-full", "dist2",
                           "minimal-dom", "minimal-total"}) {
    auto p = get_problem(name);
    for (std::size_t v = 0; v < p->all_labels().size(); ++v) {
      const std::string& l = p->all_labels()[v];
      bool stone = l.rfind("stone", 0) == 0 || l.rfind("two_stones", 0) == 0;
      CAPTURE(std::string(name));
      CAPTURE(l);
      CHECK((cost_of(*p, static_cast<std::uint8_t>(v)) == 0) == !stone);
    }
  }
}

TEST_CASE("local loss examples") {
  auto two = get_problem("2dom");
  CHECK(local_loss(*two, {1, 0, 2}) == 2);  // corner stone, no stone neighbours
  CHECK(local_loss(*two, {0, 4, 0}) == 2);
  CHECK(local_loss(*two, {0, 2, 0}) == 0);
  CHECK(local_loss(*two, {0, 1, 0}) == 0);
  CHECK_THROWS_AS(local_loss(*get_problem("minimal-dom"), {0, 0, 0}), Unsupported);
}

TEST_CASE("reverse loss examples") {
  CHECK(reverse_loss(*get_problem("2dom"), 3, 4, 12) == 6);
  CHECK(reverse_loss(*get_problem("ab:1,1"), 2, 2, 4) == 2);
  CHECK(reverse_loss(*get_problem("roman"), 5, 5, 10) == 12);
}

TEST_CASE("reverse loss is monotone and exact on divisible numerators") {
  for (const char* name : {"2dom", "total", "roman", "ab:2,1", "dist2"}) {
    auto p = get_problem(name);
    const LossModel& lm = *p->loss_model();
    for (int n = 1; n <= 6; ++n)
      for (int m = n; m <= 8; ++m) {
        long long prev = reverse_loss(*p, n, m, 0);
        for (long long l = 1; l <= 60; ++l) {
          long long r = reverse_loss(*p, n, m, l);
          CHECK(r >= prev);
          prev = r;
          long long num = lm.numerator_factor * n * m + l;
          if (num % lm.divisor == 0) CHECK(r == num / lm.divisor);
        }
      }
  }
}

TEST_SUITE("properties") {
  TEST_CASE("local loss sums to 4|D| - 2(nm - |D|) on every small 2-dominating set") {
    auto p = get_problem("2dom");
    for (int n = 1; n <= 20; ++n)
      for (int m = n; n * m <= 20; ++m) {
        const int cells = n * m;
        Assignment x(static_cast<std::size_t>(cells));
        for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
          int size = 0;
          for (int k = 0; k < cells; ++k) size += x[k] = (mask >> k) & 1;
          if (!satisfies(p->definition(), n, m, x)) continue;
          long long expect = 4LL * size - 2LL * (cells - size);
          if (test::local_loss_sum(*p, n, m, x) != expect) {
            CAPTURE(n);
            CAPTURE(m);
            CAPTURE(mask);
            FAIL("local loss identity broken");
          }
        }
      }
  }

  TEST_CASE("local loss identity on 1000 random 2-dominating sets") {
    auto p = get_problem("2dom");
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> dim(1, 14);
    for (int t = 0; t < 1000; ++t) {
      int n = dim(rng), m = dim(rng);
      auto x = test::random_two_dominating(rng, n, m);
      REQUIRE(satisfies(p->definition(), n, m, x));
      long long size = std::count(x.begin(), x.end(), 1);
      CHECK(test::local_loss_sum(*p, n, m, x) == 4 * size - 2 * (n * m - size));
    }
  }
}
