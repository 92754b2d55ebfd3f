#include <doctest.h>

#include "gdl/counting.hpp"
#include "gdl/oracle.hpp"

using namespace gdl;

TEST_CASE("count examples") {
  CHECK(count_sets(get_problem("dom"), 1, 1).count == 1);
  CHECK(count_sets(get_problem("dom"), 2, 2).count == 11);
  CHECK(count_sets(get_problem("total"), 2, 2).count == 9);
  CHECK(count_sets(get_problem("minimal-dom"), 1, 2).count == 2);
  CHECK(count_sets(get_problem("minimal-total"), 1, 1).count == 0);
  CHECK(count_sets(get_problem("dom"), 3, 3).count == 291);
  CHECK(count_sets(get_problem("dom"), 5, 12).count.str() == "124859601874166153");
  CHECK_THROWS_AS(count_sets(get_problem("roman"), 2, 2), Unsupported);
  CHECK(count_sets(get_problem("2dom"), 3, 3).count == brute_count(*get_problem("2dom"), 3, 3));
}

TEST_CASE("growth brackets") {
  auto g = growth_bounds(get_problem("dom"), 8);
  CHECK_FALSE(g.certified);
  CHECK(g.lower <= g.upper);
  CHECK(g.lower <= 1.959201684);
  CHECK(g.upper >= 1.950022198);
  REQUIRE(g.ratio.has_value());
  CHECK(*g.ratio == doctest::Approx(1.954751).epsilon(0.002 / 1.954751));
  CHECK(g.radius == doctest::Approx(std::pow(g.lower, 8)).epsilon(1e-12));

  auto t = growth_bounds(get_problem("total"), 8);
  CHECK(*t.ratio == doctest::Approx(1.915316).epsilon(0.002 / 1.915316));
  CHECK(t.lower <= 1.923434191);
  CHECK(t.upper >= 1.904220376);
  CHECK_THROWS_AS(growth_bounds(get_problem("dom"), 2), DimensionTooSmall);
}

TEST_CASE("minimal variants respect the published brackets") {
  for (int n = 3; n <= 5; ++n) {
    auto m = growth_bounds(get_problem("minimal-dom"), n, false);
    CHECK(m.lower <= m.upper);
    CHECK(m.lower <= 1.550332154);
    CHECK(m.upper >= 1.315870482);
    auto mt = growth_bounds(get_problem("minimal-total"), n, false);
    CHECK(mt.lower <= mt.upper);
    CHECK(mt.lower <= 1.524476040);
    CHECK(mt.upper >= 1.275805204);
  }
}

TEST_SUITE("properties") {
  TEST_CASE("transfer counts equal brute-force counts") {
    for (const char* name : {"dom", "total", "minimal-dom", "minimal-total"}) {
      auto p = get_problem(name);
      for (int n = 1; n <= 16; ++n)
        for (int m = n; n * m <= 16; ++m) {
          CAPTURE(std::string(name));
          CAPTURE(n);
          CAPTURE(m);
          auto c = count_sets(p, n, m).count;
          CHECK(c == brute_count(*p, n, m));
          CHECK(c == count_sets(p, m, n).count);
        }
    }
  }

  TEST_CASE("counts are supermultiplicative in the rows") {
    for (const char* name : {"dom", "total"}) {
      auto p = get_problem(name);
      for (int m = 1; m <= 6; ++m)
        for (int a = 1; a <= 4; ++a)
          for (int b = 1; b <= 4; ++b) {
            CAPTURE(std::string(name));
            CHECK(count_sets(p, a + b, m).count >=
                  count_sets(p, a, m).count * count_sets(p, b, m).count);
          }
    }
  }

  TEST_CASE("every lower bound sits below every upper bound") {
    for (const char* name : {"dom", "total"}) {
      std::vector<GrowthBracket> gs;
      for (int n = 3; n <= 8; ++n) gs.push_back(growth_bounds(get_problem(name), n, false));
      for (const auto& a : gs)
        for (const auto& b : gs) CHECK(a.lower <= b.upper);
    }
  }
}
