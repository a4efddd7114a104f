#include <random>
#include <unordered_set>
#include <vector>

#include "doctest.h"
#include "pabo/error.hpp"
#include "pabo/search_space.hpp"

using namespace pabo;

namespace {

SearchSpace two_by_three() {
  return SearchSpace({ParamDef::numeric("a", {0.0, 1.0}),
                      ParamDef::numeric("b", {0.0, 1.0, 2.0})});
}

}  // namespace

TEST_CASE("format_value produces shortest round-tripping text") {
  CHECK(format_value(0.1) == "0.1");
  CHECK(format_value(3.0) == "3");
  CHECK(format_value(0.001) == "0.001");
  CHECK(format_value(44e-9) == "4.4e-08");
  CHECK(parse_value(format_value(0.30000000000000004)) == 0.30000000000000004);
}

TEST_CASE("parse_value rejects garbage") {
  CHECK_THROWS_AS(parse_value("abc"), ConfigError);
  CHECK_THROWS_AS(parse_value(""), ConfigError);
  CHECK_THROWS_AS(parse_value("1.5x"), ConfigError);
}

TEST_CASE("space construction validates params") {
  CHECK_THROWS_AS(SearchSpace({}), ConfigError);
  CHECK_THROWS_AS(SearchSpace({ParamDef::numeric("a", {})}), ConfigError);
  CHECK_THROWS_AS(SearchSpace({ParamDef::numeric("a", {1.0, 1.0})}), ConfigError);
  CHECK_THROWS_AS(SearchSpace({ParamDef::numeric("", {1.0, 2.0})}), ConfigError);
  CHECK_THROWS_AS(SearchSpace({ParamDef::numeric("a", {1.0, 2.0}),
                               ParamDef::numeric("a", {1.0, 2.0})}),
                  ConfigError);
  // one grid point is not a search problem
  CHECK_THROWS_AS(SearchSpace({ParamDef::numeric("a", {1.0})}), ConfigError);
}

TEST_CASE("enumeration is lexicographic, last parameter fastest") {
  const SearchSpace space = two_by_three();
  CHECK(space.cardinality() == 6);
  const std::vector<GridPoint> all = space.enumerate();
  REQUIRE(all.size() == 6);
  CHECK(all.front() == GridPoint{{0, 0}});
  CHECK(all[1] == GridPoint{{0, 1}});
  CHECK(all[2] == GridPoint{{0, 2}});
  CHECK(all[3] == GridPoint{{1, 0}});
  CHECK(all.back() == GridPoint{{1, 2}});
  for (std::uint64_t r = 0; r < 6; ++r) {
    CHECK(space.rank_of(all[r]) == r);
    CHECK(space.point_at(r) == all[r]);
  }
}

TEST_CASE("enumerate refuses spaces beyond the guard") {
  CHECK_THROWS_AS(two_by_three().enumerate(4), ConfigError);
}

TEST_CASE("numeric embedding is affine over the value range") {
  const SearchSpace space =
      SearchSpace({ParamDef::numeric("kernel", {3.0, 5.0, 7.0, 11.0}),
                   ParamDef::categorical("opt", {"sgd", "adam"}),
                   ParamDef::numeric("lr", {0.001})});
  // chosen kernel 7 sits at (7-3)/(11-3) = 0.5 regardless of its index
  CHECK(space.to_numeric(GridPoint{{2, 0, 0}})[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(space.to_numeric(GridPoint{{1, 0, 0}})[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(space.to_numeric(GridPoint{{0, 0, 0}})[0] == 0.0);
  CHECK(space.to_numeric(GridPoint{{3, 0, 0}})[0] == 1.0);
  CHECK(space.to_numeric(GridPoint{{0, 0, 0}})[1] == 0.0);
  CHECK(space.to_numeric(GridPoint{{0, 1, 0}})[1] == 1.0);
  // single-valued parameters pin to the middle
  CHECK(space.to_numeric(GridPoint{{0, 0, 0}})[2] == 0.5);
}

TEST_CASE("param_index and contains") {
  const SearchSpace space = two_by_three();
  CHECK(space.param_index("b") == 1);
  CHECK(space.param_index("c") == -1);
  CHECK(space.contains(GridPoint{{1, 2}}));
  CHECK_FALSE(space.contains(GridPoint{{2, 0}}));
  CHECK_FALSE(space.contains(GridPoint{{0}}));
}

TEST_CASE("sample_distinct draws distinct unseen points reproducibly") {
  const SearchSpace space = two_by_three();
  std::mt19937_64 rng_a(7), rng_b(7);
  const std::vector<GridPoint> a = sample_distinct(space, rng_a, 4);
  const std::vector<GridPoint> b = sample_distinct(space, rng_b, 4);
  REQUIRE(a.size() == 4);
  CHECK(a == b);
  std::unordered_set<std::uint64_t> seen;
  for (const GridPoint& p : a) CHECK(seen.insert(space.rank_of(p)).second);

  const std::unordered_set<std::uint64_t> exclude{0, 1, 2, 3};
  std::mt19937_64 rng_c(7);
  for (const GridPoint& p : sample_distinct(space, rng_c, 2, exclude))
    CHECK(space.rank_of(p) >= 4);
}
