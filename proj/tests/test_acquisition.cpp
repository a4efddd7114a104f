#include <cmath>
#include <unordered_set>

#include "doctest.h"
#include "pabo/acquisition.hpp"
#include "pabo/error.hpp"
#include "pabo/gp.hpp"
#include "pabo/search_space.hpp"

using namespace pabo;

TEST_CASE("expected improvement closed form") {
  // mean at the incumbent with unit variance: EI = phi(0) = 1/sqrt(2 pi)
  CHECK(expected_improvement(3.0, 1.0, 3.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  // degenerate predictions improve only by their mean gap
  CHECK(expected_improvement(3.0, 0.0, 3.0) == 0.0);
  CHECK(expected_improvement(1.0, 0.0, 3.0) == 2.0);
  CHECK(expected_improvement(5.0, 0.0, 3.0) == 0.0);
  // EI is monotone in the variance
  CHECK(expected_improvement(3.0, 4.0, 3.0) >
        expected_improvement(3.0, 1.0, 3.0));
  CHECK(expected_improvement(3.0, 1.0, 3.0) >= 0.0);
}

TEST_CASE("select_next scans unevaluated points and breaks ties low") {
  // values embed to exact quarters, so the two ends sit bit-identically far
  // from the equal observations at 0.25 and 0.75; the tie breaks to rank 0
  const SearchSpace space =
      SearchSpace({ParamDef::numeric("x", {0.0, 1.0, 2.0, 3.0, 4.0})});
  const GpModel model =
      GpModel::fit({space.to_numeric(space.point_at(1)),
                    space.to_numeric(space.point_at(3))},
                   {1.0, 1.0}, KernelConfig{});
  const std::unordered_set<std::uint64_t> seen{1, 3};

  const AcquisitionResult res = select_next(model, space, seen, 1.0, true);
  CHECK(space.rank_of(res.best_point) == 0);
  CHECK(res.values.size() == 3);  // only the unevaluated candidates
  CHECK(res.best_value >= 0.0);
}

TEST_CASE("select_next throws when the space is exhausted") {
  const SearchSpace space = SearchSpace({ParamDef::numeric("x", {0.0, 1.0})});
  const GpModel model = GpModel::fit({{0.0}, {1.0}}, {1.0, 2.0}, KernelConfig{});
  CHECK_THROWS_AS(select_next(model, space, {0, 1}, 1.0), ConfigError);
}
