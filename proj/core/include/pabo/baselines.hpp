#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pabo/objective.hpp"
#include "pabo/pabo.hpp"
#include "pabo/pareto.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

struct Nsga2Config {
  std::uint64_t pop_size = 10;
  std::uint64_t max_generations = 50;
  double crossover_prob = 0.9;
  /// Per-gene mutation probability; defaults to 1 / num_params when unset.
  std::optional<double> mutation_prob;
  std::uint64_t seed = 0;

  void validate(std::uint64_t cardinality) const;
};

/// Evaluates every grid point in enumeration order. Refuses spaces larger
/// than `guard`.
RunResult run_grid(const SearchSpace& space, ObjectiveFn& objective,
                   std::uint64_t guard = kEnumerationGuard);

/// Evaluates `budget` distinct uniformly sampled points. Budget must not
/// exceed the cardinality.
RunResult run_random(const SearchSpace& space, ObjectiveFn& objective, std::uint64_t budget,
                     std::uint64_t seed);

/// Deb-style non-dominated sorting: partitions indices into fronts, rank 0
/// first. Every point is dominated only by points of strictly lower rank.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(
    const std::vector<ObjectivePair>& points);

/// Crowding distance within one front. Boundary points per objective get
/// infinity, interior points the normalized neighbor-gap sum; fronts of size
/// two or less are all-infinite. Objective ranges are clamped below at 1e-12.
std::vector<double> crowding_distance(const std::vector<ObjectivePair>& front);

/// Elitist generational NSGA-II on the index genome: binary tournament on
/// (rank, crowding), single-point crossover, per-gene uniform mutation,
/// mu+lambda environmental selection. Evaluations are memoized across the
/// whole run; the reported front covers every evaluated point.
RunResult run_nsga2(const SearchSpace& space, ObjectiveFn& objective, const Nsga2Config& cfg);

}  // namespace pabo
