#include "pabo/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "pabo/error.hpp"

namespace pabo {

void Nsga2Config::validate(std::uint64_t cardinality) const {
  if (pop_size < 4 || pop_size % 2 != 0)
    throw ConfigError("pop_size must be even and at least 4");
  if (max_generations < 1) throw ConfigError("max_generations must be at least 1");
  if (crossover_prob < 0.0 || crossover_prob > 1.0)
    throw ConfigError("crossover_prob must lie in [0, 1]");
  if (mutation_prob && (*mutation_prob < 0.0 || *mutation_prob > 1.0))
    throw ConfigError("mutation_prob must lie in [0, 1]");
  if (pop_size > cardinality)
    throw ConfigError("pop_size exceeds the search space cardinality");
}

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunResult result_from_cache(const EvalCache& cache, StopReason reason, std::string algorithm,
                            const Timer& timer) {
  RunResult result;
  result.history = cache.history();
  for (const Observation& obs : result.history) result.front.insert(obs);
  result.evals_used = cache.distinct_evals();
  result.stop_reason = reason;
  result.algorithm = std::move(algorithm);
  result.wall_time = timer.seconds();
  return result;
}

}  // namespace

RunResult run_grid(const SearchSpace& space, ObjectiveFn& objective, std::uint64_t guard) {
  const Timer timer;
  EvalCache cache(space, objective);
  for (const GridPoint& hp : space.enumerate(guard)) cache.evaluate(hp);
  return result_from_cache(cache, StopReason::SpaceExhausted, "grid", timer);
}

RunResult run_random(const SearchSpace& space, ObjectiveFn& objective, std::uint64_t budget,
                     std::uint64_t seed) {
  if (budget < 1) throw ConfigError("budget must be at least 1");
  if (budget > space.cardinality())
    throw ConfigError("budget " + std::to_string(budget) +
                      " exceeds the search space cardinality");
  const Timer timer;
  EvalCache cache(space, objective);
  std::mt19937_64 rng(seed);
  for (const GridPoint& hp : sample_distinct(space, rng, budget)) cache.evaluate(hp);
  return result_from_cache(cache, StopReason::Budget, "random", timer);
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(
    const std::vector<ObjectivePair>& points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        dominated_by[i].push_back(j);
        ++domination_count[j];
      } else if (dominates(points[j], points[i])) {
        dominated_by[j].push_back(i);
        ++domination_count[i];
      }
    }

  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (domination_count[i] == 0) current.push_back(i);
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current)
      for (std::size_t j : dominated_by[i])
        if (--domination_count[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectivePair>& front) {
  const std::size_t n = front.size();
  const double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) return std::vector<double>(n, inf);

  std::vector<double> distance(n, 0.0);
  auto accumulate = [&](auto value_of) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = value_of(front[a]), vb = value_of(front[b]);
      return va != vb ? va < vb : a < b;
    });
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    const double range =
        std::max(value_of(front[order.back()]) - value_of(front[order.front()]), 1e-12);
    for (std::size_t k = 1; k + 1 < n; ++k)
      distance[order[k]] +=
          (value_of(front[order[k + 1]]) - value_of(front[order[k - 1]])) / range;
  };
  accumulate([](const ObjectivePair& p) { return p.err; });
  accumulate([](const ObjectivePair& p) { return p.eng; });
  return distance;
}

RunResult run_nsga2(const SearchSpace& space, ObjectiveFn& objective, const Nsga2Config& cfg) {
  cfg.validate(space.cardinality());
  const Timer timer;
  EvalCache cache(space, objective);
  std::mt19937_64 rng(cfg.seed);
  const std::size_t dim = space.dim();
  const double mutation_prob =
      cfg.mutation_prob ? *cfg.mutation_prob : 1.0 / static_cast<double>(dim);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<GridPoint> population = sample_distinct(space, rng, cfg.pop_size);

  auto objectives_of = [&](const std::vector<GridPoint>& genomes) {
    std::vector<ObjectivePair> values;
    values.reserve(genomes.size());
    for (const GridPoint& g : genomes) values.push_back(cache.evaluate(g).objectives);
    return values;
  };

  auto rank_and_crowd = [&](const std::vector<ObjectivePair>& values) {
    const std::vector<std::vector<std::size_t>> fronts = fast_nondominated_sort(values);
    std::vector<std::size_t> rank(values.size(), 0);
    std::vector<double> crowd(values.size(), 0.0);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
      std::vector<ObjectivePair> members;
      members.reserve(fronts[r].size());
      for (std::size_t i : fronts[r]) members.push_back(values[i]);
      const std::vector<double> d = crowding_distance(members);
      for (std::size_t k = 0; k < fronts[r].size(); ++k) {
        rank[fronts[r][k]] = r;
        crowd[fronts[r][k]] = d[k];
      }
    }
    return std::pair(std::move(rank), std::move(crowd));
  };

  std::vector<ObjectivePair> pop_values = objectives_of(population);
  for (std::uint64_t gen = 0; gen < cfg.max_generations; ++gen) {
    const auto [rank, crowd] = rank_and_crowd(pop_values);

    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    auto tournament = [&]() -> const GridPoint& {
      const std::size_t a = pick(rng), b = pick(rng);
      if (rank[a] != rank[b]) return population[rank[a] < rank[b] ? a : b];
      return population[crowd[a] >= crowd[b] ? a : b];
    };

    std::vector<GridPoint> offspring;
    offspring.reserve(cfg.pop_size);
    while (offspring.size() < cfg.pop_size) {
      GridPoint c1 = tournament(), c2 = tournament();
      if (dim >= 2 && coin(rng) < cfg.crossover_prob) {
        std::uniform_int_distribution<std::size_t> cut_at(1, dim - 1);
        const std::size_t cut = cut_at(rng);
        for (std::size_t d = cut; d < dim; ++d) std::swap(c1.idx[d], c2.idx[d]);
      }
      for (GridPoint* child : {&c1, &c2})
        for (std::size_t d = 0; d < dim; ++d) {
          const std::uint32_t count = static_cast<std::uint32_t>(space.params()[d].size());
          if (count < 2 || coin(rng) >= mutation_prob) continue;
          // Resample among the other admissible values.
          std::uniform_int_distribution<std::uint32_t> value(0, count - 2);
          const std::uint32_t v = value(rng);
          child->idx[d] = v < child->idx[d] ? v : v + 1;
        }
      offspring.push_back(std::move(c1));
      offspring.push_back(std::move(c2));
    }

    std::vector<GridPoint> combined = population;
    combined.insert(combined.end(), offspring.begin(), offspring.end());
    const std::vector<ObjectivePair> combined_values = objectives_of(combined);

    const std::vector<std::vector<std::size_t>> fronts =
        fast_nondominated_sort(combined_values);
    std::vector<GridPoint> next;
    std::vector<ObjectivePair> next_values;
    next.reserve(cfg.pop_size);
    for (const std::vector<std::size_t>& front : fronts) {
      if (next.size() >= cfg.pop_size) break;
      if (next.size() + front.size() <= cfg.pop_size) {
        for (std::size_t i : front) {
          next.push_back(combined[i]);
          next_values.push_back(combined_values[i]);
        }
        continue;
      }
      std::vector<ObjectivePair> members;
      members.reserve(front.size());
      for (std::size_t i : front) members.push_back(combined_values[i]);
      const std::vector<double> d = crowding_distance(members);
      std::vector<std::size_t> order(front.size());
      for (std::size_t k = 0; k < front.size(); ++k) order[k] = k;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d[a] != d[b] ? d[a] > d[b] : a < b;
      });
      for (std::size_t k = 0; next.size() < cfg.pop_size; ++k) {
        next.push_back(combined[front[order[k]]]);
        next_values.push_back(combined_values[front[order[k]]]);
      }
    }
    population = std::move(next);
    pop_values = std::move(next_values);
  }

  RunResult result = result_from_cache(cache, StopReason::Budget, "nsga2", timer);
  return result;
}

}  // namespace pabo
