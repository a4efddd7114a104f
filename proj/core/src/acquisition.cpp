#include "pabo/acquisition.hpp"

#include <cmath>
#include <numbers>

#include "pabo/error.hpp"

namespace pabo {

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double expected_improvement(double mean, double variance, double best_observed) {
  if (variance < 0.0) throw ConfigError("expected_improvement: negative variance");
  const double gap = best_observed - mean;
  if (variance == 0.0) return std::max(gap, 0.0);
  const double sigma = std::sqrt(variance);
  const double z = gap / sigma;
  return std::max(gap * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

AcquisitionResult select_next(const GpModel& model, const SearchSpace& space,
                              const std::unordered_set<std::uint64_t>& evaluated_ranks,
                              double best_observed, bool keep_values) {
  AcquisitionResult result;
  bool found = false;
  for (std::uint64_t rank = 0; rank < space.cardinality(); ++rank) {
    if (evaluated_ranks.contains(rank)) continue;
    const GridPoint p = space.point_at(rank);
    const PosteriorStats stats = model.posterior(space.to_numeric(p));
    const double ei = expected_improvement(stats.mean, stats.variance, best_observed);
    if (keep_values) result.values.emplace_back(rank, ei);
    if (!found || ei > result.best_value) {
      found = true;
      result.best_point = p;
      result.best_value = ei;
    }
  }
  if (!found) throw ConfigError("select_next: search space exhausted");
  return result;
}

}  // namespace pabo
