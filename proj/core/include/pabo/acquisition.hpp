#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pabo/gp.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

/// Closed-form expected improvement under a Gaussian predictive distribution,
/// minimization convention: E[max(best_observed - Y, 0)] for
/// Y ~ N(mean, variance). With zero variance this degenerates to
/// max(best_observed - mean, 0).
double expected_improvement(double mean, double variance, double best_observed);

struct AcquisitionResult {
  GridPoint best_point;
  double best_value = 0.0;
  /// Acquisition value per scanned candidate (rank, value); filled only on
  /// request, for diagnostics and tests.
  std::vector<std::pair<std::uint64_t, double>> values;
};

/// Scans every unevaluated grid point, scoring expected improvement through
/// the model posterior, and returns the argmax. Ties break toward the lowest
/// enumeration rank. Throws ConfigError when the space is exhausted.
AcquisitionResult select_next(const GpModel& model, const SearchSpace& space,
                              const std::unordered_set<std::uint64_t>& evaluated_ranks,
                              double best_observed, bool keep_values = false);

}  // namespace pabo
