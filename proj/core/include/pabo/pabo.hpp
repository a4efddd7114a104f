#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "pabo/gp.hpp"
#include "pabo/objective.hpp"
#include "pabo/pareto.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

struct PaboConfig {
  std::uint64_t n_init = 2;        // shared random initial points
  double stop_epsilon = 1e-6;      // threshold on standardized expected improvement
  std::uint64_t max_evals = 40;    // hard budget of distinct evaluations
  std::uint64_t seed = 0;
  std::uint64_t gp_refit_every = 1;  // iterations between kernel grid refits
  bool supervisor = true;            // false disables cross-feeding (ablation)
  KernelFamily kernel_family = KernelFamily::Matern52;

  void validate(std::uint64_t cardinality) const;
};

enum class StopReason { Budget, AcquisitionVanished, SpaceExhausted, Aborted };

std::string_view to_string(StopReason reason);
StopReason stop_reason_from_string(std::string_view text);

/// Per-iteration trace of the two selections and the supervisor's decisions;
/// enough to replay a run offline.
struct IterationRecord {
  std::uint64_t iteration = 0;
  std::uint64_t theta_rank = 0;   // point chosen by the error-objective process
  std::uint64_t gamma_rank = 0;   // point chosen by the energy-objective process
  double theta_acq = 0.0;         // standardized expected improvement at selection
  double gamma_acq = 0.0;
  bool theta_evaluated = false;   // false when the budget truncated the iteration
  bool gamma_evaluated = false;
  bool theta_crossfed = false;    // theta additionally joined the energy training set
  bool gamma_crossfed = false;    // gamma additionally joined the error training set
};

/// Mutable state of a run: the two per-objective training sets, the full
/// evaluation history and the running archive.
struct PaboState {
  std::vector<std::uint64_t> d_err;  // error-GP training set, as indices into history
  std::vector<std::uint64_t> d_eng;  // energy-GP training set, as indices into history
  std::unordered_set<std::uint64_t> d_err_set, d_eng_set;
  std::vector<Observation> history;
  std::unordered_set<std::uint64_t> evaluated;
  ParetoArchive archive;
  std::uint64_t iteration = 0;
};

struct RunResult {
  ParetoArchive front;
  std::vector<Observation> history;
  std::uint64_t evals_used = 0;
  StopReason stop_reason = StopReason::Budget;
  double wall_time = 0.0;  // seconds
  std::string algorithm;
  std::string failure;  // non-empty iff stop_reason == Aborted

  // populated by run_pabo only
  std::vector<IterationRecord> iterations;
  std::vector<std::uint64_t> d_err, d_eng;
};

struct SupervisorDecision {
  bool theta_to_d_eng = false;
  bool gamma_to_d_err = false;
};

/// Cross-feeding rule: gamma's grid point joins the error training set iff
/// its objective pair is not dominated by any other observation in the
/// history, and symmetrically theta joins the energy training set. Idempotent
/// per (theta, gamma). Both observations must already be in the history.
SupervisorDecision supervisor_step(PaboState& state, const Observation& theta,
                                   const Observation& gamma);

struct StopCheck {
  bool stop = false;
  StopReason reason = StopReason::Budget;
};

/// Stops when the larger of the two standardized acquisition maxima falls
/// below stop_epsilon, when the evaluation budget is reached, or when the
/// grid is exhausted, in that order of precedence.
StopCheck should_stop(const PaboState& state, double last_err_acq, double last_eng_acq,
                      const PaboConfig& cfg, std::uint64_t cardinality);

/// Runs the full dual-process loop: shared random initialization, one
/// expected-improvement selection per objective and iteration, memoized
/// full-pair evaluation of both selections, unconditional growth of the own
/// training set, supervisor cross-feeding, and the stopping rule above.
/// A GP failure surviving jitter escalation aborts with a partial result
/// (stop_reason Aborted, failure set).
RunResult run_pabo(const SearchSpace& space, ObjectiveFn& objective, const PaboConfig& cfg);

}  // namespace pabo
