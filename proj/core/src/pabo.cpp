#include "pabo/pabo.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>
#include <random>
#include <utility>

#include "pabo/acquisition.hpp"
#include "pabo/error.hpp"

namespace pabo {

void PaboConfig::validate(std::uint64_t cardinality) const {
  if (n_init < 2) throw ConfigError("n_init must be at least 2");
  if (max_evals < n_init) throw ConfigError("max_evals must be at least n_init");
  if (stop_epsilon < 0.0) throw ConfigError("stop_epsilon must be non-negative");
  if (gp_refit_every < 1) throw ConfigError("gp_refit_every must be at least 1");
  if (cardinality < n_init)
    throw ConfigError("search space smaller than the initial design (" +
                      std::to_string(cardinality) + " < " + std::to_string(n_init) + ")");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Budget: return "budget";
    case StopReason::AcquisitionVanished: return "acquisition-vanished";
    case StopReason::SpaceExhausted: return "space-exhausted";
    case StopReason::Aborted: return "aborted";
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view text) {
  if (text == "budget") return StopReason::Budget;
  if (text == "acquisition-vanished") return StopReason::AcquisitionVanished;
  if (text == "space-exhausted") return StopReason::SpaceExhausted;
  if (text == "aborted") return StopReason::Aborted;
  throw ConfigError("unknown stop reason '" + std::string(text) + "'");
}

namespace {

// The archive holds the non-dominated subset of the history and dominance is
// transitive, so a pair is non-dominated within the whole history iff no
// archive member dominates it.
bool non_dominated_in_history(const PaboState& state, const ObjectivePair& pair) {
  for (const Observation& m : state.archive.members())
    if (dominates(m.objectives, pair)) return false;
  return true;
}

bool in_archive(const ParetoArchive& archive, std::uint64_t eval_index) {
  for (const Observation& m : archive.members())
    if (m.eval_index == eval_index) return true;
  return false;
}

bool insert_unique(std::vector<std::uint64_t>& list,
                   std::unordered_set<std::uint64_t>& set, std::uint64_t index) {
  if (!set.insert(index).second) return false;
  list.push_back(index);
  return true;
}

}  // namespace

SupervisorDecision supervisor_step(PaboState& state, const Observation& theta,
                                   const Observation& gamma) {
  if (!in_archive(state.archive, theta.eval_index)) state.archive.insert(theta);
  if (gamma.eval_index != theta.eval_index && !in_archive(state.archive, gamma.eval_index))
    state.archive.insert(gamma);

  SupervisorDecision decision;
  if (non_dominated_in_history(state, gamma.objectives))
    decision.gamma_to_d_err = insert_unique(state.d_err, state.d_err_set, gamma.eval_index);
  if (non_dominated_in_history(state, theta.objectives))
    decision.theta_to_d_eng = insert_unique(state.d_eng, state.d_eng_set, theta.eval_index);
  return decision;
}

StopCheck should_stop(const PaboState& state, double last_err_acq, double last_eng_acq,
                      const PaboConfig& cfg, std::uint64_t cardinality) {
  if (std::max(last_err_acq, last_eng_acq) < cfg.stop_epsilon)
    return {true, StopReason::AcquisitionVanished};
  if (state.history.size() >= cfg.max_evals) return {true, StopReason::Budget};
  if (state.evaluated.size() >= cardinality) return {true, StopReason::SpaceExhausted};
  return {false, StopReason::Budget};
}

RunResult run_pabo(const SearchSpace& space, ObjectiveFn& objective, const PaboConfig& cfg) {
  cfg.validate(space.cardinality());
  const auto start = std::chrono::steady_clock::now();

  PaboState state;
  std::vector<IterationRecord> iterations;
  std::mt19937_64 rng(cfg.seed);

  auto evaluate_new = [&](const GridPoint& hp) -> const Observation& {
    Observation obs{hp, objective.evaluate(hp), state.history.size()};
    state.archive.insert(obs);
    state.evaluated.insert(space.rank_of(hp));
    state.history.push_back(std::move(obs));
    return state.history.back();
  };

  auto finish = [&](StopReason reason, std::string failure = {}) {
    RunResult result;
    result.front = state.archive;
    result.history = std::move(state.history);
    result.evals_used = result.history.size();
    result.stop_reason = reason;
    result.failure = std::move(failure);
    result.algorithm = "pabo";
    result.iterations = std::move(iterations);
    result.d_err = std::move(state.d_err);
    result.d_eng = std::move(state.d_eng);
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };

  for (const GridPoint& hp : sample_distinct(space, rng, cfg.n_init)) {
    const Observation& obs = evaluate_new(hp);
    insert_unique(state.d_err, state.d_err_set, obs.eval_index);
    insert_unique(state.d_eng, state.d_eng_set, obs.eval_index);
  }

  KernelConfig err_kernel, eng_kernel;
  const std::vector<KernelConfig> kernel_grid = default_kernel_grid(cfg.kernel_family);
  const double inf = std::numeric_limits<double>::infinity();

  for (;;) {
    if (StopCheck check = should_stop(state, inf, inf, cfg, space.cardinality()); check.stop)
      return finish(check.reason);
    ++state.iteration;

    auto training = [&](const std::vector<std::uint64_t>& indices, bool energy) {
      std::pair<std::vector<std::vector<double>>, std::vector<double>> data;
      for (std::uint64_t i : indices) {
        const Observation& obs = state.history[i];
        data.first.push_back(space.to_numeric(obs.hp));
        data.second.push_back(energy ? obs.objectives.eng : obs.objectives.err);
      }
      return data;
    };
    const auto [x_err, y_err] = training(state.d_err, false);
    const auto [x_eng, y_eng] = training(state.d_eng, true);

    std::optional<GpModel> err_model, eng_model;
    try {
      if ((state.iteration - 1) % cfg.gp_refit_every == 0) {
        err_kernel = fit_kernel_hyperparams(x_err, y_err, kernel_grid);
        eng_kernel = fit_kernel_hyperparams(x_eng, y_eng, kernel_grid);
      }
      err_model = GpModel::fit(x_err, y_err, err_kernel);
      eng_model = GpModel::fit(x_eng, y_eng, eng_kernel);
    } catch (const NumericalError& e) {
      return finish(StopReason::Aborted, e.what());
    }

    const AcquisitionResult sel_err = select_next(
        *err_model, space, state.evaluated, *std::min_element(y_err.begin(), y_err.end()));
    const AcquisitionResult sel_eng = select_next(
        *eng_model, space, state.evaluated, *std::min_element(y_eng.begin(), y_eng.end()));

    IterationRecord rec;
    rec.iteration = state.iteration;
    rec.theta_rank = space.rank_of(sel_err.best_point);
    rec.gamma_rank = space.rank_of(sel_eng.best_point);
    rec.theta_acq = sel_err.best_value / err_model->target_std();
    rec.gamma_acq = sel_eng.best_value / eng_model->target_std();

    if (StopCheck check =
            should_stop(state, rec.theta_acq, rec.gamma_acq, cfg, space.cardinality());
        check.stop)
      return finish(check.reason);

    // Evaluate theta, then gamma when it is a distinct point and the budget
    // still allows it. Each selection joins its own training set
    // unconditionally; crossing over into the other set is the supervisor's
    // call.
    const std::uint64_t theta_index = evaluate_new(sel_err.best_point).eval_index;
    rec.theta_evaluated = true;
    insert_unique(state.d_err, state.d_err_set, theta_index);

    std::uint64_t gamma_index = theta_index;
    if (rec.gamma_rank == rec.theta_rank) {
      rec.gamma_evaluated = true;
      insert_unique(state.d_eng, state.d_eng_set, theta_index);
    } else if (state.history.size() < cfg.max_evals) {
      gamma_index = evaluate_new(sel_eng.best_point).eval_index;
      rec.gamma_evaluated = true;
      insert_unique(state.d_eng, state.d_eng_set, gamma_index);
    }

    if (cfg.supervisor) {
      const SupervisorDecision decision =
          supervisor_step(state, state.history[theta_index], state.history[gamma_index]);
      rec.theta_crossfed = decision.theta_to_d_eng;
      rec.gamma_crossfed = decision.gamma_to_d_err;
    }
    iterations.push_back(rec);
  }
}

}  // namespace pabo
