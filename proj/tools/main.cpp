#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pabo/error.hpp"
#include "pabo/io.hpp"
#include "pabo/runner.hpp"

namespace {

struct RunFlags {
  std::string manifest, space, objective, algo, out, pabo_kernel;
  std::uint64_t seed = 0, max_evals = 0, n_init = 0, refit_every = 0;
  std::uint64_t nsga2_pop = 0, nsga2_gens = 0;
  double pabo_stop_eps = 0.0, nsga2_crossover = 0.0, nsga2_mutation = 0.0;
  bool no_supervisor = false;
};

// Flags override whatever the manifest file carries; `counted` tells us which
// flags the user actually passed.
pabo::RunManifest assemble(const CLI::App& cmd, const RunFlags& f) {
  pabo::RunManifest m;
  if (!f.manifest.empty()) m = pabo::load_manifest(f.manifest);
  if (cmd.count("--space")) m.space_file = f.space;
  if (cmd.count("--objective")) m.objective = pabo::ObjectiveSpec::parse(f.objective);
  if (cmd.count("--algo")) m.algorithm = f.algo;
  if (cmd.count("--seed")) m.seed = f.seed;
  if (cmd.count("--out")) m.out_dir = f.out;
  if (cmd.count("--max-evals")) {
    m.pabo.max_evals = f.max_evals;
    m.random.budget = f.max_evals;
  }
  if (cmd.count("--pabo-stop-eps")) m.pabo.stop_epsilon = f.pabo_stop_eps;
  if (cmd.count("--pabo-n-init")) m.pabo.n_init = f.n_init;
  if (cmd.count("--pabo-refit-every")) m.pabo.gp_refit_every = f.refit_every;
  if (cmd.count("--pabo-kernel"))
    m.pabo.kernel_family = pabo::kernel_family_from_string(f.pabo_kernel);
  if (f.no_supervisor) m.pabo.supervisor = false;
  if (cmd.count("--nsga2-pop")) m.nsga2.pop_size = f.nsga2_pop;
  if (cmd.count("--nsga2-gens")) m.nsga2.max_generations = f.nsga2_gens;
  if (cmd.count("--nsga2-crossover")) m.nsga2.crossover_prob = f.nsga2_crossover;
  if (cmd.count("--nsga2-mutation")) m.nsga2.mutation_prob = f.nsga2_mutation;
  if (m.algorithm.empty())
    throw pabo::ConfigError("no algorithm selected (use --algo or a manifest)");
  if (m.space_file.empty())
    throw pabo::ConfigError("no space file (use --space or a manifest)");
  return m;
}

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--manifest", f.manifest, "Manifest JSON carrying everything flags carry");
  cmd.add_option("--space", f.space, "Search space JSON file");
  cmd.add_option("--objective", f.objective,
                 "Objective spec: tabulated:<csv> | synthetic:<name> | composed:<json>");
  cmd.add_option("--algo", f.algo, "pabo | nsga2 | random | grid");
  cmd.add_option("--seed", f.seed, "RNG seed");
  cmd.add_option("--max-evals", f.max_evals, "Evaluation budget (pabo and random)");
  cmd.add_option("--out", f.out, "Output directory");
  cmd.add_option("--pabo-stop-eps", f.pabo_stop_eps,
                 "Stop when standardized expected improvement falls below this");
  cmd.add_option("--pabo-n-init", f.n_init, "Shared random initial points");
  cmd.add_option("--pabo-refit-every", f.refit_every,
                 "Iterations between kernel hyperparameter refits");
  cmd.add_option("--pabo-kernel", f.pabo_kernel, "matern52 | squared-exponential");
  cmd.add_flag("--pabo-no-supervisor", f.no_supervisor,
               "Disable cross-feeding between the two searches");
  cmd.add_option("--nsga2-pop", f.nsga2_pop, "Population size");
  cmd.add_option("--nsga2-gens", f.nsga2_gens, "Generation count");
  cmd.add_option("--nsga2-crossover", f.nsga2_crossover, "Crossover probability");
  cmd.add_option("--nsga2-mutation", f.nsga2_mutation, "Per-gene mutation probability");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective hyperparameter search with two coupled "
               "Gaussian-process optimizers, plus grid/random/NSGA-II baselines"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run one algorithm and persist its artifacts");
  add_run_flags(*run, run_flags);

  std::vector<std::string> compare_manifests;
  std::string compare_out;
  CLI::App* compare =
      app.add_subcommand("compare", "Run several manifests on one objective side by side");
  compare->add_option("--manifest", compare_manifests, "Manifest JSON (repeatable)")
      ->required();
  compare->add_option("--out", compare_out, "Output directory")->required();

  std::string validate_space, validate_objective;
  CLI::App* validate =
      app.add_subcommand("validate", "Check a space and objective without running");
  validate->add_option("--space", validate_space, "Search space JSON file")->required();
  validate->add_option("--objective", validate_objective, "Objective spec");

  std::string cases_out = "cases";
  std::uint64_t cases_seed = 1;
  CLI::App* cases =
      app.add_subcommand("make-cases", "Regenerate the case-study bundles and their metrics");
  cases->add_option("--out", cases_out, "Bundle root directory");
  cases->add_option("--seed", cases_seed, "Surrogate generator seed");

  std::string bundle_dir;
  CLI::App* verify =
      app.add_subcommand("verify-cases", "Re-run a bundle and check its expected metrics");
  verify->add_option("--bundle", bundle_dir, "Bundle directory (one case)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) return pabo::cmd_run(assemble(*run, run_flags));
    if (app.got_subcommand(compare)) {
      std::vector<pabo::RunManifest> manifests;
      for (const std::string& path : compare_manifests)
        manifests.push_back(pabo::load_manifest(path));
      return pabo::cmd_compare(manifests, compare_out);
    }
    if (app.got_subcommand(validate))
      return pabo::cmd_validate(validate_space,
                                validate_objective.empty()
                                    ? std::nullopt
                                    : std::optional<std::string>(validate_objective));
    if (app.got_subcommand(cases)) return pabo::cmd_make_cases(cases_out, cases_seed);
    if (app.got_subcommand(verify)) return pabo::verify_bundle(bundle_dir);
  } catch (const pabo::Error& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
