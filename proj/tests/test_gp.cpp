#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pabo/error.hpp"
#include "pabo/gp.hpp"

using namespace pabo;

namespace {

KernelConfig unit_kernel(KernelFamily family = KernelFamily::Matern52) {
  KernelConfig cfg;
  cfg.family = family;
  cfg.length_scales = {1.0};
  cfg.signal_variance = 1.0;
  cfg.noise_variance = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("kernel values agree with the textbook formulas") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    KernelConfig cfg;
    cfg.family = i % 2 ? KernelFamily::Matern52 : KernelFamily::SquaredExponential;
    cfg.length_scales = {0.1 + u(rng), 0.1 + u(rng), 0.1 + u(rng)};
    cfg.signal_variance = 0.5 + u(rng);
    const std::vector<double> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    CHECK(kernel_value(cfg, a, b) ==
          doctest::Approx(oracle::kernel(cfg, a, b)).epsilon(1e-14));
    CHECK(kernel_value(cfg, a, a) == doctest::Approx(cfg.signal_variance).epsilon(1e-14));
  }
}

TEST_CASE("single noise-free observation is interpolated") {
  const GpModel model = GpModel::fit({{0.3}}, {2.5}, unit_kernel());
  const PosteriorStats at = model.posterior({0.3});
  CHECK(at.mean == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(at.variance <= 1e-9);
}

TEST_CASE("noise-free line is interpolated at the training points") {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 5; ++i) {
    x.push_back({0.25 * i});
    y.push_back(0.25 * i);
  }
  const GpModel model = GpModel::fit(x, y, unit_kernel());
  for (int i = 0; i < 5; ++i)
    CHECK(model.posterior(x[i]).mean == doctest::Approx(y[i]).epsilon(1e-6));
}

TEST_CASE("far queries revert to the prior") {
  KernelConfig cfg = unit_kernel();
  cfg.length_scales = {0.1};
  cfg.noise_variance = 1e-6;
  const GpModel model =
      GpModel::fit({{0.0}, {0.1}, {0.2}}, {1.0, 2.0, 3.0}, cfg);
  const PosteriorStats far = model.posterior({50.0});
  CHECK(far.mean == doctest::Approx(model.target_mean()).epsilon(0.01));
  const double prior_var =
      cfg.signal_variance * model.target_std() * model.target_std();
  CHECK(far.variance == doctest::Approx(prior_var).epsilon(0.01));
}

TEST_CASE("log marginal likelihood of one standardized point") {
  const GpModel model = GpModel::fit({{0.0}}, {7.0}, unit_kernel());
  CHECK(model.log_marginal_likelihood() ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("posterior matches the dense direct-solve oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> n_dist(2, 24), d_dist(1, 6);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = n_dist(rng), d = d_dist(rng);
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    std::vector<double> y(n);
    for (auto& row : x)
      for (double& v : row) v = u(rng);
    for (double& v : y) v = u(rng);

    KernelConfig cfg;
    cfg.family = rep % 2 ? KernelFamily::Matern52 : KernelFamily::SquaredExponential;
    cfg.length_scales = {0.2 + u(rng)};
    cfg.signal_variance = 0.5 + u(rng);
    cfg.noise_variance = 1e-4;

    const GpModel model = GpModel::fit(x, y, cfg);
    const oracle::DenseGp dense(x, y, cfg, cfg.noise_variance + model.jitter());
    for (int q = 0; q < 5; ++q) {
      std::vector<double> query(d);
      for (double& v : query) v = 2.0 * u(rng) - 0.5;
      const PosteriorStats a = model.posterior(query);
      const PosteriorStats b = dense.posterior(query);
      const double scale = std::max(model.target_std(), 1e-12);
      CHECK(std::abs(a.mean - b.mean) <= 1e-8 * std::max({std::abs(a.mean), scale}));
      CHECK(std::abs(a.variance - b.variance) <=
            1e-8 * std::max(a.variance, scale * scale));
    }
  }
}

TEST_CASE("duplicate noise-free points need jitter but still fit") {
  const GpModel model =
      GpModel::fit({{0.5}, {0.5}, {0.2}}, {1.0, 1.0, 0.0}, unit_kernel());
  CHECK(model.jitter() > 0.0);
  CHECK(std::isfinite(model.posterior({0.4}).mean));
}

TEST_CASE("hyperparameter selection maximizes marginal likelihood") {
  // data on a fine scale: the short length scale must win
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 12; ++i) {
    x.push_back({i / 11.0});
    y.push_back(std::sin(12.0 * x.back()[0]));
  }
  std::vector<KernelConfig> grid = default_kernel_grid();
  const KernelConfig best = fit_kernel_hyperparams(x, y, grid);
  double best_lml = GpModel::fit(x, y, best).log_marginal_likelihood();
  for (const KernelConfig& cand : grid)
    CHECK(GpModel::fit(x, y, cand).log_marginal_likelihood() <= best_lml + 1e-12);
}

TEST_CASE("hyperparameter ties go to the smallest mean length scale") {
  // both scales are tiny against the point distance, so the off-diagonal
  // covariance underflows and the likelihoods tie bit for bit
  KernelConfig wide = unit_kernel();
  wide.length_scales = {0.02};
  wide.noise_variance = 1e-2;
  KernelConfig narrow = wide;
  narrow.length_scales = {0.01};
  const KernelConfig chosen =
      fit_kernel_hyperparams({{0.0}, {1.0}}, {0.0, 1.0}, {wide, narrow});
  CHECK(chosen.length_scales == std::vector<double>{0.01});
}

TEST_CASE("hyperparameter fit requires at least two points") {
  CHECK_THROWS_AS(fit_kernel_hyperparams({{0.0}}, {1.0}, default_kernel_grid()),
                  ConfigError);
}

TEST_CASE("default kernel grid spans the documented candidates") {
  const std::vector<KernelConfig> grid = default_kernel_grid();
  CHECK(grid.size() == 5 * 3 * 3);
  for (const KernelConfig& cfg : grid) {
    CHECK(cfg.family == KernelFamily::Matern52);
    CHECK(cfg.length_scales.size() == 1);
  }
  CHECK(default_kernel_grid(KernelFamily::SquaredExponential).front().family ==
        KernelFamily::SquaredExponential);
}
