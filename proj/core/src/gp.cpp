#include "pabo/gp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pabo/error.hpp"

namespace pabo {

namespace {

constexpr double kMinTargetStd = 1e-12;
constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

void validate_kernel(const KernelConfig& cfg, std::size_t dim) {
  if (cfg.length_scales.empty() ||
      (cfg.length_scales.size() != 1 && cfg.length_scales.size() != dim))
    throw ConfigError("kernel needs one shared length scale or one per dimension");
  for (double l : cfg.length_scales)
    if (!(l > 0.0)) throw ConfigError("kernel length scales must be positive");
  if (!(cfg.signal_variance > 0.0)) throw ConfigError("signal variance must be positive");
  if (cfg.noise_variance < 0.0) throw ConfigError("noise variance must be non-negative");
}

double scaled_sq_dist(const KernelConfig& cfg, const std::vector<double>& a,
                      const std::vector<double>& b) {
  const bool shared = cfg.length_scales.size() == 1;
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double l = shared ? cfg.length_scales[0] : cfg.length_scales[i];
    const double d = (a[i] - b[i]) / l;
    r2 += d * d;
  }
  return r2;
}

}  // namespace

double kernel_value(const KernelConfig& cfg, const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.size() != b.size()) throw ConfigError("kernel_value: dimension mismatch");
  const double r2 = scaled_sq_dist(cfg, a, b);
  switch (cfg.family) {
    case KernelFamily::SquaredExponential:
      return cfg.signal_variance * std::exp(-0.5 * r2);
    case KernelFamily::Matern52: {
      constexpr double sqrt5 = 2.23606797749978969;
      const double r = std::sqrt(r2);
      const double s = sqrt5 * r;
      return cfg.signal_variance * (1.0 + s + 5.0 * r2 / 3.0) * std::exp(-s);
    }
  }
  throw ConfigError("unknown kernel family");
}

GpModel GpModel::fit(const std::vector<std::vector<double>>& inputs,
                     const std::vector<double>& targets, const KernelConfig& kernel) {
  if (inputs.empty()) throw ConfigError("GP fit with no training points");
  if (inputs.size() != targets.size())
    throw ConfigError("GP fit: inputs and targets differ in length");
  const std::size_t dim = inputs.front().size();
  for (const auto& x : inputs)
    if (x.size() != dim) throw ConfigError("GP fit: inconsistent input dimensions");
  for (double y : targets)
    if (!std::isfinite(y)) throw ConfigError("GP fit: non-finite target");
  validate_kernel(kernel, dim);

  GpModel m;
  m.inputs_ = inputs;
  m.kernel_ = kernel;

  const auto n = static_cast<Eigen::Index>(inputs.size());
  m.target_mean_ = std::accumulate(targets.begin(), targets.end(), 0.0) / double(n);
  double var = 0.0;
  for (double y : targets) var += (y - m.target_mean_) * (y - m.target_mean_);
  m.target_std_ = std::max(std::sqrt(var / double(n)), kMinTargetStd);
  m.targets_std_.resize(inputs.size());
  for (std::size_t i = 0; i < targets.size(); ++i)
    m.targets_std_[i] = (targets[i] - m.target_mean_) / m.target_std_;

  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      K(i, j) = K(j, i) = kernel_value(kernel, inputs[std::size_t(i)], inputs[std::size_t(j)]);
  K.diagonal().array() += kernel.noise_variance;

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd Kj = K;
    if (jitter > 0.0) Kj.diagonal().array() += jitter;
    llt.compute(Kj);
    if (llt.info() == Eigen::Success) break;
    jitter = jitter == 0.0 ? kJitterStart : jitter * 10.0;
    if (jitter > kJitterMax)
      throw NumericalError("kernel matrix not positive definite after jitter escalation");
  }
  m.jitter_ = jitter;

  const Eigen::MatrixXd L = llt.matrixL();
  m.chol_.assign(std::size_t(n) * std::size_t(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      m.chol_[std::size_t(i) * std::size_t(n) + std::size_t(j)] = L(i, j);

  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(m.targets_std_.data(), n);
  const Eigen::VectorXd alpha = llt.solve(y);
  m.alpha_.assign(alpha.data(), alpha.data() + n);

  double log_det_half = 0.0;  // sum of log L_ii
  for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(L(i, i));
  m.lml_ = -0.5 * y.dot(alpha) - log_det_half -
           0.5 * double(n) * std::log(2.0 * std::numbers::pi);
  return m;
}

PosteriorStats GpModel::posterior(const std::vector<double>& x) const {
  if (x.size() != input_dim())
    throw ConfigError("posterior query has dimension " + std::to_string(x.size()) +
                      ", model expects " + std::to_string(input_dim()));
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i)
    ks(i) = kernel_value(kernel_, inputs_[std::size_t(i)], x);

  const Eigen::Map<const Eigen::MatrixXd> Lt(chol_.data(), n, n);  // stored row-major
  // chol_ is row-major lower triangular, so the column-major map holds its
  // transpose; solve L v = ks through the upper view of the map.
  const Eigen::VectorXd v =
      Lt.triangularView<Eigen::Upper>().transpose().solve(ks);

  const double mean_std =
      ks.dot(Eigen::Map<const Eigen::VectorXd>(alpha_.data(), n));
  const double prior = kernel_value(kernel_, x, x);
  const double var_std = std::max(prior - v.squaredNorm(), 0.0);

  return {target_mean_ + target_std_ * mean_std, target_std_ * target_std_ * var_std};
}

KernelConfig fit_kernel_hyperparams(const std::vector<std::vector<double>>& inputs,
                                    const std::vector<double>& targets,
                                    const std::vector<KernelConfig>& candidates) {
  if (inputs.size() < 2)
    throw ConfigError("kernel hyperparameter fitting needs at least 2 points");
  if (candidates.empty()) throw ConfigError("no kernel candidates given");

  auto mean_length = [](const KernelConfig& c) {
    return std::accumulate(c.length_scales.begin(), c.length_scales.end(), 0.0) /
           double(c.length_scales.size());
  };

  const KernelConfig* best = nullptr;
  double best_lml = 0.0;
  for (const KernelConfig& cand : candidates) {
    double lml;
    try {
      lml = GpModel::fit(inputs, targets, cand).log_marginal_likelihood();
    } catch (const NumericalError&) {
      continue;
    }
    if (!best || lml > best_lml ||
        (lml == best_lml && mean_length(cand) < mean_length(*best))) {
      best = &cand;
      best_lml = lml;
    }
  }
  if (!best) throw NumericalError("every kernel candidate failed to factorize");
  return *best;
}

std::vector<KernelConfig> default_kernel_grid(KernelFamily family) {
  static constexpr double lengths[] = {0.05, 0.1, 0.2, 0.5, 1.0};
  static constexpr double signals[] = {0.5, 1.0, 2.0};
  static constexpr double noises[] = {1e-6, 1e-4, 1e-2};
  std::vector<KernelConfig> grid;
  grid.reserve(std::size(lengths) * std::size(signals) * std::size(noises));
  for (double l : lengths)
    for (double s : signals)
      for (double n : noises)
        grid.push_back({family, {l}, s, n});
  return grid;
}

}  // namespace pabo
