#pragma once

#include <cstddef>
#include <vector>

namespace pabo {

enum class KernelFamily { SquaredExponential, Matern52 };

/// Stationary kernel parameters. `length_scales` holds either a single
/// shared scale or one scale per input dimension.
struct KernelConfig {
  KernelFamily family = KernelFamily::Matern52;
  std::vector<double> length_scales{1.0};
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
};

/// Covariance between two points under `cfg`.
double kernel_value(const KernelConfig& cfg, const std::vector<double>& a,
                    const std::vector<double>& b);

struct PosteriorStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Fitted Gaussian-process regressor over numeric inputs.
///
/// Targets are standardized to zero mean / unit variance inside fit (the
/// standard deviation is clamped below at 1e-12); posterior() reports
/// de-standardized values. The kernel matrix plus noise is Cholesky-factored
/// with diagonal jitter escalating from 1e-10 by factors of 10 up to 1e-4;
/// a matrix still indefinite after that raises NumericalError.
class GpModel {
 public:
  static GpModel fit(const std::vector<std::vector<double>>& inputs,
                     const std::vector<double>& targets, const KernelConfig& kernel);

  /// Predictive mean and variance (of the latent function, observation noise
  /// excluded) at `x`. Variance is clamped at zero from below.
  PosteriorStats posterior(const std::vector<double>& x) const;

  /// Log marginal likelihood of the standardized targets.
  double log_marginal_likelihood() const { return lml_; }

  std::size_t size() const { return inputs_.size(); }
  std::size_t input_dim() const { return inputs_.empty() ? 0 : inputs_.front().size(); }
  double target_mean() const { return target_mean_; }
  double target_std() const { return target_std_; }
  const KernelConfig& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }

 private:
  GpModel() = default;

  std::vector<std::vector<double>> inputs_;
  std::vector<double> targets_std_;
  double target_mean_ = 0.0;
  double target_std_ = 1.0;
  KernelConfig kernel_;
  std::vector<double> chol_;   // lower factor of K + (noise + jitter) I, row-major
  std::vector<double> alpha_;  // (K + noise I)^-1 y_std
  double jitter_ = 0.0;
  double lml_ = 0.0;
};

/// Fits every candidate and returns the one maximizing log marginal
/// likelihood; exact ties go to the smallest mean length scale. Candidates
/// whose factorization fails are skipped; if all fail, NumericalError.
/// Requires at least 2 points.
KernelConfig fit_kernel_hyperparams(const std::vector<std::vector<double>>& inputs,
                                    const std::vector<double>& targets,
                                    const std::vector<KernelConfig>& candidates);

/// Default logarithmic candidate grid: shared length scale in
/// {0.05, 0.1, 0.2, 0.5, 1.0}, signal variance in {0.5, 1, 2}, noise in
/// {1e-6, 1e-4, 1e-2}.
std::vector<KernelConfig> default_kernel_grid(KernelFamily family = KernelFamily::Matern52);

}  // namespace pabo
