#pragma once

// Reference implementations written from first principles, deliberately
// ignoring how the library computes the same quantities. The library is
// tested against these, never the other way around.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pabo/energy_model.hpp"
#include "pabo/gp.hpp"
#include "pabo/pareto.hpp"

namespace oracle {

// --- block tiling ------------------------------------------------------------
// Counts crossbar tiles by walking origins in steps of the crossbar size,
// and output positions one by one.

inline std::uint64_t tiles_1d(std::uint64_t extent, std::uint64_t xs) {
  std::uint64_t n = 0;
  for (std::uint64_t origin = 0; origin < extent; origin += xs) ++n;
  return n;
}

inline std::uint64_t conv_ops(std::uint64_t d, std::uint64_t nc_in, std::uint64_t k,
                              std::uint64_t nc_out, std::uint64_t xs) {
  const std::uint64_t tiles = tiles_1d(nc_in * k * k, xs) * tiles_1d(nc_out, xs);
  std::uint64_t ops = 0;
  for (std::uint64_t x = 0; x < d; ++x)
    for (std::uint64_t y = 0; y < d; ++y) ops += tiles;
  return ops;
}

inline std::uint64_t fc_ops(std::uint64_t nf_in, std::uint64_t nf_out, std::uint64_t xs) {
  return tiles_1d(nf_in, xs) * tiles_1d(nf_out, xs);
}

// --- pairwise dominance ------------------------------------------------------
// mask[i] says whether point i survives: no other point is at least as good
// in both objectives and strictly better in one.

inline std::vector<char> nondominated_mask(const std::vector<pabo::ObjectivePair>& pts) {
  const std::size_t n = pts.size();
  std::vector<char> mask(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool no_worse = pts[j].err <= pts[i].err && pts[j].eng <= pts[i].eng;
      const bool better = pts[j].err < pts[i].err || pts[j].eng < pts[i].eng;
      if (no_worse && better) {
        mask[i] = 0;
        break;
      }
    }
  return mask;
}

// --- dense GP ----------------------------------------------------------------
// Solves the posterior equations by Gauss-Jordan inversion of the full
// covariance matrix. Kernel formulas restated here from their textbook form.

inline double kernel(const pabo::KernelConfig& cfg, const std::vector<double>& a,
                     const std::vector<double>& b) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ell =
        cfg.length_scales.size() == 1 ? cfg.length_scales[0] : cfg.length_scales[i];
    const double d = (a[i] - b[i]) / ell;
    r2 += d * d;
  }
  if (cfg.family == pabo::KernelFamily::SquaredExponential)
    return cfg.signal_variance * std::exp(-0.5 * r2);
  const double s = std::sqrt(5.0 * r2);
  return cfg.signal_variance * (1.0 + s + 5.0 * r2 / 3.0) * std::exp(-s);
}

inline std::vector<double> invert(std::vector<double> m, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    if (m[pivot * n + col] == 0.0) throw std::runtime_error("singular matrix");
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(m[pivot * n + c], m[col * n + c]);
        std::swap(inv[pivot * n + c], inv[col * n + c]);
      }
    const double p = m[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col * n + c] /= p;
      inv[col * n + c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        m[r * n + c] -= f * m[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

struct DenseGp {
  std::vector<std::vector<double>> x;
  std::vector<double> y_std;
  double mean = 0.0, sd = 1.0;
  pabo::KernelConfig cfg;
  std::vector<double> k_inv;

  // `diag` is the full additive diagonal (noise plus whatever jitter the
  // model under test ended up using), so both sides solve the same system.
  DenseGp(std::vector<std::vector<double>> inputs, const std::vector<double>& targets,
          const pabo::KernelConfig& kernel_cfg, double diag)
      : x(std::move(inputs)), cfg(kernel_cfg) {
    const std::size_t n = x.size();
    for (double t : targets) mean += t;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double t : targets) var += (t - mean) * (t - mean);
    sd = std::sqrt(var / static_cast<double>(n));
    if (sd < 1e-12) sd = 1e-12;
    for (double t : targets) y_std.push_back((t - mean) / sd);

    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        k[i * n + j] = kernel(cfg, x[i], x[j]) + (i == j ? diag : 0.0);
    k_inv = invert(std::move(k), n);
  }

  pabo::PosteriorStats posterior(const std::vector<double>& q) const {
    const std::size_t n = x.size();
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = kernel(cfg, x[i], q);
    std::vector<double> w(n, 0.0);  // K^-1 k*
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w[i] += k_inv[i * n + j] * ks[j];
    double m = 0.0, reduction = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      m += w[i] * y_std[i];
      reduction += w[i] * ks[i];
    }
    double var = kernel(cfg, q, q) - reduction;
    if (var < 0.0) var = 0.0;
    return {mean + sd * m, sd * sd * var};
  }
};

}  // namespace oracle
