#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pabo/energy_model.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

/// Parameters of the analytic error surrogate. Draw order and formula are
/// documented in cases/README.md; everything is reproducible from the
/// serialized fields alone.
struct SurrogateParams {
  std::string name;
  std::uint64_t seed = 1;
  /// Architecture parameters and their capacity weights, in declaration
  /// order. Parameters absent from this list form the tuning group.
  std::vector<std::pair<std::string, double>> capacity_weights;
  double base = 0.04;
  double capacity_weight = 0.5;   // scale of the quadratic capacity term
  double capacity_target = 0.65;  // capacity value of lowest error
  double capacity_gate = 0.7;     // capacity where tuning starts to matter
  double gate_ramp = 0.3;         // capacity span over which it ramps to 1
  double tuning_weight = 0.1;
  double interaction_weight = 0.04;
};

/// Deterministic stand-in for validation error over the numeric embedding
/// z = to_numeric(hp):
///
///   cap  = sum of capacity_weights[p] * z_p over architecture parameters
///   g    = clamp((cap - capacity_gate) / gate_ramp, 0, 1)^2
///   tune = weighted mean of (z_j - c_j)^2 over the tuning parameters
///   inter = mean of sin(pi z_i) sin(pi z_j) over seeded index pairs
///   err  = base + capacity_weight (capacity_target - cap)^2
///          + g (tuning_weight tune + interaction_weight (1 + inter) / 2)
///
/// Small models are insensitive to the tuning parameters (g = 0 below the
/// gate); sensitivity grows quadratically with capacity past it. All terms
/// are non-negative, so err is strictly positive; the shipped coefficients
/// keep it of unit order (the cs3 grid peaks slightly above 1 at its most
/// oversized corner).
class ErrSurrogate {
 public:
  ErrSurrogate(const SearchSpace& space, SurrogateParams params);

  double operator()(const SearchSpace& space, const GridPoint& hp) const;

  const SurrogateParams& params() const { return params_; }

 private:
  SurrogateParams params_;
  std::vector<double> cap_weights_;  // per space dimension, 0 for tuning
  std::vector<bool> is_hw_;
  std::vector<double> tune_weights_, tune_centers_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// 64-bit FNV-1a; the documented, platform-independent way bundle names are
/// folded into RNG seeds.
std::uint64_t fnv1a(std::string_view text);

/// Uniform draw in [0, 1) from the top 53 bits of the generator; used instead
/// of std::uniform_real_distribution so the documented draws are
/// implementation-independent.
template <typename Rng>
double unit_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Table-driven definitions of the three case-study analogues.
SearchSpace cs1_space();
SearchSpace cs2_space();
SearchSpace cs3_space();

/// AlexNet-shaped template (224x224x3 input, 17 classes): five conv slots
/// with kernels bound to kernel_1..kernel_4, 4096-wide fc candidates; layer
/// counts bound to num_conv_layers / num_fc_layers.
ArchTemplate alexnet_template();

/// VGG19-shaped template (32x32x3 input, 10 classes): sixteen conv slots in
/// the 2-2-4-4-4 block layout, kernels of layers 6-9 and the widths of
/// blocks 1, 2 and 4 bound to hyperparameters, same-padding throughout.
ArchTemplate vgg19_template();

/// One self-contained case-study analogue: the search space, the exact
/// energy objective (template + hardware) and the error surrogate.
struct CaseStudyBundle {
  std::string name;
  SearchSpace space;
  ArchTemplate tpl;
  HardwareConfig hw;
  SurrogateParams surrogate;
};

/// Builds the bundle for "cs1-analogue", "cs2-analogue" or "cs3-analogue".
/// Deterministic per (name, seed).
CaseStudyBundle make_case_bundle(const std::string& name, std::uint64_t seed = 1);

}  // namespace pabo
