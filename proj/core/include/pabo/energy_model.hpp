#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pabo/search_space.hpp"

namespace pabo {

/// Dimensions of one network layer, as consumed by the crossbar-count
/// formulas. Convolution and fully-connected layers populate disjoint fields.
struct LayerSpec {
  enum class Kind { Conv, Fc };
  Kind kind = Kind::Fc;

  // conv: d x d output positions, nc_in input channels, k x k kernel,
  // nc_out output channels
  std::uint64_t d = 0;
  std::uint64_t nc_in = 0;
  std::uint64_t k = 0;
  std::uint64_t nc_out = 0;

  // fc
  std::uint64_t nf_in = 0;
  std::uint64_t nf_out = 0;

  static LayerSpec conv(std::uint64_t d, std::uint64_t nc_in, std::uint64_t k,
                        std::uint64_t nc_out);
  static LayerSpec fc(std::uint64_t nf_in, std::uint64_t nf_out);
};

/// Crossbar geometry and per-operation energy of the accelerator.
struct HardwareConfig {
  std::uint64_t xs = 128;   // crossbar dimension
  double epx = 44e-9;       // joules per crossbar matrix-vector operation
};

/// Per-inference crossbar operations of a convolution layer:
/// d*d * ceil(nc_in*k*k / xs) * ceil(nc_out / xs). The d*d factor counts the
/// weight-shared reuse of each block over output positions.
std::uint64_t conv_crossbars(const LayerSpec& layer, const HardwareConfig& hw);

/// Crossbar operations of a fully connected layer:
/// ceil(nf_in / xs) * ceil(nf_out / xs).
std::uint64_t fc_crossbars(const LayerSpec& layer, const HardwareConfig& hw);

/// Total accelerator energy per inference: the summed operation counts of
/// all layers times the per-operation energy.
double total_energy(const std::vector<LayerSpec>& layers, const HardwareConfig& hw);

/// A layer dimension that is either fixed or bound to a named hyperparameter.
struct DimRef {
  std::uint64_t value = 0;
  std::string param;  // empty -> fixed value

  static DimRef fixed(std::uint64_t v) { return {v, {}}; }
  static DimRef bound(std::string name) { return {0, std::move(name)}; }
};

struct PoolSpec {
  std::uint64_t size = 2;
  std::uint64_t stride = 2;
};

/// One convolution slot of an architecture template.
struct ConvSlot {
  DimRef kernel;
  DimRef out_channels;
  std::uint64_t stride = 1;
  std::uint64_t padding = 0;
  /// Overrides `padding` with kernel/2, preserving the spatial dimension at
  /// stride 1 for odd kernels; needed when the kernel itself is a
  /// hyperparameter.
  bool same_padding = false;
  std::optional<PoolSpec> pool;  // applied after the layer when present
};

struct FcSlot {
  DimRef out_features;
};

/// Declarative network template: which dimensions are fixed and which are
/// driven by named hyperparameters. The convolution output dimension d is
/// derived layer by layer from the input size, kernel, stride, padding and
/// pooling; the first fc layer flattens the final feature map.
///
/// `conv_count` selects how many of the conv slots are instantiated (in
/// order); `fc_count` is the total number of fully connected layers,
/// the last of which always maps onto `num_classes` outputs.
struct ArchTemplate {
  std::string name;
  std::uint64_t input_size = 0;      // spatial input dimension
  std::uint64_t input_channels = 0;
  DimRef conv_count;
  std::vector<ConvSlot> conv;
  DimRef fc_count;
  std::vector<FcSlot> fc_hidden;     // candidates for the fc layers before the classifier
  std::uint64_t num_classes = 0;
};

/// Expands a template into concrete layers for one grid point. Throws
/// ConfigError when a bound hyperparameter is missing from the space or when
/// a derived spatial dimension collapses to zero or below.
std::vector<LayerSpec> network_from_hp(const SearchSpace& space, const GridPoint& hp,
                                       const ArchTemplate& tpl);

}  // namespace pabo
