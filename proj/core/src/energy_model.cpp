#include "pabo/energy_model.hpp"

#include <cmath>

#include "pabo/error.hpp"

namespace pabo {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

LayerSpec LayerSpec::conv(std::uint64_t d, std::uint64_t nc_in, std::uint64_t k,
                          std::uint64_t nc_out) {
  LayerSpec l;
  l.kind = Kind::Conv;
  l.d = d;
  l.nc_in = nc_in;
  l.k = k;
  l.nc_out = nc_out;
  return l;
}

LayerSpec LayerSpec::fc(std::uint64_t nf_in, std::uint64_t nf_out) {
  LayerSpec l;
  l.kind = Kind::Fc;
  l.nf_in = nf_in;
  l.nf_out = nf_out;
  return l;
}

std::uint64_t conv_crossbars(const LayerSpec& layer, const HardwareConfig& hw) {
  if (layer.kind != LayerSpec::Kind::Conv)
    throw ConfigError("conv_crossbars on a non-conv layer");
  if (layer.d == 0 || layer.nc_in == 0 || layer.k == 0 || layer.nc_out == 0 || hw.xs == 0)
    throw ConfigError("conv layer with a zero dimension");
  return layer.d * layer.d * ceil_div(layer.nc_in * layer.k * layer.k, hw.xs) *
         ceil_div(layer.nc_out, hw.xs);
}

std::uint64_t fc_crossbars(const LayerSpec& layer, const HardwareConfig& hw) {
  if (layer.kind != LayerSpec::Kind::Fc)
    throw ConfigError("fc_crossbars on a non-fc layer");
  if (layer.nf_in == 0 || layer.nf_out == 0 || hw.xs == 0)
    throw ConfigError("fc layer with a zero dimension");
  return ceil_div(layer.nf_in, hw.xs) * ceil_div(layer.nf_out, hw.xs);
}

double total_energy(const std::vector<LayerSpec>& layers, const HardwareConfig& hw) {
  if (layers.empty()) throw ConfigError("total_energy of an empty layer list");
  if (hw.epx <= 0.0) throw ConfigError("energy per crossbar operation must be positive");
  std::uint64_t ops = 0;
  for (const LayerSpec& l : layers)
    ops += l.kind == LayerSpec::Kind::Conv ? conv_crossbars(l, hw) : fc_crossbars(l, hw);
  return static_cast<double>(ops) * hw.epx;
}

namespace {

// Resolves a DimRef against the chosen hyperparameter values.
std::uint64_t resolve(const DimRef& ref, const SearchSpace& space, const GridPoint& hp,
                      const std::string& what) {
  if (ref.param.empty()) return ref.value;
  const int pi = space.param_index(ref.param);
  if (pi < 0)
    throw ConfigError("template binds " + what + " to unknown hyperparameter '" +
                      ref.param + "'");
  const ParamDef& def = space.params()[static_cast<std::size_t>(pi)];
  if (def.kind != ParamKind::Numeric)
    throw ConfigError("hyperparameter '" + ref.param + "' bound to " + what +
                      " must be numeric");
  const double v = def.numeric_values[hp.idx[static_cast<std::size_t>(pi)]];
  if (v <= 0.0 || v != std::floor(v))
    throw ConfigError("hyperparameter '" + ref.param + "' value " + format_value(v) +
                      " is not a positive integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::vector<LayerSpec> network_from_hp(const SearchSpace& space, const GridPoint& hp,
                                       const ArchTemplate& tpl) {
  if (!space.contains(hp)) throw ConfigError("grid point does not belong to this space");
  if (tpl.input_size == 0 || tpl.input_channels == 0 || tpl.num_classes == 0)
    throw ConfigError("template '" + tpl.name + "' has unset input/output dimensions");

  const std::uint64_t n_conv = resolve(tpl.conv_count, space, hp, "conv layer count");
  const std::uint64_t n_fc = resolve(tpl.fc_count, space, hp, "fc layer count");
  if (n_conv > tpl.conv.size())
    throw ConfigError("template '" + tpl.name + "' declares " +
                      std::to_string(tpl.conv.size()) + " conv slots but " +
                      std::to_string(n_conv) + " are requested");
  if (n_fc == 0 || n_fc > tpl.fc_hidden.size() + 1)
    throw ConfigError("template '" + tpl.name + "' cannot instantiate " +
                      std::to_string(n_fc) + " fc layers");

  std::vector<LayerSpec> layers;
  std::uint64_t d = tpl.input_size;
  std::uint64_t channels = tpl.input_channels;

  for (std::uint64_t i = 0; i < n_conv; ++i) {
    const ConvSlot& slot = tpl.conv[i];
    const std::uint64_t k = resolve(slot.kernel, space, hp, "a kernel size");
    const std::uint64_t out = resolve(slot.out_channels, space, hp, "a channel count");
    const std::uint64_t padding = slot.same_padding ? k / 2 : slot.padding;
    const std::uint64_t padded = d + 2 * padding;
    if (padded < k)
      throw ConfigError("conv layer " + std::to_string(i + 1) + " of '" + tpl.name +
                        "': kernel " + std::to_string(k) + " exceeds input size " +
                        std::to_string(padded));
    d = (padded - k) / slot.stride + 1;
    layers.push_back(LayerSpec::conv(d, channels, k, out));
    channels = out;
    if (slot.pool) {
      if (d < slot.pool->size)
        throw ConfigError("conv layer " + std::to_string(i + 1) + " of '" + tpl.name +
                          "': pooling window exceeds feature map size " + std::to_string(d));
      d = (d - slot.pool->size) / slot.pool->stride + 1;
    }
  }

  std::uint64_t features = channels * d * d;  // flattened final feature map
  if (n_conv == 0) features = tpl.input_channels * tpl.input_size * tpl.input_size;
  for (std::uint64_t i = 0; i + 1 < n_fc; ++i) {
    const std::uint64_t out = resolve(tpl.fc_hidden[i].out_features, space, hp, "an fc width");
    layers.push_back(LayerSpec::fc(features, out));
    features = out;
  }
  layers.push_back(LayerSpec::fc(features, tpl.num_classes));
  return layers;
}

}  // namespace pabo
