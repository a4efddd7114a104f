#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pabo {

/// Canonical text form of a numeric parameter value: shortest decimal string
/// that round-trips to the same double. Used for table matching and all file
/// output, so that a value written by one tool compares equal in another.
std::string format_value(double v);

/// Parses a canonical numeric string; throws ConfigError on garbage.
double parse_value(std::string_view text);

enum class ParamKind { Numeric, Categorical };

/// One discrete hyperparameter: an ordered list of admissible values.
struct ParamDef {
  std::string name;
  ParamKind kind = ParamKind::Numeric;
  std::vector<double> numeric_values;     // populated iff kind == Numeric
  std::vector<std::string> labels;        // populated iff kind == Categorical

  static ParamDef numeric(std::string name, std::vector<double> values);
  static ParamDef categorical(std::string name, std::vector<std::string> values);

  std::size_t size() const {
    return kind == ParamKind::Numeric ? numeric_values.size() : labels.size();
  }
  /// Canonical text of value i (numeric values via format_value).
  std::string value_text(std::size_t i) const;
};

/// One point of the grid: a chosen value index per parameter, in space order.
struct GridPoint {
  std::vector<std::uint32_t> idx;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Enumeration guard: grids larger than this are refused by enumerate()
/// and by grid search.
inline constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 24;

/// The full discrete search grid. Immutable after construction.
class SearchSpace {
 public:
  /// Validates names (unique, non-empty), values (non-empty lists, finite,
  /// no duplicates) and total cardinality (>= 2, fits in 64 bits).
  explicit SearchSpace(std::vector<ParamDef> params);

  const std::vector<ParamDef>& params() const { return params_; }
  std::size_t dim() const { return params_.size(); }
  std::uint64_t cardinality() const { return cardinality_; }

  /// Index of the named parameter, or -1.
  int param_index(std::string_view name) const;

  bool contains(const GridPoint& p) const;

  /// Lexicographic rank of a point (last parameter varies fastest).
  std::uint64_t rank_of(const GridPoint& p) const;
  GridPoint point_at(std::uint64_t rank) const;

  /// Every grid point in lexicographic order. Throws when cardinality
  /// exceeds `guard`.
  std::vector<GridPoint> enumerate(std::uint64_t guard = kEnumerationGuard) const;

  /// Numeric embedding for GP kernels and genetic operators: one coordinate
  /// per parameter. Numeric values map affinely onto [0,1] over the
  /// parameter's min..max; categorical values map index i to i/(count-1).
  /// Single-valued parameters map to 0.5.
  std::vector<double> to_numeric(const GridPoint& p) const;

 private:
  std::vector<ParamDef> params_;
  std::vector<double> numeric_lo_, numeric_hi_;  // per-param value range
  std::uint64_t cardinality_ = 0;
};

/// `n` distinct points not in `exclude` (keyed by rank), uniformly at random.
/// Reproducible for a fixed generator state.
std::vector<GridPoint> sample_distinct(const SearchSpace& space,
                                       std::mt19937_64& rng, std::uint64_t n,
                                       const std::unordered_set<std::uint64_t>& exclude_ranks = {});

}  // namespace pabo
