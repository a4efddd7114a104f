#include "pabo/search_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "pabo/error.hpp"

namespace pabo {

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericalError("format_value: to_chars failed");
  return std::string(buf, ptr);
}

double parse_value(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("not a numeric value: '" + std::string(text) + "'");
  return v;
}

ParamDef ParamDef::numeric(std::string name, std::vector<double> values) {
  ParamDef p;
  p.name = std::move(name);
  p.kind = ParamKind::Numeric;
  p.numeric_values = std::move(values);
  return p;
}

ParamDef ParamDef::categorical(std::string name, std::vector<std::string> values) {
  ParamDef p;
  p.name = std::move(name);
  p.kind = ParamKind::Categorical;
  p.labels = std::move(values);
  return p;
}

std::string ParamDef::value_text(std::size_t i) const {
  return kind == ParamKind::Numeric ? format_value(numeric_values.at(i))
                                    : labels.at(i);
}

namespace {

void validate_param(const ParamDef& p) {
  if (p.name.empty()) throw ConfigError("parameter with empty name");
  if (p.size() == 0)
    throw ConfigError("parameter '" + p.name + "' has an empty value list");
  if (p.kind == ParamKind::Numeric) {
    for (double v : p.numeric_values)
      if (!std::isfinite(v))
        throw ConfigError("parameter '" + p.name + "' has a non-finite value");
  }
  // no duplicate values
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      bool dup = p.kind == ParamKind::Numeric
                     ? p.numeric_values[i] == p.numeric_values[j]
                     : p.labels[i] == p.labels[j];
      if (dup)
        throw ConfigError("parameter '" + p.name + "' has duplicate value '" +
                          p.value_text(i) + "'");
    }
}

}  // namespace

SearchSpace::SearchSpace(std::vector<ParamDef> params) : params_(std::move(params)) {
  if (params_.empty()) throw ConfigError("search space declares no parameters");

  std::unordered_set<std::string> names;
  cardinality_ = 1;
  for (const ParamDef& p : params_) {
    validate_param(p);
    if (!names.insert(p.name).second)
      throw ConfigError("duplicate parameter name '" + p.name + "'");
    const auto count = static_cast<std::uint64_t>(p.size());
    if (cardinality_ > std::numeric_limits<std::uint64_t>::max() / count)
      throw ConfigError("search space cardinality overflows a 64-bit count");
    cardinality_ *= count;

    if (p.kind == ParamKind::Numeric) {
      auto [lo, hi] = std::minmax_element(p.numeric_values.begin(), p.numeric_values.end());
      numeric_lo_.push_back(*lo);
      numeric_hi_.push_back(*hi);
    } else {
      numeric_lo_.push_back(0.0);
      numeric_hi_.push_back(0.0);
    }
  }
  if (cardinality_ < 2)
    throw ConfigError("search space has cardinality " + std::to_string(cardinality_) +
                      "; at least 2 points are required");
}

int SearchSpace::param_index(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return static_cast<int>(i);
  return -1;
}

bool SearchSpace::contains(const GridPoint& p) const {
  if (p.idx.size() != params_.size()) return false;
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (p.idx[i] >= params_[i].size()) return false;
  return true;
}

std::uint64_t SearchSpace::rank_of(const GridPoint& p) const {
  if (!contains(p)) throw ConfigError("grid point does not belong to this space");
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < params_.size(); ++i)
    rank = rank * params_[i].size() + p.idx[i];
  return rank;
}

GridPoint SearchSpace::point_at(std::uint64_t rank) const {
  if (rank >= cardinality_) throw ConfigError("rank outside the grid");
  GridPoint p;
  p.idx.resize(params_.size());
  for (std::size_t i = params_.size(); i-- > 0;) {
    const auto count = static_cast<std::uint64_t>(params_[i].size());
    p.idx[i] = static_cast<std::uint32_t>(rank % count);
    rank /= count;
  }
  return p;
}

std::vector<GridPoint> SearchSpace::enumerate(std::uint64_t guard) const {
  if (cardinality_ > guard)
    throw ConfigError("grid of " + std::to_string(cardinality_) +
                      " points exceeds the enumeration guard (" + std::to_string(guard) + ")");
  std::vector<GridPoint> points;
  points.reserve(cardinality_);
  for (std::uint64_t r = 0; r < cardinality_; ++r) points.push_back(point_at(r));
  return points;
}

std::vector<double> SearchSpace::to_numeric(const GridPoint& p) const {
  if (!contains(p)) throw ConfigError("grid point does not belong to this space");
  std::vector<double> x(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ParamDef& def = params_[i];
    if (def.size() == 1) {
      x[i] = 0.5;
    } else if (def.kind == ParamKind::Numeric) {
      x[i] = (def.numeric_values[p.idx[i]] - numeric_lo_[i]) /
             (numeric_hi_[i] - numeric_lo_[i]);
    } else {
      x[i] = static_cast<double>(p.idx[i]) / static_cast<double>(def.size() - 1);
    }
  }
  return x;
}

std::vector<GridPoint> sample_distinct(const SearchSpace& space, std::mt19937_64& rng,
                                       std::uint64_t n,
                                       const std::unordered_set<std::uint64_t>& exclude_ranks) {
  const std::uint64_t card = space.cardinality();
  if (n + exclude_ranks.size() > card)
    throw ConfigError("cannot sample " + std::to_string(n) + " distinct points: only " +
                      std::to_string(card - exclude_ranks.size()) + " remain");

  std::vector<GridPoint> out;
  out.reserve(n);
  if (n == 0) return out;

  // Dense draws or a small grid: materialize the admissible ranks and take a
  // partial Fisher-Yates shuffle. Otherwise rejection-sample.
  const bool materialize = card <= (std::uint64_t{1} << 20) || n * 4 >= card;
  if (materialize) {
    std::vector<std::uint64_t> pool;
    pool.reserve(card - exclude_ranks.size());
    for (std::uint64_t r = 0; r < card; ++r)
      if (!exclude_ranks.contains(r)) pool.push_back(r);
    for (std::uint64_t i = 0; i < n; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      out.push_back(space.point_at(pool[i]));
    }
  } else {
    std::unordered_set<std::uint64_t> taken;
    std::uniform_int_distribution<std::uint64_t> pick(0, card - 1);
    while (out.size() < n) {
      const std::uint64_t r = pick(rng);
      if (exclude_ranks.contains(r) || !taken.insert(r).second) continue;
      out.push_back(space.point_at(r));
    }
  }
  return out;
}

}  // namespace pabo
