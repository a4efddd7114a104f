#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pabo/energy_model.hpp"
#include "pabo/pareto.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

/// Black-box bi-objective function over grid points. Deterministic:
/// the same point always yields the same pair. Every call counts.
class ObjectiveFn {
 public:
  virtual ~ObjectiveFn() = default;

  ObjectivePair evaluate(const GridPoint& hp);

  std::uint64_t eval_count() const { return eval_count_; }
  const std::string& name() const { return name_; }
  const SearchSpace& space() const { return space_; }

 protected:
  ObjectiveFn(std::string name, const SearchSpace& space)
      : name_(std::move(name)), space_(space) {}

  virtual ObjectivePair eval_impl(const GridPoint& hp) = 0;

 private:
  std::string name_;
  const SearchSpace& space_;
  std::uint64_t eval_count_ = 0;
};

/// Full-grid lookup table; stands in for objectives that would otherwise
/// require training a network. Every grid point must have exactly one row.
class TabulatedObjective : public ObjectiveFn {
 public:
  /// `rows` maps grid ranks to pairs; throws ConfigError unless the table
  /// covers the whole grid with finite, non-negative values.
  TabulatedObjective(const SearchSpace& space, std::vector<ObjectivePair> rows);

  const std::vector<ObjectivePair>& rows() const { return rows_; }

 protected:
  ObjectivePair eval_impl(const GridPoint& hp) override;

 private:
  std::vector<ObjectivePair> rows_;  // indexed by rank
};

/// Analytic benchmark over the numeric embedding of the grid.
/// Known names and their formulas over z = to_numeric(hp):
///   conflicting-quadratics:  f1 = sum z_i^2,  f2 = sum (z_i - 1)^2
///   sphere-pair:             f1 = sum (z_i - 1/2)^2,  f2 = 0.1 + f1 / 2
///   zdt1-grid:               f1 = z_0,  g = 1 + 9 mean(z_1..),
///                            f2 = g (1 - sqrt(f1 / g))
/// Their exact Pareto sets on any grid follow from an exhaustive scan.
std::unique_ptr<ObjectiveFn> make_synthetic(const std::string& name,
                                            const SearchSpace& space);

/// Objective composed from an analytic error surrogate and the crossbar
/// energy model: eng is exactly total_energy(network_from_hp(hp)).
class ComposedObjective : public ObjectiveFn {
 public:
  using ErrFn = std::function<double(const SearchSpace&, const GridPoint&)>;

  ComposedObjective(std::string name, const SearchSpace& space, ArchTemplate tpl,
                    ErrFn err, HardwareConfig hw = {});

  const ArchTemplate& arch() const { return tpl_; }
  const HardwareConfig& hardware() const { return hw_; }

 protected:
  ObjectivePair eval_impl(const GridPoint& hp) override;

 private:
  ArchTemplate tpl_;
  ErrFn err_;
  HardwareConfig hw_;
};

/// Memoizing evaluation front-end used by every optimizer: repeat queries of
/// a point are cache hits, not new objective evaluations. Keeps the
/// evaluation history in order of first evaluation.
class EvalCache {
 public:
  EvalCache(const SearchSpace& space, ObjectiveFn& objective);

  /// Evaluates hp if unseen, otherwise returns the cached observation.
  const Observation& evaluate(const GridPoint& hp);

  bool contains(const GridPoint& hp) const;
  std::uint64_t distinct_evals() const { return history_.size(); }
  const std::vector<Observation>& history() const { return history_; }
  const std::unordered_set<std::uint64_t>& evaluated_ranks() const { return ranks_; }

 private:
  const SearchSpace& space_;
  ObjectiveFn& objective_;
  std::vector<Observation> history_;
  std::unordered_set<std::uint64_t> ranks_;
  std::unordered_map<std::uint64_t, std::size_t> index_by_rank_;
};

}  // namespace pabo
