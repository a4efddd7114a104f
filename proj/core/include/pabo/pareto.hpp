#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pabo/search_space.hpp"

namespace pabo {

/// One bi-objective measurement. Both objectives are minimized:
/// `err` is a classification error fraction, `eng` an energy in joules.
struct ObjectivePair {
  double err = 0.0;
  double eng = 0.0;

  friend bool operator==(const ObjectivePair&, const ObjectivePair&) = default;
};

/// Throws ConfigError unless both components are finite and non-negative.
void validate_objectives(const ObjectivePair& p);

/// Strict dominance: a is no worse in both objectives and strictly better
/// in at least one. Equal pairs do not dominate each other.
bool dominates(const ObjectivePair& a, const ObjectivePair& b);

/// An evaluated grid point, in evaluation order.
struct Observation {
  GridPoint hp;
  ObjectivePair objectives;
  std::uint64_t eval_index = 0;
};

/// The subset of `points` not dominated by any point of `points`,
/// in input order. Duplicated objective pairs are all retained.
std::vector<Observation> non_dominated_filter(const std::vector<Observation>& points);

/// Mutually non-dominated set of observations, maintained incrementally.
class ParetoArchive {
 public:
  struct InsertResult {
    bool accepted = false;
    std::vector<Observation> evicted;
  };

  /// Rejects `obs` if any member dominates it; otherwise inserts it and
  /// evicts every member it dominates.
  InsertResult insert(const Observation& obs);

  const std::vector<Observation>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<Observation> members_;  // insertion order among survivors
};

/// Area dominated by `front` inside the box bounded by `ref`, computed by an
/// err-sorted sweep. Every front point must weakly dominate `ref`.
/// Restricted to two objectives.
double hypervolume_2d(const std::vector<ObjectivePair>& front, const ObjectivePair& ref);

/// Shared reference point for front comparisons: the componentwise maximum
/// over `points`, scaled by `margin`.
ObjectivePair reference_point(std::span<const ObjectivePair> points, double margin = 1.01);

}  // namespace pabo
