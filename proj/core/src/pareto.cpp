#include "pabo/pareto.hpp"

#include <algorithm>
#include <cmath>

#include "pabo/error.hpp"

namespace pabo {

void validate_objectives(const ObjectivePair& p) {
  if (!std::isfinite(p.err) || !std::isfinite(p.eng))
    throw ConfigError("objective pair has a non-finite component");
  if (p.err < 0.0 || p.eng < 0.0)
    throw ConfigError("objective pair has a negative component (err=" +
                      format_value(p.err) + ", eng=" + format_value(p.eng) + ")");
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
  return a.err <= b.err && a.eng <= b.eng && (a.err < b.err || a.eng < b.eng);
}

std::vector<Observation> non_dominated_filter(const std::vector<Observation>& points) {
  std::vector<Observation> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j)
      dominated = j != i && dominates(points[j].objectives, points[i].objectives);
    if (!dominated) kept.push_back(points[i]);
  }
  return kept;
}

ParetoArchive::InsertResult ParetoArchive::insert(const Observation& obs) {
  InsertResult result;
  for (const Observation& m : members_)
    if (dominates(m.objectives, obs.objectives)) return result;  // rejected

  result.accepted = true;
  auto doomed = [&](const Observation& m) {
    return dominates(obs.objectives, m.objectives);
  };
  for (const Observation& m : members_)
    if (doomed(m)) result.evicted.push_back(m);
  std::erase_if(members_, doomed);
  members_.push_back(obs);
  return result;
}

double hypervolume_2d(const std::vector<ObjectivePair>& front, const ObjectivePair& ref) {
  if (front.empty()) return 0.0;
  for (const ObjectivePair& p : front)
    if (p.err > ref.err || p.eng > ref.eng)
      throw ConfigError("front point (" + format_value(p.err) + ", " + format_value(p.eng) +
                        ") lies outside the reference box");

  // Reduce to the staircase: sorted by err the surviving points have strictly
  // decreasing eng, and the union of rectangles becomes a sum of slabs.
  std::vector<ObjectivePair> sorted = front;
  std::sort(sorted.begin(), sorted.end(), [](const ObjectivePair& a, const ObjectivePair& b) {
    return a.err < b.err || (a.err == b.err && a.eng < b.eng);
  });
  std::vector<ObjectivePair> stairs;
  for (const ObjectivePair& p : sorted)
    if (stairs.empty() || p.eng < stairs.back().eng) stairs.push_back(p);

  double area = 0.0;
  for (std::size_t i = 0; i < stairs.size(); ++i) {
    const double next_err = i + 1 < stairs.size() ? stairs[i + 1].err : ref.err;
    area += (ref.eng - stairs[i].eng) * (next_err - stairs[i].err);
  }
  return area;
}

ObjectivePair reference_point(std::span<const ObjectivePair> points, double margin) {
  if (points.empty()) throw ConfigError("reference_point over an empty set");
  ObjectivePair ref = points.front();
  for (const ObjectivePair& p : points) {
    ref.err = std::max(ref.err, p.err);
    ref.eng = std::max(ref.eng, p.eng);
  }
  ref.err *= margin;
  ref.eng *= margin;
  return ref;
}

}  // namespace pabo
