#include "pabo/objective.hpp"

#include <cmath>

#include "pabo/error.hpp"

namespace pabo {

ObjectivePair ObjectiveFn::evaluate(const GridPoint& hp) {
  if (!space_.contains(hp))
    throw ConfigError("objective '" + name_ + "' queried outside its search space");
  const ObjectivePair pair = eval_impl(hp);
  validate_objectives(pair);
  ++eval_count_;
  return pair;
}

TabulatedObjective::TabulatedObjective(const SearchSpace& space,
                                       std::vector<ObjectivePair> rows)
    : ObjectiveFn("tabulated", space), rows_(std::move(rows)) {
  if (rows_.size() != space.cardinality())
    throw ConfigError("table has " + std::to_string(rows_.size()) + " rows, grid has " +
                      std::to_string(space.cardinality()) + " points");
  for (const ObjectivePair& p : rows_) validate_objectives(p);
}

ObjectivePair TabulatedObjective::eval_impl(const GridPoint& hp) {
  return rows_[space().rank_of(hp)];
}

namespace {

class SyntheticObjective : public ObjectiveFn {
 public:
  using Fn = ObjectivePair (*)(const std::vector<double>&);
  SyntheticObjective(std::string name, const SearchSpace& space, Fn fn)
      : ObjectiveFn(std::move(name), space), fn_(fn) {}

 protected:
  ObjectivePair eval_impl(const GridPoint& hp) override {
    return fn_(space().to_numeric(hp));
  }

 private:
  Fn fn_;
};

ObjectivePair conflicting_quadratics(const std::vector<double>& z) {
  double f1 = 0.0, f2 = 0.0;
  for (double v : z) {
    f1 += v * v;
    f2 += (v - 1.0) * (v - 1.0);
  }
  return {f1, f2};
}

ObjectivePair sphere_pair(const std::vector<double>& z) {
  double f1 = 0.0;
  for (double v : z) f1 += (v - 0.5) * (v - 0.5);
  return {f1, 0.1 + 0.5 * f1};
}

ObjectivePair zdt1_grid(const std::vector<double>& z) {
  const double f1 = z.front();
  double tail = 0.0;
  for (std::size_t i = 1; i < z.size(); ++i) tail += z[i];
  const double g = z.size() > 1 ? 1.0 + 9.0 * tail / double(z.size() - 1) : 1.0;
  return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

}  // namespace

std::unique_ptr<ObjectiveFn> make_synthetic(const std::string& name,
                                            const SearchSpace& space) {
  SyntheticObjective::Fn fn = nullptr;
  if (name == "conflicting-quadratics") fn = conflicting_quadratics;
  else if (name == "sphere-pair") fn = sphere_pair;
  else if (name == "zdt1-grid") fn = zdt1_grid;
  else throw ConfigError("unknown synthetic objective '" + name + "'");
  return std::make_unique<SyntheticObjective>(name, space, fn);
}

ComposedObjective::ComposedObjective(std::string name, const SearchSpace& space,
                                     ArchTemplate tpl, ErrFn err, HardwareConfig hw)
    : ObjectiveFn(std::move(name), space), tpl_(std::move(tpl)), err_(std::move(err)), hw_(hw) {
  if (!err_) throw ConfigError("composed objective without an error function");
}

ObjectivePair ComposedObjective::eval_impl(const GridPoint& hp) {
  const double err = err_(space(), hp);
  const double eng = total_energy(network_from_hp(space(), hp, tpl_), hw_);
  return {err, eng};
}

EvalCache::EvalCache(const SearchSpace& space, ObjectiveFn& objective)
    : space_(space), objective_(objective) {}

const Observation& EvalCache::evaluate(const GridPoint& hp) {
  const std::uint64_t rank = space_.rank_of(hp);
  if (auto it = index_by_rank_.find(rank); it != index_by_rank_.end())
    return history_[it->second];

  Observation obs{hp, objective_.evaluate(hp), history_.size()};
  history_.push_back(std::move(obs));
  ranks_.insert(rank);
  index_by_rank_.emplace(rank, history_.size() - 1);
  return history_.back();
}

bool EvalCache::contains(const GridPoint& hp) const {
  return ranks_.contains(space_.rank_of(hp));
}

}  // namespace pabo
