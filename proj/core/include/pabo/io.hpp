#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pabo/baselines.hpp"
#include "pabo/case_studies.hpp"
#include "pabo/energy_model.hpp"
#include "pabo/objective.hpp"
#include "pabo/pabo.hpp"
#include "pabo/pareto.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view text);

// --- search spaces -------------------------------------------------------

/// JSON schema: {"params": [{"name", "kind": "numeric"|"categorical",
/// "values": [...]}, ...]}.
SearchSpace load_space(const std::filesystem::path& file);
void save_space(const SearchSpace& space, const std::filesystem::path& file);

// --- objective specifications --------------------------------------------

/// Composed objective on disk: architecture template, hardware constants and
/// error-surrogate parameters in one JSON document.
struct ComposedSpec {
  std::string name;
  ArchTemplate tpl;
  HardwareConfig hw;
  SurrogateParams surrogate;
};

ComposedSpec load_composed(const std::filesystem::path& file);
void save_composed(const ComposedSpec& spec, const std::filesystem::path& file);

/// Textual objective reference: "tabulated:<csv>", "synthetic:<name>" or
/// "composed:<json>".
struct ObjectiveSpec {
  enum class Kind { Tabulated, Synthetic, Composed };
  Kind kind = Kind::Synthetic;
  std::string arg;

  static ObjectiveSpec parse(std::string_view text);
  std::string text() const;
  /// Resolves a relative file argument against `base`; synthetic specs are
  /// returned unchanged.
  ObjectiveSpec resolved_against(const std::filesystem::path& base) const;
};

/// Instantiates the objective a spec describes over `space`.
std::unique_ptr<ObjectiveFn> make_objective(const ObjectiveSpec& spec,
                                            const SearchSpace& space);

// --- tabulated objectives (CSV) ------------------------------------------

/// CSV with one column per parameter plus `err`,`eng`; cells are matched
/// against canonical value text. The table must cover every grid point
/// exactly once; the error for a missing point names it.
std::vector<ObjectivePair> load_table(const std::filesystem::path& file,
                                      const SearchSpace& space);
void save_table(const std::filesystem::path& file, const SearchSpace& space,
                const std::vector<ObjectivePair>& rows);

// --- run artifacts --------------------------------------------------------

/// One JSON record per line: eval_index, hp assignments by name, err, eng,
/// timestamp (ISO-8601 UTC; determinism checks mask this field).
void write_history_jsonl(const std::filesystem::path& file, const SearchSpace& space,
                         const std::vector<Observation>& history);

/// Front members sorted by (err, eng, eval_index); columns are the parameter
/// names plus err, eng, eval_index, all in canonical value text.
void write_front_csv(const std::filesystem::path& file, const SearchSpace& space,
                     std::vector<Observation> front);

// --- manifests ------------------------------------------------------------

struct RandomConfig {
  std::uint64_t budget = 40;
};

/// Everything one run needs. File paths inside a manifest are resolved
/// against the manifest's own directory at load time.
struct RunManifest {
  std::string algorithm;  // pabo | nsga2 | random | grid
  std::filesystem::path space_file;
  ObjectiveSpec objective;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  PaboConfig pabo;
  Nsga2Config nsga2;
  RandomConfig random;
};

RunManifest load_manifest(const std::filesystem::path& file);
void save_manifest(const RunManifest& manifest, const std::filesystem::path& file);

}  // namespace pabo
