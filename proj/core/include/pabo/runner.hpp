#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pabo/io.hpp"
#include "pabo/pabo.hpp"
#include "pabo/search_space.hpp"

namespace pabo {

struct ExecutedRun {
  SearchSpace space;
  RunResult result;
};

/// Loads the manifest's inputs, propagates its seed into the algorithm
/// config and runs the requested algorithm. No files are written.
ExecutedRun execute_manifest(const RunManifest& manifest);

/// Writes history.jsonl, front.csv and summary.json into manifest.out_dir.
void write_run_artifacts(const RunManifest& manifest, const SearchSpace& space,
                         const RunResult& result);

/// Full `run` command: validate, execute, persist. Returns the process exit
/// status; failures print one machine-readable JSON record to stderr.
int cmd_run(const RunManifest& manifest);

/// Runs every manifest (all must share space and objective), then writes
/// compare.csv and points.csv into `out_dir`. The hypervolume reference point
/// is the componentwise maximum over all runs scaled by 1.01; ratio against
/// grid truth is reported when a grid manifest is present.
int cmd_compare(const std::vector<RunManifest>& manifests,
                const std::filesystem::path& out_dir);

/// Parses and cross-checks a space and optional objective; prints the
/// cardinality. Exit 0 iff everything is consistent.
int cmd_validate(const std::filesystem::path& space_file,
                 const std::optional<std::string>& objective_spec);

/// Regenerates the three case-study bundles under `out_root` and measures
/// their expected_metrics.json by running every manifest.
int cmd_make_cases(const std::filesystem::path& out_root, std::uint64_t seed);

/// Re-runs a bundle's manifests and compares against expected_metrics.json.
/// Returns 0 iff all metrics fall within the declared tolerances.
int verify_bundle(const std::filesystem::path& bundle_dir);

}  // namespace pabo
