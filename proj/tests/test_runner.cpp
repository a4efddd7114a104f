#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pabo/error.hpp"
#include "pabo/runner.hpp"

using namespace pabo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pabo-runner-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunManifest synthetic_manifest(const TempDir& tmp, const std::string& algo) {
  const SearchSpace space =
      SearchSpace({ParamDef::numeric("x", {0.0, 1.0, 2.0, 3.0}),
                   ParamDef::numeric("y", {0.0, 1.0, 2.0, 3.0})});
  save_space(space, tmp.path / "space.json");
  RunManifest m;
  m.algorithm = algo;
  m.space_file = tmp.path / "space.json";
  m.objective = ObjectiveSpec::parse("synthetic:conflicting-quadratics");
  m.seed = 3;
  m.out_dir = tmp.path / algo;
  m.pabo.n_init = 3;
  m.pabo.max_evals = 8;
  m.random.budget = 8;
  m.nsga2.pop_size = 4;
  m.nsga2.max_generations = 5;
  return m;
}

std::size_t line_count(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("execute_manifest runs each algorithm with the manifest's seed") {
  TempDir tmp;
  for (const std::string& algo : {"pabo", "nsga2", "random", "grid"}) {
    const ExecutedRun run = execute_manifest(synthetic_manifest(tmp, algo));
    CHECK(run.result.algorithm == algo);
    CHECK(run.result.evals_used == run.result.history.size());
    CHECK(run.result.evals_used > 0);
  }
  CHECK_THROWS_AS(execute_manifest(synthetic_manifest(tmp, "hillclimb")), ConfigError);
}

TEST_CASE("cmd_run writes consistent artifacts") {
  TempDir tmp;
  const RunManifest m = synthetic_manifest(tmp, "pabo");
  REQUIRE(cmd_run(m) == 0);

  REQUIRE(fs::exists(m.out_dir / "history.jsonl"));
  REQUIRE(fs::exists(m.out_dir / "front.csv"));
  REQUIRE(fs::exists(m.out_dir / "summary.json"));

  std::ifstream sin(m.out_dir / "summary.json");
  const nlohmann::json summary = nlohmann::json::parse(sin);
  CHECK(summary.at("algorithm") == "pabo");
  CHECK(summary.at("evals_used") == line_count(m.out_dir / "history.jsonl"));
  CHECK(summary.at("config").at("max_evals") == 8);
  CHECK(summary.at("hypervolume").get<double>() > 0.0);

  // every front row's (err, eng, eval_index) appears in the history
  std::set<std::string> history_keys;
  std::ifstream hin(m.out_dir / "history.jsonl");
  std::string line;
  while (std::getline(hin, line)) {
    const nlohmann::json rec = nlohmann::json::parse(line);
    history_keys.insert(rec.at("err").dump() + '|' + rec.at("eng").dump() + '|' +
                        rec.at("eval_index").dump());
  }
  std::ifstream fin(m.out_dir / "front.csv");
  std::getline(fin, line);  // header
  std::size_t front_rows = 0;
  while (std::getline(fin, line)) {
    ++front_rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 5);  // two params + err, eng, eval_index
    const std::string key = nlohmann::json(parse_value(cells[2])).dump() + '|' +
                            nlohmann::json(parse_value(cells[3])).dump() + '|' + cells[4];
    CHECK(history_keys.count(key) == 1);
  }
  CHECK(front_rows == summary.at("front_size"));
}

TEST_CASE("cmd_run fails cleanly on a bad objective") {
  TempDir tmp;
  RunManifest m = synthetic_manifest(tmp, "grid");
  m.objective = ObjectiveSpec::parse("tabulated:" + (tmp.path / "absent.csv").string());
  CHECK(cmd_run(m) != 0);
  // no partial outputs
  CHECK_FALSE(fs::exists(m.out_dir));
}

TEST_CASE("cmd_compare emits per-algorithm rows and tagged points") {
  TempDir tmp;
  const std::vector<RunManifest> manifests{
      synthetic_manifest(tmp, "pabo"), synthetic_manifest(tmp, "random"),
      synthetic_manifest(tmp, "grid")};
  REQUIRE(cmd_compare(manifests, tmp.path / "cmp") == 0);

  std::ifstream in(tmp.path / "cmp" / "compare.csv");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "algorithm,evals_used,hypervolume,hypervolume_ratio,wall_time");
  std::size_t rows = 0;
  std::string line;
  double pabo_ratio = -1.0, random_ratio = -1.0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    if (cells[0] == "pabo") pabo_ratio = parse_value(cells[3]);
    if (cells[0] == "random") random_ratio = parse_value(cells[3]);
    if (cells[0] == "grid") CHECK(parse_value(cells[3]) == doctest::Approx(1.0));
  }
  CHECK(rows == 3);
  CHECK(pabo_ratio >= random_ratio);

  CHECK(line_count(tmp.path / "cmp" / "points.csv") > 1);
}

TEST_CASE("cmd_compare without grid omits the ratio column") {
  TempDir tmp;
  const std::vector<RunManifest> manifests{synthetic_manifest(tmp, "random")};
  REQUIRE(cmd_compare(manifests, tmp.path / "cmp2") == 0);
  std::ifstream in(tmp.path / "cmp2" / "compare.csv");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "algorithm,evals_used,hypervolume,wall_time");
  std::string row;
  REQUIRE(std::getline(in, row));
  CHECK(row.substr(0, 7) == "random,");
}

TEST_CASE("cmd_compare rejects mismatched spaces") {
  TempDir tmp;
  RunManifest a = synthetic_manifest(tmp, "random");
  RunManifest b = synthetic_manifest(tmp, "grid");
  const SearchSpace other =
      SearchSpace({ParamDef::numeric("z", {0.0, 1.0, 2.0})});
  save_space(other, tmp.path / "other.json");
  b.space_file = tmp.path / "other.json";
  CHECK(cmd_compare({a, b}, tmp.path / "cmp3") != 0);
}

TEST_CASE("cmd_validate reports cardinality and failures") {
  TempDir tmp;
  const RunManifest m = synthetic_manifest(tmp, "grid");
  CHECK(cmd_validate(m.space_file, "synthetic:conflicting-quadratics") == 0);
  CHECK(cmd_validate(m.space_file, std::nullopt) == 0);
  CHECK(cmd_validate(tmp.path / "absent.json", std::nullopt) != 0);
  CHECK(cmd_validate(m.space_file, "synthetic:unheard-of") != 0);
}
