#include "pabo/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "pabo/error.hpp"

namespace pabo {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(KernelFamily family) {
  return family == KernelFamily::Matern52 ? "matern52" : "squared-exponential";
}

KernelFamily kernel_family_from_string(std::string_view text) {
  if (text == "matern52") return KernelFamily::Matern52;
  if (text == "squared-exponential") return KernelFamily::SquaredExponential;
  throw ConfigError("unknown kernel family '" + std::string(text) + "'");
}

namespace {

void check_keys(const ordered_json& j, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "'");
}

ordered_json parse_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open '" + file.string() + "'");
  try {
    return ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw ConfigError("'" + file.string() + "': " + e.what());
  }
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write '" + file.string() + "'");
}

void write_json_file(const std::filesystem::path& file, const ordered_json& j) {
  write_text_file(file, j.dump(2) + "\n");
}

// Rethrows json access errors as ConfigError carrying the file name.
template <typename Fn>
auto with_file_context(const std::filesystem::path& file, Fn&& fn) {
  try {
    return fn();
  } catch (const ordered_json::exception& e) {
    throw ConfigError("'" + file.string() + "': " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError("'" + file.string() + "': " + e.what());
  }
}

std::string describe_point(const SearchSpace& space, const GridPoint& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < space.dim(); ++i) {
    if (i > 0) out += ", ";
    out += space.params()[i].name + "=" + space.params()[i].value_text(p.idx[i]);
  }
  return out + "}";
}

// --- CSV ------------------------------------------------------------------

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted)
    throw ConfigError("line " + std::to_string(line_no) + ": unterminated quote");
  return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + file.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

// --- search spaces ----------------------------------------------------------

SearchSpace load_space(const std::filesystem::path& file) {
  const ordered_json j = parse_json_file(file);
  return with_file_context(file, [&] {
    check_keys(j, {"params"});
    std::vector<ParamDef> params;
    for (const ordered_json& pj : j.at("params")) {
      check_keys(pj, {"name", "kind", "values"});
      const std::string name = pj.at("name").get<std::string>();
      const std::string kind = pj.at("kind").get<std::string>();
      if (kind == "numeric") {
        params.push_back(ParamDef::numeric(name, pj.at("values").get<std::vector<double>>()));
      } else if (kind == "categorical") {
        params.push_back(
            ParamDef::categorical(name, pj.at("values").get<std::vector<std::string>>()));
      } else {
        throw ConfigError("parameter '" + name + "' has unknown kind '" + kind + "'");
      }
    }
    return SearchSpace(std::move(params));
  });
}

void save_space(const SearchSpace& space, const std::filesystem::path& file) {
  ordered_json params = ordered_json::array();
  for (const ParamDef& p : space.params()) {
    ordered_json pj{{"name", p.name}};
    if (p.kind == ParamKind::Numeric) {
      pj["kind"] = "numeric";
      pj["values"] = p.numeric_values;
    } else {
      pj["kind"] = "categorical";
      pj["values"] = p.labels;
    }
    params.push_back(std::move(pj));
  }
  write_json_file(file, ordered_json{{"params", std::move(params)}});
}

// --- objective specifications ----------------------------------------------

namespace {

ordered_json dimref_to_json(const DimRef& r) {
  if (r.param.empty()) return ordered_json{{"value", r.value}};
  return ordered_json{{"param", r.param}};
}

DimRef dimref_from_json(const ordered_json& j) {
  check_keys(j, {"value", "param"});
  if (j.contains("param")) return DimRef::bound(j.at("param").get<std::string>());
  return DimRef::fixed(j.at("value").get<std::uint64_t>());
}

ordered_json template_to_json(const ArchTemplate& t) {
  ordered_json conv = ordered_json::array();
  for (const ConvSlot& s : t.conv) {
    ordered_json sj{{"kernel", dimref_to_json(s.kernel)},
                    {"out_channels", dimref_to_json(s.out_channels)},
                    {"stride", s.stride},
                    {"padding", s.padding},
                    {"same_padding", s.same_padding}};
    if (s.pool) sj["pool"] = ordered_json{{"size", s.pool->size}, {"stride", s.pool->stride}};
    conv.push_back(std::move(sj));
  }
  ordered_json fc = ordered_json::array();
  for (const FcSlot& s : t.fc_hidden)
    fc.push_back(ordered_json{{"out_features", dimref_to_json(s.out_features)}});
  return ordered_json{{"name", t.name},
                      {"input_size", t.input_size},
                      {"input_channels", t.input_channels},
                      {"num_classes", t.num_classes},
                      {"conv_count", dimref_to_json(t.conv_count)},
                      {"conv", std::move(conv)},
                      {"fc_count", dimref_to_json(t.fc_count)},
                      {"fc_hidden", std::move(fc)}};
}

ArchTemplate template_from_json(const ordered_json& j) {
  check_keys(j, {"name", "input_size", "input_channels", "num_classes", "conv_count", "conv",
                 "fc_count", "fc_hidden"});
  ArchTemplate t;
  t.name = j.at("name").get<std::string>();
  t.input_size = j.at("input_size").get<std::uint64_t>();
  t.input_channels = j.at("input_channels").get<std::uint64_t>();
  t.num_classes = j.at("num_classes").get<std::uint64_t>();
  t.conv_count = dimref_from_json(j.at("conv_count"));
  for (const ordered_json& sj : j.at("conv")) {
    check_keys(sj, {"kernel", "out_channels", "stride", "padding", "same_padding", "pool"});
    ConvSlot s;
    s.kernel = dimref_from_json(sj.at("kernel"));
    s.out_channels = dimref_from_json(sj.at("out_channels"));
    s.stride = sj.value("stride", std::uint64_t{1});
    s.padding = sj.value("padding", std::uint64_t{0});
    s.same_padding = sj.value("same_padding", false);
    if (sj.contains("pool")) {
      check_keys(sj.at("pool"), {"size", "stride"});
      s.pool = PoolSpec{sj.at("pool").at("size").get<std::uint64_t>(),
                        sj.at("pool").at("stride").get<std::uint64_t>()};
    }
    t.conv.push_back(std::move(s));
  }
  t.fc_count = dimref_from_json(j.at("fc_count"));
  for (const ordered_json& sj : j.at("fc_hidden")) {
    check_keys(sj, {"out_features"});
    t.fc_hidden.push_back(FcSlot{dimref_from_json(sj.at("out_features"))});
  }
  return t;
}

ordered_json surrogate_to_json(const SurrogateParams& s) {
  ordered_json weights = ordered_json::object();
  for (const auto& [name, w] : s.capacity_weights) weights[name] = w;
  return ordered_json{{"name", s.name},
                      {"seed", s.seed},
                      {"capacity_weights", weights},
                      {"base", s.base},
                      {"capacity_weight", s.capacity_weight},
                      {"capacity_target", s.capacity_target},
                      {"capacity_gate", s.capacity_gate},
                      {"gate_ramp", s.gate_ramp},
                      {"tuning_weight", s.tuning_weight},
                      {"interaction_weight", s.interaction_weight}};
}

SurrogateParams surrogate_from_json(const ordered_json& j) {
  check_keys(j, {"name", "seed", "capacity_weights", "base", "capacity_weight",
                 "capacity_target", "capacity_gate", "gate_ramp", "tuning_weight",
                 "interaction_weight"});
  SurrogateParams s;
  s.name = j.at("name").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  const ordered_json& weights = j.at("capacity_weights");
  if (!weights.is_object())
    throw ConfigError("error_surrogate.capacity_weights must be an object");
  for (const auto& [name, w] : weights.items())
    s.capacity_weights.emplace_back(name, w.get<double>());
  s.base = j.value("base", s.base);
  s.capacity_weight = j.value("capacity_weight", s.capacity_weight);
  s.capacity_target = j.value("capacity_target", s.capacity_target);
  s.capacity_gate = j.value("capacity_gate", s.capacity_gate);
  s.gate_ramp = j.value("gate_ramp", s.gate_ramp);
  s.tuning_weight = j.value("tuning_weight", s.tuning_weight);
  s.interaction_weight = j.value("interaction_weight", s.interaction_weight);
  return s;
}

}  // namespace

ComposedSpec load_composed(const std::filesystem::path& file) {
  const ordered_json j = parse_json_file(file);
  return with_file_context(file, [&] {
    check_keys(j, {"kind", "name", "hardware", "template", "error_surrogate"});
    if (j.value("kind", "composed") != std::string("composed"))
      throw ConfigError("not a composed objective file");
    ComposedSpec spec;
    spec.name = j.at("name").get<std::string>();
    const ordered_json& hj = j.at("hardware");
    check_keys(hj, {"xs", "epx"});
    spec.hw.xs = hj.at("xs").get<std::uint64_t>();
    spec.hw.epx = hj.at("epx").get<double>();
    spec.tpl = template_from_json(j.at("template"));
    spec.surrogate = surrogate_from_json(j.at("error_surrogate"));
    return spec;
  });
}

void save_composed(const ComposedSpec& spec, const std::filesystem::path& file) {
  write_json_file(file,
                  ordered_json{{"kind", "composed"},
                               {"name", spec.name},
                               {"hardware", {{"xs", spec.hw.xs}, {"epx", spec.hw.epx}}},
                               {"template", template_to_json(spec.tpl)},
                               {"error_surrogate", surrogate_to_json(spec.surrogate)}});
}

ObjectiveSpec ObjectiveSpec::parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 == text.size())
    throw ConfigError("objective spec '" + std::string(text) +
                      "' must look like kind:argument");
  const std::string_view kind = text.substr(0, colon);
  ObjectiveSpec spec;
  spec.arg = std::string(text.substr(colon + 1));
  if (kind == "tabulated") {
    spec.kind = Kind::Tabulated;
  } else if (kind == "synthetic") {
    spec.kind = Kind::Synthetic;
  } else if (kind == "composed") {
    spec.kind = Kind::Composed;
  } else {
    throw ConfigError("unknown objective kind '" + std::string(kind) + "'");
  }
  return spec;
}

std::string ObjectiveSpec::text() const {
  switch (kind) {
    case Kind::Tabulated: return "tabulated:" + arg;
    case Kind::Synthetic: return "synthetic:" + arg;
    case Kind::Composed: return "composed:" + arg;
  }
  return arg;
}

ObjectiveSpec ObjectiveSpec::resolved_against(const std::filesystem::path& base) const {
  if (kind == Kind::Synthetic) return *this;
  const std::filesystem::path p(arg);
  if (p.is_absolute()) return *this;
  ObjectiveSpec out = *this;
  out.arg = (base / p).lexically_normal().string();
  return out;
}

std::unique_ptr<ObjectiveFn> make_objective(const ObjectiveSpec& spec,
                                            const SearchSpace& space) {
  switch (spec.kind) {
    case ObjectiveSpec::Kind::Synthetic:
      return make_synthetic(spec.arg, space);
    case ObjectiveSpec::Kind::Tabulated:
      return std::make_unique<TabulatedObjective>(space, load_table(spec.arg, space));
    case ObjectiveSpec::Kind::Composed: {
      const ComposedSpec composed = load_composed(spec.arg);
      ErrSurrogate surrogate(space, composed.surrogate);
      return std::make_unique<ComposedObjective>(
          composed.name, space, composed.tpl,
          [s = std::move(surrogate)](const SearchSpace& sp, const GridPoint& hp) {
            return s(sp, hp);
          },
          composed.hw);
    }
  }
  throw ConfigError("unhandled objective kind");
}

// --- tabulated objectives ---------------------------------------------------

std::vector<ObjectivePair> load_table(const std::filesystem::path& file,
                                      const SearchSpace& space) {
  const std::vector<std::string> lines = read_lines(file);
  return with_file_context(file, [&]() -> std::vector<ObjectivePair> {
    if (lines.empty()) throw ConfigError("empty table");
    const std::vector<std::string> header = csv_split(lines[0], 1);

    std::vector<int> param_col(space.dim(), -1);
    int err_col = -1, eng_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string& name = header[c];
      if (name == "err") {
        err_col = static_cast<int>(c);
      } else if (name == "eng") {
        eng_col = static_cast<int>(c);
      } else {
        const int pi = space.param_index(name);
        if (pi < 0) throw ConfigError("unknown column '" + name + "'");
        if (param_col[static_cast<std::size_t>(pi)] != -1)
          throw ConfigError("duplicate column '" + name + "'");
        param_col[static_cast<std::size_t>(pi)] = static_cast<int>(c);
      }
    }
    if (err_col < 0 || eng_col < 0) throw ConfigError("table needs err and eng columns");
    for (std::size_t i = 0; i < space.dim(); ++i)
      if (param_col[i] < 0)
        throw ConfigError("table lacks a column for parameter '" + space.params()[i].name +
                          "'");

    std::vector<ObjectivePair> rows(space.cardinality());
    std::vector<bool> seen(space.cardinality(), false);
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
      if (lines[ln].empty()) continue;
      const std::vector<std::string> fields = csv_split(lines[ln], ln + 1);
      if (fields.size() != header.size())
        throw ConfigError("line " + std::to_string(ln + 1) + ": expected " +
                          std::to_string(header.size()) + " fields, got " +
                          std::to_string(fields.size()));
      GridPoint p;
      p.idx.resize(space.dim());
      for (std::size_t i = 0; i < space.dim(); ++i) {
        const ParamDef& def = space.params()[i];
        const std::string& cell = fields[static_cast<std::size_t>(param_col[i])];
        std::size_t match = def.size();
        if (def.kind == ParamKind::Numeric) {
          const double v = parse_value(cell);
          for (std::size_t k = 0; k < def.numeric_values.size(); ++k)
            if (def.numeric_values[k] == v) {
              match = k;
              break;
            }
        } else {
          for (std::size_t k = 0; k < def.labels.size(); ++k)
            if (def.labels[k] == cell) {
              match = k;
              break;
            }
        }
        if (match == def.size())
          throw ConfigError("line " + std::to_string(ln + 1) + ": '" + cell +
                            "' is not an admissible value of '" + def.name + "'");
        p.idx[i] = static_cast<std::uint32_t>(match);
      }
      const std::uint64_t rank = space.rank_of(p);
      if (seen[rank])
        throw ConfigError("line " + std::to_string(ln + 1) + ": duplicate row for " +
                          describe_point(space, p));
      seen[rank] = true;
      rows[rank] = {parse_value(fields[static_cast<std::size_t>(err_col)]),
                    parse_value(fields[static_cast<std::size_t>(eng_col)])};
      validate_objectives(rows[rank]);
    }
    for (std::uint64_t r = 0; r < space.cardinality(); ++r)
      if (!seen[r])
        throw ConfigError("table is missing grid point " +
                          describe_point(space, space.point_at(r)));
    return rows;
  });
}

void save_table(const std::filesystem::path& file, const SearchSpace& space,
                const std::vector<ObjectivePair>& rows) {
  if (rows.size() != space.cardinality())
    throw ConfigError("table rows must cover the grid exactly");
  std::ostringstream out;
  for (const ParamDef& p : space.params()) out << csv_escape(p.name) << ',';
  out << "err,eng\n";
  for (std::uint64_t r = 0; r < space.cardinality(); ++r) {
    const GridPoint p = space.point_at(r);
    for (std::size_t i = 0; i < space.dim(); ++i)
      out << csv_escape(space.params()[i].value_text(p.idx[i])) << ',';
    out << format_value(rows[r].err) << ',' << format_value(rows[r].eng) << '\n';
  }
  write_text_file(file, out.str());
}

// --- run artifacts ----------------------------------------------------------

void write_history_jsonl(const std::filesystem::path& file, const SearchSpace& space,
                         const std::vector<Observation>& history) {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

  std::ostringstream out;
  for (const Observation& obs : history) {
    ordered_json hp;
    for (std::size_t i = 0; i < space.dim(); ++i) {
      const ParamDef& def = space.params()[i];
      if (def.kind == ParamKind::Numeric)
        hp[def.name] = def.numeric_values[obs.hp.idx[i]];
      else
        hp[def.name] = def.labels[obs.hp.idx[i]];
    }
    const ordered_json record{{"eval_index", obs.eval_index},
                              {"hp", std::move(hp)},
                              {"err", obs.objectives.err},
                              {"eng", obs.objectives.eng},
                              {"timestamp", stamp}};
    out << record.dump() << '\n';
  }
  write_text_file(file, out.str());
}

void write_front_csv(const std::filesystem::path& file, const SearchSpace& space,
                     std::vector<Observation> front) {
  std::sort(front.begin(), front.end(), [](const Observation& a, const Observation& b) {
    if (a.objectives.err != b.objectives.err) return a.objectives.err < b.objectives.err;
    if (a.objectives.eng != b.objectives.eng) return a.objectives.eng < b.objectives.eng;
    return a.eval_index < b.eval_index;
  });
  std::ostringstream out;
  for (const ParamDef& p : space.params()) out << csv_escape(p.name) << ',';
  out << "err,eng,eval_index\n";
  for (const Observation& obs : front) {
    for (std::size_t i = 0; i < space.dim(); ++i)
      out << csv_escape(space.params()[i].value_text(obs.hp.idx[i])) << ',';
    out << format_value(obs.objectives.err) << ',' << format_value(obs.objectives.eng) << ','
        << obs.eval_index << '\n';
  }
  write_text_file(file, out.str());
}

// --- manifests ---------------------------------------------------------------

RunManifest load_manifest(const std::filesystem::path& file) {
  const ordered_json j = parse_json_file(file);
  return with_file_context(file, [&] {
    check_keys(j, {"algorithm", "space", "objective", "seed", "out", "pabo", "nsga2",
                   "random"});
    RunManifest m;
    m.algorithm = j.at("algorithm").get<std::string>();
    if (m.algorithm != "pabo" && m.algorithm != "nsga2" && m.algorithm != "random" &&
        m.algorithm != "grid")
      throw ConfigError("unknown algorithm '" + m.algorithm + "'");

    const std::filesystem::path base = file.has_parent_path()
                                           ? file.parent_path()
                                           : std::filesystem::path(".");
    std::filesystem::path space(j.at("space").get<std::string>());
    m.space_file = space.is_absolute() ? space : (base / space).lexically_normal();
    m.objective =
        ObjectiveSpec::parse(j.at("objective").get<std::string>()).resolved_against(base);
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("out")) m.out_dir = j.at("out").get<std::string>();

    if (j.contains("pabo")) {
      const ordered_json& p = j.at("pabo");
      check_keys(p, {"n_init", "stop_epsilon", "max_evals", "gp_refit_every", "supervisor",
                     "kernel"});
      m.pabo.n_init = p.value("n_init", m.pabo.n_init);
      m.pabo.stop_epsilon = p.value("stop_epsilon", m.pabo.stop_epsilon);
      m.pabo.max_evals = p.value("max_evals", m.pabo.max_evals);
      m.pabo.gp_refit_every = p.value("gp_refit_every", m.pabo.gp_refit_every);
      m.pabo.supervisor = p.value("supervisor", m.pabo.supervisor);
      if (p.contains("kernel"))
        m.pabo.kernel_family = kernel_family_from_string(p.at("kernel").get<std::string>());
    }
    if (j.contains("nsga2")) {
      const ordered_json& n = j.at("nsga2");
      check_keys(n, {"pop_size", "max_generations", "crossover_prob", "mutation_prob"});
      m.nsga2.pop_size = n.value("pop_size", m.nsga2.pop_size);
      m.nsga2.max_generations = n.value("max_generations", m.nsga2.max_generations);
      m.nsga2.crossover_prob = n.value("crossover_prob", m.nsga2.crossover_prob);
      if (n.contains("mutation_prob") && !n.at("mutation_prob").is_null())
        m.nsga2.mutation_prob = n.at("mutation_prob").get<double>();
    }
    if (j.contains("random")) {
      const ordered_json& r = j.at("random");
      check_keys(r, {"budget"});
      m.random.budget = r.value("budget", m.random.budget);
    }
    return m;
  });
}

void save_manifest(const RunManifest& m, const std::filesystem::path& file) {
  ordered_json j{{"algorithm", m.algorithm},
                 {"space", m.space_file.string()},
                 {"objective", m.objective.text()},
                 {"seed", m.seed}};
  if (!m.out_dir.empty()) j["out"] = m.out_dir.string();
  if (m.algorithm == "pabo")
    j["pabo"] = ordered_json{{"n_init", m.pabo.n_init},
                             {"stop_epsilon", m.pabo.stop_epsilon},
                             {"max_evals", m.pabo.max_evals},
                             {"gp_refit_every", m.pabo.gp_refit_every},
                             {"supervisor", m.pabo.supervisor},
                             {"kernel", std::string(to_string(m.pabo.kernel_family))}};
  if (m.algorithm == "nsga2") {
    ordered_json n{{"pop_size", m.nsga2.pop_size},
                   {"max_generations", m.nsga2.max_generations},
                   {"crossover_prob", m.nsga2.crossover_prob}};
    if (m.nsga2.mutation_prob) n["mutation_prob"] = *m.nsga2.mutation_prob;
    j["nsga2"] = std::move(n);
  }
  if (m.algorithm == "random") j["random"] = ordered_json{{"budget", m.random.budget}};
  write_json_file(file, j);
}

}  // namespace pabo
