#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "coincidia/cli.hpp"
#include "coincidia/error.hpp"

namespace coincidia::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {"command", "problem",    "grid_n",     "tol",
                                          "max_iter", "scheme",    "seed",       "output_dir",
                                          "candidates", "params"};

const std::set<std::string> kSchemes = {"auto", "picard", "averaged", "resolvent"};

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  fail(ErrorKind::config, "config key '" + key + "': " + what);
}

std::int64_t get_int(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) bad(key, "expected an integer");
  return v.get<std::int64_t>();
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::check:
      return "check";
    case Command::solve:
      return "solve";
    case Command::stability:
      return "stability";
    case Command::oracle:
      return "oracle";
  }
  return "unknown";
}

Command parse_command(std::string_view s) {
  if (s == "check") return Command::check;
  if (s == "solve") return Command::solve;
  if (s == "stability") return Command::stability;
  if (s == "oracle") return Command::oracle;
  fail(ErrorKind::config, "unknown command '" + std::string(s) + "'");
}

void RunConfig::validate() const {
  const ProblemEntry& entry = find_problem(problem);
  if (grid_n && *grid_n < 8) bad("grid_n", "must be at least 8");
  if (tol && !(*tol > 0.0 && *tol < 1.0)) bad("tol", "must lie in (0, 1)");
  if (max_iter && (*max_iter < 1 || *max_iter > 100000000)) bad("max_iter", "must be positive");
  if (scheme && !kSchemes.count(*scheme)) bad("scheme", "expected auto, picard, averaged or resolvent");
  if (scheme && entry.kind != ProblemKind::bvp3 && *scheme != "auto" && *scheme != "picard") {
    bad("scheme", "only bvp3 problems offer averaged and resolvent schemes");
  }
  if (candidates && *candidates != "table1") bad("candidates", "the only built-in set is 'table1'");
  if (candidates && entry.kind != ProblemKind::pendulum) {
    bad("candidates", "candidate sets exist for pendulum problems only");
  }
  for (const auto& [name, value] : params) {
    bool known = false;
    for (const ParamSpec& spec : entry.params) known = known || spec.name == name;
    if (!known) bad("params", "problem '" + problem + "' has no parameter '" + name + "'");
    if (!std::isfinite(value)) bad("params", "parameter '" + name + "' must be finite");
  }
}

std::size_t RunConfig::resolved_grid_n() const {
  return grid_n ? static_cast<std::size_t>(*grid_n) : find_problem(problem).default_grid_n;
}
double RunConfig::resolved_tol() const { return tol.value_or(1e-10); }
int RunConfig::resolved_max_iter() const {
  return max_iter ? static_cast<int>(*max_iter) : find_problem(problem).default_max_iter;
}
std::string RunConfig::resolved_scheme() const { return scheme.value_or("auto"); }
std::uint64_t RunConfig::resolved_seed() const { return seed.value_or(0); }
std::filesystem::path RunConfig::resolved_output_dir() const { return output_dir.value_or("."); }

double RunConfig::param(const std::string& name) const {
  if (auto it = params.find(name); it != params.end()) return it->second;
  for (const ParamSpec& spec : find_problem(problem).params) {
    if (spec.name == name) return spec.default_value;
  }
  fail(ErrorKind::config, "problem '" + problem + "' has no parameter '" + name + "'");
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::config, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.count(key)) bad(key, "unknown key");
  }
  if (!j.contains("command")) bad("command", "missing");
  if (!j.contains("problem")) bad("problem", "missing");
  RunConfig c;
  c.command = parse_command(get_string(j, "command"));
  c.problem = get_string(j, "problem");
  if (j.contains("grid_n")) c.grid_n = get_int(j, "grid_n");
  if (j.contains("tol")) c.tol = get_number(j, "tol");
  if (j.contains("max_iter")) c.max_iter = get_int(j, "max_iter");
  if (j.contains("scheme")) c.scheme = get_string(j, "scheme");
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      bad("seed", "expected a nonnegative integer");
    }
    c.seed = v.get<std::uint64_t>();
  }
  if (j.contains("output_dir")) c.output_dir = get_string(j, "output_dir");
  if (j.contains("candidates")) c.candidates = get_string(j, "candidates");
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) bad("params", "expected an object");
    for (const auto& [name, value] : p.items()) c.params[name] = get_number(p, name);
  }
  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["problem"] = c.problem;
  if (c.grid_n) j["grid_n"] = *c.grid_n;
  if (c.tol) j["tol"] = *c.tol;
  if (c.max_iter) j["max_iter"] = *c.max_iter;
  if (c.scheme) j["scheme"] = *c.scheme;
  if (c.seed) j["seed"] = *c.seed;
  if (c.output_dir) j["output_dir"] = *c.output_dir;
  if (c.candidates) j["candidates"] = *c.candidates;
  if (!c.params.empty()) j["params"] = c.params;
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, "config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace coincidia::cli
