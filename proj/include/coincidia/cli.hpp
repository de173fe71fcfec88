#pragma once

// Command-line front end: run configuration, problem registry and the runner
// that writes report.json / solution.csv / table.csv.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace coincidia::cli {

enum class Command { check, solve, stability, oracle };

std::string_view to_string(Command c) noexcept;
Command parse_command(std::string_view s);

inline constexpr int kSchemaVersion = 1;

/// Optional fields stay unset until given, so a parsed config re-serializes to
/// the same document; the accessors resolve registry defaults.
struct RunConfig {
  Command command = Command::solve;
  std::string problem;
  std::optional<std::int64_t> grid_n;
  std::optional<double> tol;
  std::optional<std::int64_t> max_iter;
  std::optional<std::string> scheme;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<std::string> candidates;
  std::map<std::string, double> params;

  /// Throws a config error for out-of-range values or an unknown problem or
  /// parameter name.
  void validate() const;

  std::size_t resolved_grid_n() const;
  double resolved_tol() const;
  int resolved_max_iter() const;
  std::string resolved_scheme() const;
  std::uint64_t resolved_seed() const;
  std::filesystem::path resolved_output_dir() const;
  double param(const std::string& name) const;
};

/// Unknown keys and wrongly typed values are config errors.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

enum class ProblemKind { bvp3, pendulum, caputo };

struct ParamSpec {
  std::string name;
  double default_value;
  std::string description;
};

struct ProblemEntry {
  std::string name;
  ProblemKind kind;
  std::string description;
  std::vector<ParamSpec> params;
  std::size_t default_grid_n;
  int default_max_iter;
};

const std::vector<ProblemEntry>& registry();
/// Config error when the name is unknown.
const ProblemEntry& find_problem(std::string_view name);

/// Runs one command, writes its files into the output directory and returns
/// the process exit status: 0 ok, 2 config, 3 certificate or hypothesis
/// failure, 4 numeric failure. A one-line summary goes to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Writes `content` next to `path` and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace coincidia::cli
