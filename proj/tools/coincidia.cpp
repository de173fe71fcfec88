#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "coincidia/cli.hpp"
#include "coincidia/error.hpp"
#include "coincidia/kernels.hpp"

namespace cli = coincidia::cli;

int main(int argc, char** argv) {
  CLI::App app{"coincidia - coincidence-point solvers with stability certificates"};
  app.set_version_flag("--version", "coincidia 1.0");

  std::string command;
  std::string problem;
  std::optional<std::int64_t> grid_n, max_iter;
  std::optional<double> tol;
  std::optional<std::string> scheme, out, candidates, config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> kappa, a, q, lf, x0, c1, t1;
  bool list = false;

  app.add_option("command", command, "check | solve | stability | oracle")
      ->check(CLI::IsMember({"check", "solve", "stability", "oracle"}));
  app.add_option("--problem", problem, "registry name (see --list-problems)");
  app.add_option("--config", config_path, "JSON run configuration; flags override it");
  app.add_option("--grid-n", grid_n, "grid cells (>= 8)");
  app.add_option("--tol", tol, "solver tolerance in (0, 1)");
  app.add_option("--max-iter", max_iter, "iteration cap");
  app.add_option("--scheme", scheme, "auto | picard | averaged | resolvent");
  app.add_option("--seed", seed, "seed for the hypothesis samplers");
  app.add_option("--out", out, "output directory (default: .)");
  app.add_option("--builtin-candidates", candidates, "candidate set for stability (table1)");
  app.add_option("--kappa", kappa, "bvp3-example: kappa");
  app.add_option("--a", a, "pendulum-Pa: a");
  app.add_option("--q", q, "caputo-*: order q");
  app.add_option("--lf", lf, "caputo-*: Lipschitz constant of f");
  app.add_option("--x0", x0, "caputo-*: initial value");
  app.add_option("--c1", c1, "caputo-nonlocal: nonlocal coefficient");
  app.add_option("--t1", t1, "caputo-nonlocal: nonlocal point");
  app.add_flag("--list-problems", list, "print the problem registry and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& e : cli::registry()) {
      std::cout << e.name << "  " << e.description << "\n";
      for (const auto& p : e.params) {
        std::cout << "    --" << p.name << " (default " << p.default_value << ")  " << p.description
                  << "\n";
      }
    }
    std::cout << "kernels: " << coincidia::kernels::isa_name(coincidia::kernels::active_isa()) << "\n";
    return 0;
  }

  cli::RunConfig config;
  try {
    if (config_path) config = cli::load_config(*config_path);
    if (!command.empty()) config.command = cli::parse_command(command);
    else if (!config_path) coincidia::fail(coincidia::ErrorKind::config, "no command given");
    if (!problem.empty()) config.problem = problem;
    if (config.problem.empty()) coincidia::fail(coincidia::ErrorKind::config, "--problem is required");
    if (grid_n) config.grid_n = grid_n;
    if (tol) config.tol = tol;
    if (max_iter) config.max_iter = max_iter;
    if (scheme) config.scheme = scheme;
    if (seed) config.seed = seed;
    if (out) config.output_dir = out;
    if (candidates) config.candidates = candidates;
    const std::pair<const char*, std::optional<double>*> params[] = {
        {"kappa", &kappa}, {"a", &a}, {"q", &q}, {"lf", &lf}, {"x0", &x0}, {"c1", &c1}, {"t1", &t1}};
    for (const auto& [name, value] : params) {
      if (*value) config.params[name] = **value;
    }
  } catch (const coincidia::Error& e) {
    std::cerr << "coincidia: " << e.what() << "\n";
    return 2;
  }
  return cli::run(config, std::cout);
}
