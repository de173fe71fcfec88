#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "coincidia/bvp3.hpp"
#include "coincidia/caputo.hpp"
#include "coincidia/cli.hpp"
#include "coincidia/error.hpp"
#include "coincidia/pendulum.hpp"

namespace coincidia::cli {
namespace {

using nlohmann::json;
using numerics::Grid;
using numerics::GridFunction;
using numerics::GridStyle;

constexpr double kPi = std::numbers::pi;
constexpr int kCheckSamples = 1000;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain:
      return 2;
    case ErrorKind::certificate:
      return 3;
    default:
      return 4;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json hypothesis_json(const HypothesisReport& r) {
  json w = json::array();
  for (const Witness& x : r.witnesses) {
    w.push_back({{"description", x.description}, {"sample", x.sample}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  }
  return {{"condition", r.condition}, {"pass", r.pass},   {"constants", r.constants},
          {"margins", r.margins},     {"witnesses", w},   {"notes", r.notes}};
}

json solve_json(const engine::SolveReport& r) {
  json j = {{"scheme", std::string(engine::to_string(r.scheme))},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"stagnated", r.stagnated},
            {"tolerance", r.tolerance},
            {"final_residual", r.final_residual},
            {"residual_history", r.residual_history},
            {"certificates", r.certificates},
            {"notes", r.notes},
            {"grid_points", r.solution.size()}};
  j["stability_radius"] = r.stability_radius ? json(*r.stability_radius) : json(nullptr);
  return j;
}

std::string solution_csv(const std::vector<std::string>& names,
                         const std::vector<const GridFunction*>& columns) {
  std::string out = "t";
  for (const std::string& n : names) out += "," + n;
  out += "\n";
  const Grid& grid = columns.front()->grid();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += fmt(grid.point(j));
    for (const GridFunction* c : columns) out += "," + fmt((*c)[j]);
    out += "\n";
  }
  return out;
}

struct Outcome {
  json body = json::object();
  int status = 0;
  std::string summary;
  std::optional<std::pair<ErrorKind, std::string>> error;
  std::map<std::string, std::string> files;
};

void not_converged(Outcome& o, const engine::SolveReport& r) {
  o.status = 4;
  o.error = {ErrorKind::numeric, "no convergence after " + std::to_string(r.iterations) +
                                     " iterations (residual " + fmt(r.final_residual) + ")"};
}

// ---- problem construction --------------------------------------------------

pendulum::PendulumProblem make_pendulum(const RunConfig& c) {
  return pendulum::scaled_problem(c.param("a"), [](double t) { return std::sin(kPi * t); });
}

caputo::CaputoProblem make_caputo(const RunConfig& c) {
  caputo::CaputoProblem p;
  p.q = c.param("q");
  p.L_f = c.param("lf");
  p.x0 = c.param("x0");
  p.horizon = 1.0;
  if (c.problem == "caputo-linear") {
    const double lf = p.L_f;
    p.f = [lf](double, double x) { return lf * x; };
  } else if (c.problem == "caputo-constant") {
    p.f = [](double, double) { return 1.0; };
  } else {
    p.f = [](double, double) { return 0.0; };
    const double c1 = c.param("c1");
    const double t1 = c.param("t1");
    if (!(t1 > 0.0 && t1 <= 1.0)) fail(ErrorKind::config, "t1 must lie in (0, 1]");
    p.nonlocal.push_back({t1, [c1](double x) { return c1 * x; }, std::fabs(c1)});
  }
  p.validate();
  return p;
}

double caputo_exact(const RunConfig& c, const caputo::CaputoProblem& p, double t) {
  if (c.problem == "caputo-linear") {
    return p.x0 * numerics::mittag_leffler(p.q, p.L_f * std::pow(t, p.q), 1e-16);
  }
  if (c.problem == "caputo-constant") return p.x0 + std::pow(t, p.q) / numerics::gamma(p.q + 1.0);
  return p.x0 / (1.0 - c.param("c1"));
}

// ---- commands -----------------------------------------------------------------

void run_check(const RunConfig& c, const ProblemEntry& e, Outcome& o) {
  std::vector<HypothesisReport> reports;
  switch (e.kind) {
    case ProblemKind::bvp3: {
      const auto p = bvp3::example_problem(c.param("kappa"));
      reports.push_back(bvp3::check_h1(p, kCheckSamples, c.resolved_seed()));
      reports.push_back(bvp3::check_h2(p, kCheckSamples, c.resolved_seed()));
      break;
    }
    case ProblemKind::pendulum: {
      reports.push_back(pendulum::check_A(make_pendulum(c), kCheckSamples, c.resolved_seed()));
      break;
    }
    case ProblemKind::caputo: {
      reports.push_back(caputo::contraction_certificate(make_caputo(c)));
      break;
    }
  }
  json list = json::array();
  bool all = true;
  for (const HypothesisReport& r : reports) {
    list.push_back(hypothesis_json(r));
    all = all && r.pass;
  }
  o.body["hypotheses"] = list;
  o.summary = all ? "all hypotheses hold" : "hypothesis check failed";
  if (!all) {
    o.status = 3;
    std::string failed;
    for (const HypothesisReport& r : reports) {
      if (!r.pass) failed += (failed.empty() ? "" : ", ") + r.condition;
    }
    o.error = {ErrorKind::certificate, "failed: " + failed};
  }
}

engine::SolveReport solve_pendulum(const RunConfig& c, const pendulum::PendulumProblem& p) {
  const Grid grid(0.0, 1.0, c.resolved_grid_n(), GridStyle::nodes);
  return pendulum::solve(p, grid, c.resolved_tol(), c.resolved_max_iter());
}

void run_solve(const RunConfig& c, const ProblemEntry& e, Outcome& o) {
  const std::size_t n = c.resolved_grid_n();
  engine::SolveReport r = [&] {
    switch (e.kind) {
      case ProblemKind::bvp3: {
        const auto p = bvp3::example_problem(c.param("kappa"));
        const std::string s = c.resolved_scheme();
        const auto choice = s == "picard"     ? bvp3::SchemeChoice::picard
                            : s == "averaged" ? bvp3::SchemeChoice::averaged
                            : s == "resolvent" ? bvp3::SchemeChoice::resolvent
                                               : bvp3::SchemeChoice::automatic;
        const Grid grid(0.0, 1.0, n, GridStyle::midpoints);
        auto rep = bvp3::solve(p, grid, choice, c.resolved_tol(), c.resolved_max_iter());
        rep.certificates["ode_defect"] = bvp3::ode_defect(p, rep.solution);
        o.files["solution.csv"] =
            solution_csv({"u", "u_prime", "y"}, {&rep.companions.at("u"),
                                                 &rep.companions.at("u_prime"), &rep.solution});
        return rep;
      }
      case ProblemKind::pendulum: {
        auto rep = solve_pendulum(c, make_pendulum(c));
        o.files["solution.csv"] = solution_csv({"u", "y"}, {&rep.companions.at("u"), &rep.solution});
        return rep;
      }
      case ProblemKind::caputo:
      default: {
        const auto p = make_caputo(c);
        const Grid grid(0.0, 1.0, n, GridStyle::nodes);
        auto rep = caputo::solve(p, grid, c.resolved_tol(), c.resolved_max_iter());
        // y is the fractional derivative f(t, x(t)).
        std::vector<double> fx(grid.size());
        for (std::size_t j = 0; j < fx.size(); ++j) fx[j] = p.f(grid.point(j), rep.solution[j]);
        const GridFunction y(grid, std::move(fx));
        o.files["solution.csv"] = solution_csv({"u", "y"}, {&rep.solution, &y});
        return rep;
      }
    }
  }();
  o.body["solve"] = solve_json(r);
  o.summary = (r.converged ? "converged in " : "stopped after ") + std::to_string(r.iterations) +
              " iterations, residual " + fmt(r.final_residual);
  if (!r.converged) not_converged(o, r);
}

void run_stability(const RunConfig& c, const ProblemEntry& e, Outcome& o) {
  if (e.kind != ProblemKind::pendulum) {
    fail(ErrorKind::config, "stability tables exist for pendulum problems only");
  }
  const auto p = make_pendulum(c);
  const engine::SolveReport r = solve_pendulum(c, p);
  const GridFunction& u = r.companions.at("u");
  const auto candidates = pendulum::table1_candidates(u.grid());
  const auto rows = pendulum::stability_table(p, candidates, u);

  std::string table = "name,epsilon,psi,sup_distance_to_solution\n";
  std::string loc = "name,t,w,u_star,band\n";
  json jrows = json::array();
  bool localized = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double dist = row.sup_distance_to_solution.value_or(NAN);
    const bool inside = dist < row.psi;
    localized = localized && inside;
    table += row.name + "," + fmt(row.epsilon) + "," + fmt(row.psi) + "," + fmt(dist) + "\n";
    jrows.push_back({{"name", row.name}, {"epsilon", row.epsilon}, {"psi", row.psi},
                     {"sup_distance_to_solution", dist}, {"localized", inside}});
    const GridFunction& w = candidates[i].w;
    for (std::size_t j = 0; j < w.size(); ++j) {
      loc += row.name + "," + fmt(w.grid().point(j)) + "," + fmt(w[j]) + "," + fmt(u[j]) + "," +
             fmt(row.psi) + "\n";
    }
  }
  o.files["table.csv"] = table;
  o.files["localization.csv"] = loc;
  o.files["solution.csv"] = solution_csv({"u", "y"}, {&u, &r.solution});
  o.body["solve"] = solve_json(r);
  o.body["table"] = jrows;
  o.body["localization_holds"] = localized;
  o.summary = std::to_string(rows.size()) + " candidates, localization " +
              (localized ? "holds" : "FAILS");
  if (!r.converged) {
    not_converged(o, r);
  } else if (!localized) {
    o.status = 3;
    o.error = {ErrorKind::certificate, "a candidate lies outside its localization band"};
  }
}

void run_oracle(const RunConfig& c, const ProblemEntry& e, Outcome& o) {
  json checks = json::array();
  bool all = true;
  auto add = [&](const std::string& name, double computed, double reference, double tolerance) {
    const double err = std::fabs(computed - reference);
    const bool ok = err <= tolerance;
    all = all && ok;
    checks.push_back({{"name", name},
                      {"computed", computed},
                      {"reference", reference},
                      {"abs_error", err},
                      {"tolerance", tolerance},
                      {"pass", ok}});
  };

  switch (e.kind) {
    case ProblemKind::bvp3: {
      const double kappa = c.param("kappa");
      const double M = 3.0 * std::sqrt(3.0) / 4.0;
      const double two_over_pi = 2.0 / kPi;
      add("c_constant", bvp3::c_constant(-0.1, 0.5), two_over_pi, 1e-12);
      const double kc = (4.0 * kPi - 6.0) / (9.0 * std::sqrt(3.0));
      add("lambda_at_critical_kappa",
          bvp3::lambda_constant(M * M * kc * kc / 4.0, 0.5, 1.0 / 3.0, -0.1, 0.5), 1.0, 1e-12);
      const auto p = bvp3::example_problem(kappa);
      const auto h1 = bvp3::check_h1(p, kCheckSamples, c.resolved_seed());
      const auto h2 = bvp3::check_h2(p, kCheckSamples, c.resolved_seed());
      add("Lambda", h1.constants.at("Lambda"),
          (M * std::fabs(kappa) + 0.5) * two_over_pi + 1.0 / 3.0, 1e-12);
      add("growth_value", h2.constants.at("growth_value"),
          (std::fabs(kappa) + 0.5) * two_over_pi + 1.0 / 3.0, 1e-12);
      break;
    }
    case ProblemKind::pendulum: {
      if (c.param("a") != 1.0) fail(ErrorKind::config, "reference table values are for a = 1");
      const auto p = make_pendulum(c);
      const Grid grid(0.0, 1.0, c.resolved_grid_n(), GridStyle::nodes);
      const auto rows = pendulum::stability_table(p, pendulum::table1_candidates(grid));
      const double eps_ref[] = {1.0, 0.5, 0.1011479123607, 0.0103862353036};
      const double psi_ref[] = {2.994600778191, 2.342459305003, 1.354285018462, 0.630389524267};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        add(rows[i].name + "_epsilon", rows[i].epsilon, eps_ref[i], 1e-6);
        add(rows[i].name + "_psi", rows[i].psi, psi_ref[i], 1e-6);
      }
      break;
    }
    case ProblemKind::caputo: {
      const auto p = make_caputo(c);
      const std::size_t n = c.resolved_grid_n();
      const Grid grid(0.0, 1.0, n, GridStyle::nodes);
      const double tol = c.resolved_tol();
      const auto r = caputo::solve(p, grid, tol, c.resolved_max_iter());
      if (!r.converged) {
        not_converged(o, r);
        break;
      }
      double worst = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        worst = std::max(worst, std::fabs(r.solution[j] - caputo_exact(c, p, grid.point(j))));
      }
      double allowed = 10.0 * tol;
      if (c.problem == "caputo-constant") allowed = 1e-8;
      if (c.problem == "caputo-linear") allowed = 5e-4 * std::max(1.0, 1024.0 / double(n));
      add("max_error_vs_exact", worst, 0.0, allowed);
      break;
    }
  }
  o.body["oracle"] = checks;
  o.summary = all ? "all oracle checks pass" : "oracle mismatch";
  if (!all && !o.error) {
    o.status = 4;
    o.error = {ErrorKind::numeric, "computed values disagree with the reference"};
  }
}

}  // namespace

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::config, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrorKind::config, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int run(const RunConfig& config, std::ostream& log) {
  Outcome o;
  json report = {{"schema_version", kSchemaVersion}, {"config", config_to_json(config)}};
  try {
    config.validate();
    const ProblemEntry& entry = find_problem(config.problem);
    report["problem"] = {{"name", entry.name}, {"description", entry.description}};
    switch (config.command) {
      case Command::check:
        run_check(config, entry, o);
        break;
      case Command::solve:
        run_solve(config, entry, o);
        break;
      case Command::stability:
        run_stability(config, entry, o);
        break;
      case Command::oracle:
        run_oracle(config, entry, o);
        break;
    }
  } catch (const Error& e) {
    o.status = exit_code(e.kind());
    o.error = {e.kind(), e.what()};
    o.files.clear();
  } catch (const std::exception& e) {
    o.status = 4;
    o.error = {ErrorKind::numeric, e.what()};
    o.files.clear();
  }

  for (auto& [key, value] : o.body.items()) report[key] = value;
  report["status"] = o.status == 0 ? "ok" : "error";
  report["exit_code"] = o.status;
  if (o.error) {
    report["error"] = {{"kind", std::string(to_string(o.error->first))},
                       {"message", o.error->second}};
  }

  const std::filesystem::path dir = config.resolved_output_dir();
  try {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : o.files) write_atomic(dir / name, content);
    write_atomic(dir / "report.json", report.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "coincidia: cannot write output to " << dir.string() << ": " << e.what() << "\n";
    return o.status == 0 ? 4 : o.status;
  }

  log << to_string(config.command) << " " << config.problem << ": ";
  if (o.error) {
    log << to_string(o.error->first) << " error: " << o.error->second;
  } else {
    log << o.summary;
  }
  log << " (exit " << o.status << ")\n";
  return o.status;
}

}  // namespace coincidia::cli
