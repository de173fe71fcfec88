#include "coincidia/caputo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "coincidia/error.hpp"
#include "coincidia/kernels.hpp"

namespace coincidia::caputo {
namespace {

// (k+1)^(q+1) - 2 k^(q+1) + (k-1)^(q+1), a second difference that cancels
// badly for large k when written out.
double interior_coefficient(double k, double q) {
  const double p = q + 1.0;
  const double up = std::expm1(p * std::log1p(1.0 / k));
  const double down = std::expm1(p * std::log1p(-1.0 / k));
  return std::pow(k, p) * (up + down);
}

// (j-1)^(q+1) - (j-1-q) j^q = j^(q+1) [(1 - 1/j)^(q+1) - 1 + (q+1)/j].
double first_coefficient(double j, double q) {
  const double p = q + 1.0;
  if (j == 1.0) return q;
  return std::pow(j, p) * (std::expm1(p * std::log1p(-1.0 / j)) + p / j);
}

void require_origin_nodes(const Grid& grid) {
  if (grid.style() != numerics::GridStyle::nodes || grid.a() != 0.0) {
    fail(ErrorKind::config, "Caputo solves need a nodes grid starting at 0");
  }
}

}  // namespace

void CaputoProblem::validate() const {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::domain, "Caputo order q must lie in (0, 1)");
  if (!f) fail(ErrorKind::config, "Caputo problem has no right-hand side");
  if (!(L_f > 0.0 && std::isfinite(L_f))) fail(ErrorKind::config, "L_f must be positive");
  if (!std::isfinite(x0)) fail(ErrorKind::config, "x0 must be finite");
  if (!(horizon > 0.0 && std::isfinite(horizon))) fail(ErrorKind::config, "horizon must be positive");
  for (std::size_t i = 0; i < nonlocal.size(); ++i) {
    const NonlocalTerm& term = nonlocal[i];
    if (!term.g) fail(ErrorKind::config, "nonlocal term without a map");
    if (!(term.t > 0.0)) fail(ErrorKind::config, "nonlocal points must be positive");
    if (term.t > horizon) fail(ErrorKind::config, "nonlocal point beyond the horizon");
    if (!(term.c >= 0.0)) fail(ErrorKind::config, "nonlocal Lipschitz constants must be >= 0");
    if (i > 0 && !(term.t > nonlocal[i - 1].t)) {
      fail(ErrorKind::config, "nonlocal points must be strictly increasing");
    }
  }
}

double CaputoProblem::L_g() const {
  double s = 0.0;
  for (const NonlocalTerm& term : nonlocal) s += term.c;
  return s;
}

double CaputoProblem::t_N() const { return nonlocal.empty() ? 0.0 : nonlocal.back().t; }

KernelWeights kernel_weights(const Grid& grid, double q) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::domain, "Caputo order q must lie in (0, 1)");
  require_origin_nodes(grid);
  const std::size_t n = grid.cells();
  const double scale = std::pow(grid.spacing(), q) / (q * (q + 1.0));

  // Interior coefficients depend on j - i only.
  std::vector<double> interior(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) interior[k] = scale * interior_coefficient(double(k), q);

  KernelWeights rows(n + 1);
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<double>& row = rows[j];
    row.resize(j + 1);
    row[0] = scale * first_coefficient(double(j), q);
    for (std::size_t i = 1; i < j; ++i) row[i] = interior[j - i];
    row[j] = scale;
  }
  return rows;
}

std::vector<std::size_t> snapped_nodes(const CaputoProblem& p, const Grid& grid) {
  require_origin_nodes(grid);
  std::vector<std::size_t> out;
  out.reserve(p.nonlocal.size());
  for (const NonlocalTerm& term : p.nonlocal) {
    if (term.t > grid.b()) fail(ErrorKind::config, "nonlocal point beyond the grid");
    const double idx = std::round(term.t / grid.spacing());
    out.push_back(std::min(static_cast<std::size_t>(idx), grid.cells()));
  }
  return out;
}

GridFunction picard_step(const CaputoProblem& p, const GridFunction& x, const KernelWeights& w) {
  const Grid& grid = x.grid();
  require_origin_nodes(grid);
  if (w.size() != grid.size()) fail(ErrorKind::config, "kernel weights do not match the grid");

  double base = p.x0;
  const auto nodes = snapped_nodes(p, grid);
  for (std::size_t i = 0; i < nodes.size(); ++i) base += p.nonlocal[i].g(x[nodes[i]]);

  std::vector<double> fx(grid.size());
  for (std::size_t j = 0; j < fx.size(); ++j) {
    const double t = grid.point(j);
    fx[j] = p.f(t, x[j]);
    if (!std::isfinite(fx[j])) {
      fail(ErrorKind::numeric, "f is not finite at t = " + std::to_string(t));
    }
  }
  if (!std::isfinite(base)) fail(ErrorKind::numeric, "nonlocal term is not finite");

  const double inv_gamma = 1.0 / numerics::gamma(p.q);
  const std::span<const double> all(fx);
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double conv = j == 0 ? 0.0 : kernels::dot(w[j], all.first(j + 1));
    out[j] = base + inv_gamma * conv;
  }
  return GridFunction(grid, std::move(out));
}

HypothesisReport contraction_certificate(const CaputoProblem& p, double lambda_max) {
  p.validate();
  if (!(lambda_max > 0.0)) fail(ErrorKind::config, "lambda_max must be positive");
  HypothesisReport report;
  report.condition = "caputo_contraction";

  const double q = p.q;
  const double gq = numerics::gamma(q);
  const double tN = p.t_N();
  const double Lg = p.L_g();
  const double head = tN > 0.0 ? std::pow(tN, q) / q : 0.0;
  const double limit = p.L_f / gq * head + Lg;
  report.constants["q"] = q;
  report.constants["L_f"] = p.L_f;
  report.constants["L_g"] = Lg;
  report.constants["t_N"] = tN;
  report.constants["limit_value"] = limit;
  report.set_margin("limit_condition", 1.0 - limit);
  if (!(limit < 1.0)) {
    report.add_witness({"limit condition fails", {tN, Lg}, limit, 1.0});
    return report;
  }

  // For t_N = 0 the lower bound q / (L_f t_N) on lambda is vacuous.
  double lambda = tN > 0.0 ? std::max(1.0, 2.0 * q / (p.L_f * tN)) : 1.0;
  auto rho_of = [&](double lam) {
    return p.L_f / gq * (head + gq / std::pow(lam * p.L_f, q)) + Lg;
  };
  double rho = rho_of(lambda);
  while (!(rho < 1.0) && lambda * 2.0 <= lambda_max) {
    lambda *= 2.0;
    rho = rho_of(lambda);
  }
  report.constants["lambda"] = lambda;
  report.constants["rho"] = rho;
  report.set_margin("rho", 1.0 - rho);
  if (!(rho < 1.0)) {
    report.add_witness({"no lambda up to lambda_max gives rho < 1", {lambda}, rho, 1.0});
  }
  return report;
}

double weighted_sup_norm(const GridFunction& x, double lambda, double L_f, double t_N) {
  const Grid& grid = x.grid();
  double out = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = std::max(grid.point(j), t_N);
    out = std::max(out, std::fabs(x[j]) * std::exp(-lambda * L_f * t));
  }
  return out;
}

engine::SolveReport solve(const CaputoProblem& p, const Grid& grid, double tol, int max_iter,
                          const SolveOptions& options) {
  p.validate();
  require_origin_nodes(grid);
  if (grid.b() != p.horizon) fail(ErrorKind::config, "grid must span [0, horizon]");

  const HypothesisReport cert = contraction_certificate(p, options.lambda_max);
  if (!cert.pass && !options.override_certificate) {
    fail(ErrorKind::certificate,
         "contraction certificate fails: limit value " +
             std::to_string(cert.constants.at("limit_value")));
  }

  const auto weights = std::make_shared<const KernelWeights>(kernel_weights(grid, p.q));
  engine::OperatorHandle h;
  h.norm = engine::NormKind::sup;
  h.apply = [p, weights](const GridFunction& x) { return picard_step(p, x, *weights); };

  const GridFunction start = options.initial ? *options.initial : GridFunction::constant(grid, p.x0);
  if (!(start.grid() == grid)) fail(ErrorKind::config, "initial iterate lives on another grid");
  engine::SolveReport report = engine::solve_picard(h, start, tol, max_iter);

  for (const auto& [name, value] : cert.constants) report.certificates[name] = value;
  const auto nodes = snapped_nodes(p, grid);
  double snap = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    snap = std::max(snap, std::fabs(grid.point(nodes[i]) - p.nonlocal[i].t));
  }
  report.certificates["snap_distance"] = snap;

  if (cert.pass) {
    // The map contracts by rho in the weighted norm, so the returned iterate
    // sits within |y - h(y)|_w / (1 - rho) of the discrete fixed point.
    const double lambda = cert.constants.at("lambda");
    const double rho = cert.constants.at("rho");
    const GridFunction next = h.apply(report.solution);
    std::vector<double> diff(next.size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = next[j] - report.solution[j];
    const double step_w = weighted_sup_norm(GridFunction(grid, std::move(diff)), lambda, p.L_f, p.t_N());
    report.certificates["step_weighted"] = step_w;
    report.certificates["error_bound_weighted"] = step_w / (1.0 - rho);
  } else {
    report.notes.emplace_back("certificate overridden; no contraction claimed");
  }
  report.notes.emplace_back("uniqueness is supported by two-start agreement, not proven");
  return report;
}

}  // namespace coincidia::caputo
