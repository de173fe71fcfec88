#include "coincidia/pendulum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "coincidia/error.hpp"

namespace coincidia::pendulum {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxWitnesses = 10;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_unit_nodes(const Grid& grid, const char* what) {
  if (grid.style() != numerics::GridStyle::nodes || grid.a() != 0.0 || grid.b() != 1.0) {
    fail(ErrorKind::config, std::string(what) + " needs a nodes grid over [0, 1]");
  }
}

// 2 (x - sin x) for x = r/2, by series where the direct form cancels.
double phi_small(double r) {
  const double x = 0.5 * r;
  const double x2 = x * x;
  const double series =
      x * x2 *
      (1.0 / 6.0 -
       x2 * (1.0 / 120.0 -
             x2 * (1.0 / 5040.0 - x2 * (1.0 / 362880.0 - x2 * (1.0 / 39916800.0)))));
  return 2.0 * series;
}

GridFunction invert_samples(const PendulumProblem& p, const GridFunction& y, double tol) {
  std::vector<double> out(y.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = invert_A(p, y[j], tol);
  return GridFunction(y.grid(), std::move(out));
}

}  // namespace

PendulumProblem scaled_problem(double a, RealMap f0) {
  if (!(a != 0.0 && std::isfinite(a))) fail(ErrorKind::config, "pendulum constant a must be nonzero");
  if (std::fabs(a) > 1.0) {
    fail(ErrorKind::config, "A(r) = r / a^2 is expansive only for |a| <= 1");
  }
  const double a2 = a * a;
  PendulumProblem p;
  p.A = [a2](double r) { return r / a2; };
  p.A_inverse = [a2](double y) { return a2 * y; };
  p.driving = [a2, f0 = std::move(f0)](double t) { return f0(t) / a2; };
  p.f_lower = [a2](double s) { return a2 * s; };
  return p;
}

PendulumProblem example_A_problem(double k, RealMap driving) {
  if (!(k >= 2.0)) fail(ErrorKind::config, "example A needs k >= 2");
  PendulumProblem p;
  p.A = [k](double x) {
    const double ax = std::fabs(x);
    const double v = ax <= 1.0 ? 2.0 * std::sqrt(ax) : k * ax;
    return std::copysign(v, x);
  };
  p.driving = std::move(driving);
  p.f_lower = [k](double s) { return std::fmin(s * s / 4.0, s / k); };
  return p;
}

HypothesisReport check_A(const PendulumProblem& p, int sample_count, std::uint64_t rng_seed) {
  if (!p.A) fail(ErrorKind::config, "pendulum problem has no A");
  HypothesisReport report;
  report.condition = "A1/A2";

  // A1: no jump across a 1e-3 lattice of [-10, 10] (integers included).
  double worst_jump = 0.0;
  for (int i = -10000; i <= 10000; ++i) {
    const double x = i * 1e-3;
    const double jump = std::fabs(p.A(x + 1e-9) - p.A(x - 1e-9));
    if (jump > worst_jump) worst_jump = jump;
    if (jump > 1e-3 && report.witnesses.size() < kMaxWitnesses) {
      report.add_witness({"A jumps", {x}, jump, 1e-3});
    }
  }
  report.constants["max_local_jump"] = worst_jump;
  report.set_margin("continuity", 1e-3 - worst_jump);

  std::mt19937_64 rng(rng_seed);
  double worst_expansive = INFINITY;
  double worst_lower = INFINITY;
  for (int s = 0; s < sample_count; ++s) {
    const double x = 20.0 * uniform01(rng) - 10.0;
    const double y = 20.0 * uniform01(rng) - 10.0;
    const double dA = std::fabs(p.A(x) - p.A(y));
    const double dx = std::fabs(x - y);
    const double m = dA - dx + 1e-12 * (1.0 + dx);
    worst_expansive = std::fmin(worst_expansive, m);
    if (m < 0.0 && report.witnesses.size() < kMaxWitnesses) {
      report.add_witness({"A is not expansive", {x, y}, dx, dA});
    }
    if (p.f_lower) {
      // The lower comparison is stated for A on the half-line.
      const double xp = std::fabs(x);
      const double yp = std::fabs(y);
      const double dAp = std::fabs(p.A(xp) - p.A(yp));
      const double lower = (*p.f_lower)(dAp);
      const double ml = std::fabs(xp - yp) - lower + 1e-12 * (1.0 + lower);
      worst_lower = std::fmin(worst_lower, ml);
      if (ml < 0.0 && report.witnesses.size() < kMaxWitnesses) {
        report.add_witness({"f(|Ax - Ay|) exceeds |x - y|", {xp, yp}, lower, std::fabs(xp - yp)});
      }
    }
  }
  report.constants["samples"] = sample_count;
  if (sample_count > 0) report.set_margin("expansive", worst_expansive);
  if (sample_count > 0 && p.f_lower) report.set_margin("lower_comparison", worst_lower);
  report.constants["green_modulus"] = 0.125;
  report.notes.emplace_back("continuity and (A2) are spot-checked, not proven");
  return report;
}

double invert_A(const PendulumProblem& p, double y, double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::config, "inversion tolerance must be positive");
  if (p.A_inverse) return (*p.A_inverse)(y);
  double lo = -1.0;
  double hi = 1.0;
  for (int k = 0;; ++k) {
    const bool low_ok = p.A(lo) <= y;
    const bool high_ok = p.A(hi) >= y;
    if (low_ok && high_ok) break;
    if (k == 60) {
      fail(ErrorKind::range, "A does not reach " + std::to_string(y) + " within 60 doublings");
    }
    if (!low_ok) lo *= 2.0;
    if (!high_ok) hi *= 2.0;
  }
  return numerics::bracket_root(p.A, y, lo, hi, tol);
}

GridFunction green_apply(const GridFunction& w) {
  const Grid& grid = w.grid();
  require_unit_nodes(grid, "green_apply");
  const std::size_t n = grid.cells();
  const auto t = grid.points();

  // u(t) = (t - 1) int_0^t s w(s) ds + t int_t^1 (s - 1) w(s) ds
  std::vector<double> left(n + 1), right_rev(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    left[j] = t[j] * w[j];
    right_rev[j] = (t[n - j] - 1.0) * w[n - j];
  }
  const GridFunction L = numerics::cumulative_integral(GridFunction(grid, std::move(left)));
  const GridFunction R = numerics::cumulative_integral(GridFunction(grid, std::move(right_rev)));
  std::vector<double> u(n + 1);
  for (std::size_t j = 0; j <= n; ++j) u[j] = (t[j] - 1.0) * L[j] + t[j] * R[n - j];
  u[0] = 0.0;
  u[n] = 0.0;
  return GridFunction(grid, std::move(u));
}

engine::OperatorHandle make_operator(const PendulumProblem& p, double invert_tol) {
  if (!p.A || !p.driving) fail(ErrorKind::config, "pendulum problem needs A and a driving term");
  engine::OperatorHandle handle;
  handle.norm = engine::NormKind::sup;
  // sup_t int_0^1 |G(t, s)| ds = 1/8, A^{-1} and sin are 1-Lipschitz.
  handle.modulus = 0.125;
  handle.apply = [p, invert_tol](const GridFunction& y) {
    const GridFunction u = green_apply(invert_samples(p, y, invert_tol));
    const Grid& grid = y.grid();
    std::vector<double> out(y.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::sin(u[j]) + p.driving(grid.point(j));
    return GridFunction(grid, std::move(out));
  };
  return handle;
}

engine::SolveReport solve(const PendulumProblem& p, const Grid& grid, double tol, int max_iter,
                          std::optional<GridFunction> y0) {
  require_unit_nodes(grid, "pendulum solve");
  const engine::OperatorHandle h = make_operator(p);
  const GridFunction start = y0 ? *y0 : GridFunction::sample(grid, p.driving);
  if (!(start.grid() == grid)) fail(ErrorKind::config, "initial iterate lives on another grid");
  engine::SolveReport report = engine::solve_picard(h, start, tol, max_iter);
  const GridFunction u_second = invert_samples(p, report.solution, 1e-13);
  report.companions.emplace("u", green_apply(u_second));
  report.companions.emplace("u_second", u_second);
  // The residual is the coincidence defect of the reconstructed u.
  report.stability_radius = engine::error_bound(phi_pendulum(), report.final_residual);
  return report;
}

double epsilon_defect(const PendulumProblem& p, const GridFunction& w,
                      const GridFunction& w_second) {
  if (!(w.grid() == w_second.grid())) {
    fail(ErrorKind::config, "candidate and its second derivative live on different grids");
  }
  const Grid& grid = w.grid();
  double eps = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double d = p.A(w_second[j]) - std::sin(w[j]) - p.driving(grid.point(j));
    eps = std::fmax(eps, std::fabs(d));
  }
  return eps;
}

stability::PhiFunction phi_pendulum() {
  return stability::PhiFunction(
      "pendulum",
      [](double r) {
        if (r > kPi) return r - 2.0;
        if (r < 0.1) return phi_small(r);
        return r - 2.0 * std::sin(0.5 * r);
      },
      true,
      // phi(r) >= r - 2, so phi(eps + 4) > eps.
      [](double eps) { return eps + 4.0; });
}

std::vector<Candidate> table1_candidates(const Grid& grid) {
  constexpr double pi2 = kPi * kPi;
  constexpr double pi4 = pi2 * pi2;
  constexpr double pi6 = pi4 * pi2;
  std::vector<Candidate> out;
  out.push_back({"w1", GridFunction::constant(grid, 0.0), GridFunction::constant(grid, 0.0)});
  out.push_back({"w2", GridFunction::sample(grid, [](double t) { return (t - 1.0) * t / 4.0; }),
                 GridFunction::constant(grid, 0.5)});
  out.push_back({"w3", GridFunction::sample(grid, [](double t) { return -std::sin(kPi * t) / pi2; }),
                 GridFunction::sample(grid, [](double t) { return std::sin(kPi * t); })});
  // w4 = w3 + sin(s), s = sin(pi t)/pi^4:
  // w4'' = sin(pi t) - cos(s) sin(pi t)/pi^2 - sin(s) cos(pi t)^2/pi^6
  out.push_back(
      {"w4",
       GridFunction::sample(grid,
                            [](double t) {
                              const double st = std::sin(kPi * t);
                              return -st / pi2 + std::sin(st / pi4);
                            }),
       GridFunction::sample(grid, [](double t) {
         const double st = std::sin(kPi * t);
         const double ct = std::cos(kPi * t);
         const double s = st / pi4;
         return st - std::cos(s) * st / pi2 - std::sin(s) * ct * ct / pi6;
       })});
  return out;
}

std::vector<StabilityRow> stability_table(const PendulumProblem& p,
                                          const std::vector<Candidate>& candidates,
                                          const std::optional<GridFunction>& u_star) {
  const stability::PhiFunction phi = phi_pendulum();
  std::vector<StabilityRow> rows;
  rows.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    StabilityRow row{c.name, epsilon_defect(p, c.w, c.w_second), 0.0, std::nullopt};
    row.psi = engine::error_bound(phi, row.epsilon);
    if (u_star) row.sup_distance_to_solution = numerics::sup_distance(c.w, *u_star);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace coincidia::pendulum
