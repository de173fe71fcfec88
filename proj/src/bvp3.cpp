#include "coincidia/bvp3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "coincidia/error.hpp"

namespace coincidia::bvp3 {
namespace {

constexpr int kZSimpsonPanels = 512;   // even
constexpr std::size_t kProbeCells = 64;
constexpr std::size_t kMaxWitnesses = 10;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_unit_midpoints(const Grid& grid, const char* what) {
  if (grid.style() != numerics::GridStyle::midpoints || grid.a() != 0.0 || grid.b() != 1.0) {
    fail(ErrorKind::config, std::string(what) + " needs a midpoints grid over [0, 1]");
  }
}

// int_t^1 h(s) ds with s = t^(1-u), ds = -s ln(t) du.
double tail_integral(const Coefficient& h, double t) {
  const double log_t = std::log(t);
  if (log_t == 0.0) return 0.0;
  const double du = 1.0 / kZSimpsonPanels;
  double acc = 0.0;
  for (int k = 0; k <= kZSimpsonPanels; ++k) {
    const double u = k * du;
    const double s = (k == kZSimpsonPanels) ? 1.0 : std::exp((1.0 - u) * log_t);
    const double hs = h(s);
    if (!std::isfinite(hs)) {
      fail(ErrorKind::numeric, "coefficient is not finite at s = " + std::to_string(s));
    }
    const double c = (k == 0 || k == kZSimpsonPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += c * hs * s;
  }
  return -log_t * acc * du / 3.0;
}

double stable_half_log_one_plus_two_exp(double z) {
  // log sqrt(1 + 2 e^z) without overflow for large z.
  if (z > 0.0) return 0.5 * (z + std::log(std::exp(-z) + 2.0));
  return 0.5 * std::log1p(2.0 * std::exp(z));
}

Grid probe_grid() { return Grid(0.0, 1.0, kProbeCells, numerics::GridStyle::midpoints); }

}  // namespace

void Bvp3Problem::validate() const {
  if (!std::isfinite(delta) || delta == 1.0) fail(ErrorKind::config, "delta must be finite and != 1");
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorKind::config, "eta must lie in (0, 1)");
  if (!g) fail(ErrorKind::config, "missing nonlinearity g");
  if (h1 && (!(h1->K2 >= 0.0) || !(h1->K3 >= 0.0) || !(h1->ell >= 0.0) || !h1->k1)) {
    fail(ErrorKind::config, "Lipschitz data needs k1 and K2, K3, ell >= 0");
  }
  if (h2 && (!(h2->A2 >= 0.0) || !(h2->A3 >= 0.0) || !(h2->m >= 0.0) || !h2->a1 || !h2->a4)) {
    fail(ErrorKind::config, "growth data needs a1, a4 and A2, A3, m >= 0");
  }
}

Bvp3Problem example_problem(double kappa) {
  // sup |d/dx 2x^2/(1+x^2)| = 3 sqrt(3) / 4
  const double M = 3.0 * std::sqrt(3.0) / 4.0;
  const double ak = std::fabs(kappa);
  Bvp3Problem p;
  p.delta = -0.1;
  p.eta = 0.5;
  p.g = [kappa](double t, double u1, double u2, double u3) {
    const double sq = u1 * u1;
    return kappa * sq / (t * (1.0 + sq)) + std::log(t) + stable_half_log_one_plus_two_exp(u2) +
           u3 / (u3 * u3 + 3.0);
  };
  p.h1 = LipschitzData{[M, ak](double t) { return M * ak / (2.0 * t); }, 0.5, 1.0 / 3.0,
                       M * M * kappa * kappa / 4.0};
  const double a4_shift = 0.5 * std::log(3.0);
  p.h2 = GrowthData{[ak](double t) { return ak / (2.0 * t); }, 0.5, 1.0 / 3.0,
                    [a4_shift](double t) { return std::fabs(std::log(t) + a4_shift); },
                    kappa * kappa / 4.0};
  return p;
}

double f_constant(double delta, double eta) {
  if (delta == 1.0) fail(ErrorKind::domain, "F(delta, eta) is undefined at delta = 1");
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorKind::domain, "eta must lie in (0, 1)");
  const double d2 = delta * delta;
  const double num = d2 * (1.0 - eta) * (1.0 - eta) + (d2 - 2.0 * delta) * eta * eta + 1.0;
  return num / (2.0 * (delta - 1.0) * (delta - 1.0));
}

double c_constant(double delta, double eta) {
  const double root = std::sqrt(f_constant(delta, eta));
  return delta > 0.0 ? root : std::min(root, 2.0 / std::numbers::pi);
}

double lambda_constant(double ell, double Q, double R, double delta, double eta) {
  if (!(ell >= 0.0 && Q >= 0.0 && R >= 0.0)) {
    fail(ErrorKind::domain, "Lambda needs ell, Q, R >= 0");
  }
  return (2.0 * std::sqrt(ell) + Q) * c_constant(delta, eta) + R;
}

HypothesisReport check_z_membership(const Coefficient& h, double ell, const Grid& grid) {
  if (grid.style() != numerics::GridStyle::midpoints || grid.a() < 0.0 || grid.b() > 1.0) {
    fail(ErrorKind::config, "Z-membership probes need a midpoints grid inside [0, 1]");
  }
  if (!(ell >= 0.0)) fail(ErrorKind::config, "ell must be nonnegative");
  HypothesisReport report;
  report.condition = "Z(ell) membership";
  report.constants["ell"] = ell;
  double worst = INFINITY;
  double worst_t = 0.0;
  for (double t : grid.points()) {
    const double tail = tail_integral(h, t);
    const double bound = ell / t;
    const double margin = bound + 1e-9 - tail;
    if (margin < worst) {
      worst = margin;
      worst_t = t;
    }
    if (margin < 0.0 && report.witnesses.size() < kMaxWitnesses) {
      report.add_witness({"tail integral exceeds ell/t", {t}, tail, bound});
    }
  }
  report.constants["worst_probe_t"] = worst_t;
  report.set_margin("z_membership", worst);
  return report;
}

HypothesisReport check_h1(const Bvp3Problem& p, int sample_count, std::uint64_t rng_seed) {
  if (!p.h1) fail(ErrorKind::config, "problem carries no Lipschitz data");
  p.validate();
  const LipschitzData& d = *p.h1;
  HypothesisReport report;
  report.condition = "H1";
  const double C = c_constant(p.delta, p.eta);
  const double Lambda = lambda_constant(d.ell, d.K2, d.K3, p.delta, p.eta);
  report.constants["F"] = f_constant(p.delta, p.eta);
  report.constants["C"] = C;
  report.constants["Lambda"] = Lambda;
  report.constants["ell"] = d.ell;
  report.constants["K2"] = d.K2;
  report.constants["K3"] = d.K3;

  const Coefficient k1_sq = [&d](double t) {
    const double k = d.k1(t);
    return k * k;
  };
  report.absorb(check_z_membership(k1_sq, d.ell, probe_grid()), "k1_sq.");
  report.set_margin("lambda_condition", 1.0 + 1e-12 - Lambda);

  std::mt19937_64 rng(rng_seed);
  int violations = 0;
  for (int s = 0; s < sample_count; ++s) {
    const double t = 1.0 - uniform01(rng);
    double u[3], v[3];
    for (int i = 0; i < 3; ++i) {
      u[i] = 20.0 * uniform01(rng) - 10.0;
      v[i] = 20.0 * uniform01(rng) - 10.0;
    }
    const double lhs = std::fabs(p.g(t, u[0], u[1], u[2]) - p.g(t, v[0], v[1], v[2]));
    const double rhs = std::fabs(d.k1(t)) * std::fabs(u[0] - v[0]) +
                       d.K2 * std::fabs(u[1] - v[1]) + d.K3 * std::fabs(u[2] - v[2]);
    if (lhs > rhs + 1e-12 * (1.0 + rhs)) {
      ++violations;
      if (report.witnesses.size() < kMaxWitnesses) {
        report.add_witness({"Lipschitz bound violated", {t, u[0], u[1], u[2], v[0], v[1], v[2]},
                            lhs, rhs});
      }
    }
  }
  report.constants["samples"] = sample_count;
  report.constants["violations"] = violations;
  if (violations > 0) report.pass = false;
  report.notes.emplace_back("Lipschitz inequality is sampled, not proven");
  return report;
}

HypothesisReport check_h2(const Bvp3Problem& p, int sample_count, std::uint64_t rng_seed) {
  if (!p.h2) fail(ErrorKind::config, "problem carries no growth data");
  p.validate();
  const GrowthData& d = *p.h2;
  HypothesisReport report;
  report.condition = "H2";
  const double C = c_constant(p.delta, p.eta);
  const double value = lambda_constant(d.m, d.A2, d.A3, p.delta, p.eta);
  report.constants["C"] = C;
  report.constants["growth_value"] = value;
  report.constants["m"] = d.m;
  report.constants["A2"] = d.A2;
  report.constants["A3"] = d.A3;

  const Coefficient a1_sq = [&d](double t) {
    const double a = d.a1(t);
    return a * a;
  };
  report.absorb(check_z_membership(a1_sq, d.m, probe_grid()), "a1_sq.");
  report.set_margin("growth_condition", 1.0 - 1e-12 - value);

  const Grid fine(0.0, 1.0, 4096, numerics::GridStyle::midpoints);
  report.constants["a4_l2"] = numerics::l2_norm(GridFunction::sample(fine, d.a4));

  std::mt19937_64 rng(rng_seed);
  int violations = 0;
  for (int s = 0; s < sample_count; ++s) {
    const double t = 1.0 - uniform01(rng);
    double u[3];
    for (double& x : u) x = 20.0 * uniform01(rng) - 10.0;
    const double lhs = std::fabs(p.g(t, u[0], u[1], u[2]));
    const double rhs = std::fabs(d.a1(t)) * std::fabs(u[0]) + d.A2 * std::fabs(u[1]) +
                       d.A3 * std::fabs(u[2]) + d.a4(t);
    if (lhs > rhs + 1e-12 * (1.0 + rhs)) {
      ++violations;
      if (report.witnesses.size() < kMaxWitnesses) {
        report.add_witness({"growth bound violated", {t, u[0], u[1], u[2]}, lhs, rhs});
      }
    }
  }
  report.constants["samples"] = sample_count;
  report.constants["violations"] = violations;
  if (violations > 0) report.pass = false;
  report.notes.emplace_back("growth bound is sampled, not proven");
  return report;
}

Reconstruction apply_T_inverse(const GridFunction& y, double delta, double eta) {
  const Grid& grid = y.grid();
  require_unit_midpoints(grid, "apply_T_inverse");
  if (delta == 1.0) fail(ErrorKind::domain, "T^{-1} is undefined at delta = 1");
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorKind::domain, "eta must lie in (0, 1)");

  const std::size_t n = grid.cells();
  const double h = grid.spacing();
  const auto vals = y.values();
  const auto k = static_cast<std::size_t>(
      std::clamp<long>(std::lround(eta / h), 1L, static_cast<long>(n) - 1));
  const double eta_snapped = static_cast<double>(k) * h;

  double int_eta = 0.0;
  for (std::size_t i = 0; i < k; ++i) int_eta += vals[i];
  int_eta *= h;
  double int_one = 0.0;
  for (double v : vals) int_one += v;
  int_one *= h;
  const double c = (delta * int_eta - int_one) / (1.0 - delta);

  std::vector<double> v(n), vp(n);
  const GridFunction F = numerics::cumulative_integral(y);
  double s0 = 0.0;  // sum_{i<j} y_i
  double s1 = 0.0;  // sum_{i<j} y_i t_i
  for (std::size_t j = 0; j < n; ++j) {
    const double t = grid.point(j);
    vp[j] = F[j] + c;
    v[j] = h * (t * s0 - s1) + vals[j] * h * h / 8.0 + c * t;
    s0 += vals[j];
    s1 += vals[j] * t;
  }
  return Reconstruction{GridFunction(grid, std::move(v)), GridFunction(grid, std::move(vp)), c,
                        eta_snapped, std::fabs(eta - eta_snapped)};
}

namespace {
// Cells fully to the left of t and the offset of t inside its own cell.
std::pair<std::size_t, double> locate(const Grid& grid, double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorKind::domain, "reconstruction is defined on [0, 1]");
  const double h = grid.spacing();
  const auto m = std::min(static_cast<std::size_t>(t / h), grid.cells());
  return {m, t - static_cast<double>(m) * h};
}
}  // namespace

double reconstruct_value(const GridFunction& y, const Reconstruction& r, double t) {
  const Grid& grid = y.grid();
  const auto [m, off] = locate(grid, t);
  const double h = grid.spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) acc += y[i] * h * (t - grid.point(i));
  if (m < grid.cells()) acc += y[m] * off * off / 2.0;
  return acc + r.slope_at_zero * t;
}

double reconstruct_slope(const GridFunction& y, const Reconstruction& r, double t) {
  const Grid& grid = y.grid();
  const auto [m, off] = locate(grid, t);
  const double h = grid.spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) acc += y[i];
  acc *= h;
  if (m < grid.cells()) acc += y[m] * off;
  return acc + r.slope_at_zero;
}

engine::OperatorHandle make_operator(const Bvp3Problem& p, std::optional<double> modulus) {
  p.validate();
  engine::OperatorHandle handle;
  handle.norm = engine::NormKind::l2;
  handle.modulus = modulus;
  handle.apply = [p](const GridFunction& y) {
    const Reconstruction rec = apply_T_inverse(y, p.delta, p.eta);
    const Grid& grid = y.grid();
    std::vector<double> out(y.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double t = grid.point(j);
      out[j] = p.g(t, rec.v[j], rec.v_prime[j], y[j]);
      if (!std::isfinite(out[j])) {
        fail(ErrorKind::numeric, "g is not finite at node " + std::to_string(j) +
                                     " (t = " + std::to_string(t) + ")");
      }
    }
    return GridFunction(grid, std::move(out));
  };
  return handle;
}

engine::SolveReport solve(const Bvp3Problem& p, const Grid& grid, SchemeChoice scheme, double tol,
                          int max_iter) {
  p.validate();
  require_unit_midpoints(grid, "bvp3 solve");

  std::optional<double> certified;
  std::optional<HypothesisReport> h1_report;
  if (p.h1) {
    h1_report = check_h1(p, 256, 0);
    const double Lambda = h1_report->constants.at("Lambda");
    if (h1_report->pass && Lambda < 1.0) certified = Lambda;
  }

  const GridFunction y0 = GridFunction::constant(grid, 0.0);
  engine::SolveReport report = [&] {
    switch (scheme) {
      case SchemeChoice::resolvent:
        return engine::solve_resolvent(make_operator(p, certified), y0, engine::default_schedule(),
                                       tol, tol);
      case SchemeChoice::averaged:
        return engine::solve_averaged(make_operator(p), y0, tol, max_iter);
      case SchemeChoice::automatic:
      case SchemeChoice::picard:
        break;
    }
    if (certified) return engine::solve_picard(make_operator(p, certified), y0, tol, max_iter);
    auto r = engine::solve_averaged(make_operator(p), y0, tol, max_iter);
    r.notes.emplace_back("picard refused: Lambda < 1 is not certified");
    return r;
  }();

  const Reconstruction rec = apply_T_inverse(report.solution, p.delta, p.eta);
  report.companions.emplace("u", rec.v);
  report.companions.emplace("u_prime", rec.v_prime);
  report.certificates["eta_snap_distance"] = rec.snap_distance;
  report.certificates["solution_l2_norm"] = numerics::l2_norm(report.solution);
  if (h1_report) report.certificates["Lambda"] = h1_report->constants.at("Lambda");
  if (p.h2) {
    report.certificates["growth_value"] =
        lambda_constant(p.h2->m, p.h2->A2, p.h2->A3, p.delta, p.eta);
  }
  return report;
}

double ode_defect(const Bvp3Problem& p, const GridFunction& y) {
  return engine::residual(make_operator(p), y);
}

InequalityMargins inequality_margins(const GridFunction& x, const GridFunction& x_prime,
                                     const GridFunction& x_second, const Coefficient& p,
                                     double ell, double Q, double R, double delta, double eta) {
  const Grid& grid = x.grid();
  if (!(x_prime.grid() == grid) || !(x_second.grid() == grid)) {
    fail(ErrorKind::config, "inequality operands live on different grids");
  }
  const double C = c_constant(delta, eta);
  const double Lambda = lambda_constant(ell, Q, R, delta, eta);
  const double d2 = numerics::l2_norm(x_second);
  const double d1 = numerics::l2_norm(x_prime);

  std::vector<double> cross(x.size()), pair(x.size()), triple(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double pt = p(grid.point(j));
    const double a = pt * std::fabs(x[j]);
    const double b = Q * std::fabs(x_prime[j]);
    const double c = R * std::fabs(x_second[j]);
    cross[j] = pt * std::fabs(x[j]) * std::fabs(x_prime[j]);
    pair[j] = (a + b) * (a + b);
    triple[j] = (a + b + c) * (a + b + c);
  }
  const double root_ell = std::sqrt(ell);
  InequalityMargins m;
  m.derivative_bound = C * d2 - d1;
  m.first = 2.0 * root_ell * C * C * d2 * d2 - numerics::integrate(GridFunction(grid, cross));
  m.second = (2.0 * root_ell + Q) * (2.0 * root_ell + Q) * C * C * d2 * d2 -
             numerics::integrate(GridFunction(grid, pair));
  m.third = Lambda * Lambda * d2 * d2 - numerics::integrate(GridFunction(grid, triple));
  return m;
}

}  // namespace coincidia::bvp3
