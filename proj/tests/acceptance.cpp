// One line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "coincidia/bvp3.hpp"
#include "coincidia/caputo.hpp"
#include "coincidia/engine.hpp"
#include "coincidia/error.hpp"
#include "coincidia/pendulum.hpp"

using namespace coincidia;
using numerics::Grid;
using numerics::GridFunction;
using numerics::GridStyle;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Wraps a criterion so a thrown error reports as a failure instead of aborting.
void criterion(int id, const std::string& what, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, what, ok, detail);
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::fabs(a[j] - b[j]));
  return s;
}

pendulum::PendulumProblem pa() {
  return pendulum::scaled_problem(1.0, [](double t) { return std::sin(kPi * t); });
}

struct Poly {
  std::vector<double> c;
  double operator()(double t) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
  }
  Poly derivative() const {
    Poly d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(static_cast<double>(i) * c[i]);
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }
};

Poly random_poly(std::mt19937_64& rng, bool vanish_at_zero) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 6);
  Poly p;
  p.c.resize(static_cast<std::size_t>(deg(rng)) + 1);
  for (double& x : p.c) x = u(rng);
  if (vanish_at_zero) p.c[0] = 0.0;
  return p;
}

}  // namespace

int main() {
  criterion(1, "stability table reproduction", [](std::string& d) {
    const auto start = std::chrono::steady_clock::now();
    const double eps[] = {1.0, 0.5, 0.1011479123607, 0.0103862353036};
    const double psi[] = {2.994600778191, 2.342459305003, 1.354285018462, 0.630389524267};
    const auto rows = pendulum::stability_table(pa(), pendulum::table1_candidates(Grid(0, 1, 1000, GridStyle::nodes)));
    double de = 0.0, dp = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      de = std::max(de, std::fabs(rows[i].epsilon - eps[i]));
      dp = std::max(dp, std::fabs(rows[i].psi - psi[i]));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    d = "max |d eps| " + num(de) + ", max |d psi| " + num(dp) + ", " + num(secs) + " s";
    return rows.size() == 4 && de <= 1e-6 && dp <= 1e-6 && secs < 10.0;
  });

  criterion(2, "constant reproduction", [](std::string& d) {
    const double c = bvp3::c_constant(-0.1, 0.5);
    const double kc = (4 * kPi - 6) / (9 * std::sqrt(3.0));
    const double M = 3 * std::sqrt(3.0) / 4;
    const double lam = bvp3::lambda_constant(M * M * kc * kc / 4, 0.5, 1.0 / 3.0, -0.1, 0.5);
    d = "C - 2/pi = " + num(c - 2 / kPi) + ", Lambda(kappa_c) - 1 = " + num(lam - 1);
    return std::fabs(c - 2 / kPi) <= 1e-12 && std::fabs(lam - 1) <= 1e-12;
  });

  criterion(3, "pendulum solve", [](std::string& d) {
    const auto p = pa();
    const auto fine = pendulum::solve(p, Grid(0, 1, 1000, GridStyle::nodes), 1e-10, 200);
    const auto coarse = pendulum::solve(p, Grid(0, 1, 500, GridStyle::nodes), 1e-10, 200);
    double cross = 0.0;
    for (std::size_t j = 0; j <= 500; ++j) {
      cross = std::max(cross, std::fabs(coarse.companions.at("u")[j] - fine.companions.at("u")[2 * j]));
    }
    const auto rows = pendulum::stability_table(p, pendulum::table1_candidates(fine.solution.grid()),
                                                fine.companions.at("u"));
    bool localized = true;
    for (const auto& r : rows) localized = localized && *r.sup_distance_to_solution < r.psi;
    d = std::to_string(fine.iterations) + " iterations, cross-grid " + num(cross) + ", localization " +
        (localized ? "holds" : "fails");
    return fine.converged && fine.iterations <= 30 && cross <= 1e-5 && localized;
  });

  criterion(4, "Caputo oracles", [](std::string& d) {
    caputo::CaputoProblem cst;
    cst.q = 0.5;
    cst.f = [](double, double) { return 1.0; };
    const Grid g(0, 1, 1024, GridStyle::nodes);
    const auto rc = caputo::solve(cst, g, 1e-12, 100);
    double ec = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      ec = std::max(ec, std::fabs(rc.solution[j] - 2 * std::sqrt(g.point(j) / kPi)));
    }
    caputo::CaputoProblem lin;
    lin.q = 0.5;
    lin.f = [](double, double x) { return x; };
    lin.x0 = 1.0;
    double errs[4];
    const std::size_t ns[] = {128, 256, 512, 1024};
    for (int k = 0; k < 4; ++k) {
      const Grid gk(0, 1, ns[k], GridStyle::nodes);
      const auto r = caputo::solve(lin, gk, 1e-13, 500);
      errs[k] = 0.0;
      for (std::size_t j = 0; j < gk.size(); ++j) {
        const double ml = numerics::mittag_leffler(0.5, std::sqrt(gk.point(j)), 1e-15);
        errs[k] = std::max(errs[k], std::fabs(r.solution[j] - ml));
      }
    }
    double worst_ratio = INFINITY;
    for (int k = 0; k < 3; ++k) worst_ratio = std::min(worst_ratio, errs[k] / errs[k + 1]);
    d = "constant " + num(ec) + ", linear@1024 " + num(errs[3]) + ", min refinement factor " +
        num(worst_ratio);
    return ec <= 1e-8 && errs[3] <= 5e-4 && worst_ratio >= 2.0;
  });

  criterion(5, "certificate logic", [](std::string& d) {
    caputo::CaputoProblem p;
    p.q = 0.5;
    p.f = [](double, double) { return 0.0; };
    p.L_f = 0.2;
    p.nonlocal.push_back({1.0, [](double x) { return 0.1 * x; }, 0.1});
    const auto a = caputo::contraction_certificate(p);
    p.L_f = 1.0;
    const auto b = caputo::contraction_certificate(p);
    const double la = a.constants.at("limit_value"), lb = b.constants.at("limit_value");
    d = "limits " + num(la) + " (pass=" + std::to_string(a.pass) + "), " + num(lb) +
        " (pass=" + std::to_string(b.pass) + ")";
    return a.pass && !b.pass && std::fabs(la - 0.3257) <= 1e-3 && std::fabs(lb - 1.2284) <= 1e-3;
  });

  criterion(6, "inequality property suites", [](std::string& d) {
    int violations = 0, checks = 0;
    const Grid mid(0, 1, 2000, GridStyle::midpoints);
    const auto inv_t = [](double t) { return 1.0 / t; };
    for (std::uint64_t seed = 0; seed <= 9; ++seed) {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < 100; ++i) {
        const Poly x = random_poly(rng, true);
        const Poly dx = x.derivative();
        const auto xs = GridFunction::sample(mid, x);
        const auto dxs = GridFunction::sample(mid, dx);
        ++checks;
        if (numerics::l2_norm(xs) > 2 / kPi * numerics::l2_norm(dxs) + 1e-6) ++violations;
        const auto hx = GridFunction::sample(mid, [&](double t) { return x(t) * x(t) / (t * t); });
        const auto dx2 = GridFunction::sample(mid, [&](double t) { return dx(t) * dx(t); });
        ++checks;
        if (numerics::integrate(hx) > 4 * numerics::integrate(dx2) + 1e-6) ++violations;

        const auto y = GridFunction::sample(mid, random_poly(rng, false));
        for (auto [delta, eta] : {std::pair{-0.1, 0.5}, {2.0, 0.5}, {0.0, 0.3}}) {
          const auto r = bvp3::apply_T_inverse(y, delta, eta);
          const auto m = bvp3::inequality_margins(r.v, r.v_prime, y, inv_t, 1.0, 0.5, 0.3, delta, eta);
          for (double margin : {m.derivative_bound, m.first, m.second, m.third}) {
            ++checks;
            if (margin < -1e-6) ++violations;
          }
        }
      }
    }
    d = std::to_string(violations) + " violations in " + std::to_string(checks) + " checks";
    return violations == 0;
  });

  criterion(7, "engine invariants", [](std::string& d) {
    const auto p = bvp3::example_problem(0.4);
    const auto h = bvp3::make_operator(p);
    const Grid g(0, 1, 256, GridStyle::midpoints);
    const auto y0 = GridFunction::constant(g, 0.0);
    const double inner = 1e-10;
    double worst = 0.0;
    int stages = 0;
    engine::solve_resolvent(h, y0, {1, 2, 4, 8, 16, 32, 64, 128}, inner, 1e-300,
                            [&](int n, const GridFunction& yn, const GridFunction& hyn) {
                              std::vector<double> v(yn.size());
                              for (std::size_t j = 0; j < v.size(); ++j) {
                                v[j] = (yn[j] - hyn[j]) - (y0[j] - yn[j]) / n;
                              }
                              worst = std::max(worst, engine::norm(h.norm, GridFunction(g, v)) / inner);
                              ++stages;
                            });
    const auto ph = pendulum::make_operator(pa());
    const Grid gn(0, 1, 1000, GridStyle::nodes);
    const auto r = engine::solve_picard(ph, GridFunction::sample(gn, pa().driving), 1e-12, 50);
    double worst_rate = 0.0;
    for (std::size_t i = 0; i + 1 < r.residual_history.size(); ++i) {
      if (r.residual_history[i] > 0) {
        worst_rate = std::max(worst_rate, r.residual_history[i + 1] / r.residual_history[i]);
      }
    }
    d = "resolvent identity / inner_tol max " + num(worst) + " over " + std::to_string(stages) +
        " stages, Picard worst step ratio " + num(worst_rate);
    return stages == 8 && worst <= 2.0 && worst_rate <= 0.125 + 1e-9;
  });

  criterion(8, "uniqueness evidence", [](std::string& d) {
    const double tol = 1e-12;
    caputo::CaputoProblem lin;
    lin.q = 0.5;
    lin.f = [](double, double x) { return x; };
    lin.x0 = 1.0;
    const Grid g(0, 1, 512, GridStyle::nodes);
    caputo::SolveOptions lo, hi;
    lo.initial = GridFunction::constant(g, lin.x0 - 5);
    hi.initial = GridFunction::constant(g, lin.x0 + 5);
    const double dc = sup_diff(caputo::solve(lin, g, tol, 1000, lo).solution,
                               caputo::solve(lin, g, tol, 1000, hi).solution);
    const auto p = pa();
    const Grid gn(0, 1, 1000, GridStyle::nodes);
    const auto drive = GridFunction::sample(gn, p.driving);
    const auto neg = GridFunction::sample(gn, [&](double t) { return -p.driving(t); });
    const auto a = pendulum::solve(p, gn, tol, 200, drive);
    const auto b = pendulum::solve(p, gn, tol, 200, GridFunction::constant(gn, 0.0));
    const auto c = pendulum::solve(p, gn, tol, 200, neg);
    const double dp = std::max(sup_diff(a.solution, b.solution), sup_diff(a.solution, c.solution));
    d = "caputo two-start " + num(dc) + ", pendulum three-start " + num(dp) + " (tol " + num(tol) + ")";
    return dc <= 10 * tol && dp <= 10 * tol;
  });

  criterion(9, "bvp3 worked example", [](std::string& d) {
    const auto p = bvp3::example_problem(0.4);
    const auto r = bvp3::solve(p, Grid(0, 1, 1000, GridStyle::midpoints), bvp3::SchemeChoice::automatic,
                               1e-10, 5000);
    const double defect = bvp3::ode_defect(p, r.solution);
    const auto h1 = bvp3::check_h1(p, 1000, 0);
    const auto h2 = bvp3::check_h2(p, 1000, 0);
    const double lam = h1.constants.at("Lambda"), grow = h2.constants.at("growth_value");
    d = "converged=" + std::to_string(r.converged) + ", defect " + num(defect) + ", Lambda " + num(lam) +
        ", H2 " + num(grow);
    return r.converged && defect <= 1e-8 && h1.pass && h2.pass && std::fabs(lam - 0.9824) <= 1e-3 &&
           std::fabs(grow - 0.9063) <= 1e-3;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
