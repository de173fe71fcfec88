#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coincidia/bvp3.hpp"
#include "coincidia/error.hpp"

using namespace coincidia::bvp3;
using coincidia::Error;
using coincidia::ErrorKind;
using coincidia::numerics::GridStyle;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no coincidia::Error thrown";
  return ErrorKind::config;
}

constexpr double kPi = std::numbers::pi;
const double kCritical = (4 * kPi - 6) / (9 * std::sqrt(3.0));

Grid mid(std::size_t n) { return Grid(0.0, 1.0, n, GridStyle::midpoints); }

Bvp3Problem constant_g(double c) {
  Bvp3Problem p;
  p.delta = -0.1;
  p.eta = 0.5;
  p.g = [c](double, double, double, double) { return c; };
  p.h1 = LipschitzData{[](double) { return 0.0; }, 0.0, 0.0, 0.0};
  p.h2 = GrowthData{[](double) { return 0.0; }, 0.0, 0.0, [c](double) { return std::fabs(c); }, 0.0};
  return p;
}

// random polynomial of degree <= 6 with uniform [-1, 1] coefficients
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

TEST(Constants, F) {
  EXPECT_NEAR(f_constant(-0.1, 0.5), 1.055 / 2.42, 1e-12);
  EXPECT_DOUBLE_EQ(f_constant(0.0, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(f_constant(0.0, 0.9), 0.5);
  EXPECT_DOUBLE_EQ(f_constant(2.0, 0.5), 1.0);
  EXPECT_EQ(kind_of([] { f_constant(1.0, 0.5); }), ErrorKind::domain);
}

TEST(Constants, C) {
  EXPECT_DOUBLE_EQ(c_constant(-0.1, 0.5), 2.0 / kPi);
  EXPECT_DOUBLE_EQ(c_constant(0.0, 0.3), 2.0 / kPi);
  EXPECT_DOUBLE_EQ(c_constant(2.0, 0.5), 1.0);
  EXPECT_EQ(kind_of([] { c_constant(1.0, 0.5); }), ErrorKind::domain);
}

TEST(Constants, Lambda) {
  EXPECT_EQ(lambda_constant(0, 0, 0, -0.1, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(lambda_constant(1, 0, 0, 2.0, 0.5), 2.0);
  const double m = kCritical * kCritical / 4;
  EXPECT_NEAR(lambda_constant(m * 27.0 / 16.0, 0.5, 1.0 / 3.0, -0.1, 0.5), 1.0, 1e-12);
  EXPECT_EQ(kind_of([] { lambda_constant(1, 0, 0, 1.0, 0.5); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { lambda_constant(-1, 0, 0, 2.0, 0.5); }), ErrorKind::domain);
}

TEST(ZMembership, Examples) {
  const auto g = mid(64);
  EXPECT_TRUE(check_z_membership([](double t) { return 1.0 / (t * t); }, 1.0, g).pass);
  EXPECT_TRUE(check_z_membership([](double) { return 0.0; }, 0.0, g).pass);
  const double k2 = 0.16;
  EXPECT_TRUE(check_z_membership([k2](double) { return k2; }, k2 / 4, g).pass);
  // just below the boundedness rule
  const auto bad = check_z_membership([](double t) { return 1.0 / (t * t); }, 0.9, g);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.witnesses.empty());
}

TEST(ZMembership, Errors) {
  EXPECT_EQ(kind_of([] { check_z_membership([](double) { return 0.0; }, 0, Grid(0, 1, 8, GridStyle::nodes)); }),
            ErrorKind::config);
  EXPECT_EQ(kind_of([] { check_z_membership([](double) { return NAN; }, 0, mid(8)); }),
            ErrorKind::numeric);
}

TEST(Hypotheses, ExampleAtKappaPointFour) {
  const auto p = example_problem(0.4);
  const auto h1 = check_h1(p, 2000, 1);
  EXPECT_TRUE(h1.pass);
  EXPECT_NEAR(h1.constants.at("Lambda"), (3 * std::sqrt(3.0) / 4 * 0.4 + 0.5) * 2 / kPi + 1.0 / 3, 1e-12);
  EXPECT_NEAR(h1.constants.at("Lambda"), 0.9824, 1e-4);
  const auto h2 = check_h2(p, 2000, 1);
  EXPECT_TRUE(h2.pass);
  EXPECT_NEAR(h2.constants.at("growth_value"), 0.9063, 1e-4);
}

TEST(Hypotheses, KappaPastTheThresholdFails) {
  const auto p = example_problem(0.45);
  const auto h1 = check_h1(p, 500, 0);
  EXPECT_FALSE(h1.pass);
  EXPECT_GT(h1.constants.at("Lambda"), 1.0);
  EXPECT_TRUE(check_h1(example_problem(kCritical * (1 - 1e-9)), 500, 0).pass);
}

TEST(Hypotheses, TrivialAndBoundary) {
  const auto zero = constant_g(0.0);
  const auto h1 = check_h1(zero, 100, 0);
  EXPECT_TRUE(h1.pass);
  EXPECT_EQ(h1.constants.at("Lambda"), 0.0);
  EXPECT_TRUE(check_h2(zero, 100, 0).pass);

  auto edge = zero;
  edge.h2->A3 = 1.0;
  EXPECT_FALSE(check_h2(edge, 100, 0).pass);
  // Lambda = 1 is allowed for H1
  edge.h1->K3 = 1.0;
  EXPECT_TRUE(check_h1(edge, 100, 0).pass);
}

TEST(Hypotheses, SamplerFindsAFalseLipschitzClaim) {
  auto p = constant_g(0.0);
  p.g = [](double, double u1, double, double) { return 0.5 * u1; };
  const auto r = check_h1(p, 200, 3);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.witnesses.empty());
  EXPECT_GT(r.constants.at("violations"), 0.0);
}

TEST(Hypotheses, MissingDataIsAConfigError) {
  auto p = constant_g(0.0);
  p.h1.reset();
  p.h2.reset();
  EXPECT_EQ(kind_of([&] { check_h1(p, 1, 0); }), ErrorKind::config);
  EXPECT_EQ(kind_of([&] { check_h2(p, 1, 0); }), ErrorKind::config);
}

TEST(Problem, Validation) {
  auto p = constant_g(1.0);
  p.delta = 1.0;
  EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::config);
  p.delta = 0.0;
  p.eta = 1.0;
  EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::config);
  p.eta = 0.5;
  p.h1->K2 = -1.0;
  EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::config);
}

TEST(TInverse, ConstantOne) {
  const auto g = mid(1000);
  const auto y = GridFunction::constant(g, 1.0);
  const double d = -0.1, eta = 0.5;
  const auto r = apply_T_inverse(y, d, eta);
  EXPECT_NEAR(reconstruct_value(y, r, 1.0), 0.5 - 1.05 / 1.1, 1e-10);
  EXPECT_NEAR(reconstruct_value(y, r, 1.0), -0.454545454545, 1e-10);
  EXPECT_EQ(reconstruct_value(y, r, 0.0), 0.0);
  const double want = d * (eta - 1) / (1 - d);
  EXPECT_NEAR(reconstruct_slope(y, r, 1.0), want, 1e-10);
  EXPECT_NEAR(d * reconstruct_slope(y, r, eta), want, 1e-10);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g.point(j);
    EXPECT_NEAR(r.v[j], t * t / 2 + t * (d * eta - 1) / (1 - d), 1e-12);
  }
  EXPECT_EQ(r.snap_distance, 0.0);
}

TEST(TInverse, Zero) {
  const auto g = mid(64);
  const auto r = apply_T_inverse(GridFunction::constant(g, 0.0), -0.1, 0.5);
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_EQ(r.v[j], 0.0);
    EXPECT_EQ(r.v_prime[j], 0.0);
  }
}

TEST(TInverse, Errors) {
  const auto y = GridFunction::constant(mid(16), 1.0);
  EXPECT_EQ(kind_of([&] { apply_T_inverse(y, 1.0, 0.5); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([&] { apply_T_inverse(GridFunction::constant(Grid(0, 1, 16, GridStyle::nodes), 1.0), 0.0, 0.5); }),
            ErrorKind::config);
}

TEST(TInverse, BoundaryConditionsOnRandomData) {
  std::mt19937_64 rng(5);
  const auto g = mid(777);
  for (int trial = 0; trial < 50; ++trial) {
    const Poly q = random_poly(rng, false);
    const auto y = GridFunction::sample(g, q);
    for (auto [d, eta] : {std::pair{-0.1, 0.5}, {2.0, 0.5}, {0.0, 0.3}, {0.7, 0.123}}) {
      const auto r = apply_T_inverse(y, d, eta);
      EXPECT_EQ(reconstruct_value(y, r, 0.0), 0.0);
      EXPECT_LE(std::fabs(reconstruct_slope(y, r, 1.0) - d * reconstruct_slope(y, r, r.eta_snapped)), 1e-8);
      EXPECT_LE(r.snap_distance, 0.5 / 777 + 1e-15);
    }
  }
}

TEST(TInverse, SecondDifferencesReproduceY) {
  for (std::size_t n : {100u, 200u, 400u}) {
    const auto g = mid(n);
    const auto y = GridFunction::sample(g, [](double t) { return std::cos(4 * t) + t * t; });
    const auto r = apply_T_inverse(y, -0.1, 0.5);
    const double h = g.spacing();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double d2 = (r.v[j + 1] - 2 * r.v[j] + r.v[j - 1]) / (h * h);
      worst = std::max(worst, std::fabs(d2 - y[j]));
    }
    EXPECT_LE(worst, 20.0 * h * h) << n;
  }
}

TEST(Solve, ZeroNonlinearity) {
  const auto r = solve(constant_g(0.0), mid(100), SchemeChoice::automatic, 1e-10, 100);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
  for (std::size_t j = 0; j < r.solution.size(); ++j) {
    EXPECT_EQ(r.solution[j], 0.0);
    EXPECT_EQ(r.companions.at("u")[j], 0.0);
  }
}

TEST(Solve, ConstantNonlinearity) {
  const double c = 1.7, d = -0.1, eta = 0.5;
  const auto g = mid(200);
  const auto r = solve(constant_g(c), g, SchemeChoice::automatic, 1e-10, 100);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.scheme, coincidia::engine::Scheme::picard);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g.point(j);
    EXPECT_NEAR(r.solution[j], c, 1e-12);
    EXPECT_NEAR(r.companions.at("u")[j], c * (t * t / 2 + t * (d * eta - 1) / (1 - d)), 1e-10);
  }
}

TEST(Solve, WorkedExample) {
  const auto p = example_problem(0.4);
  const double tol = 1e-10;
  const auto r = solve(p, mid(1000), SchemeChoice::automatic, tol, 5000);
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(r.scheme, coincidia::engine::Scheme::picard);
  EXPECT_LE(r.final_residual, tol);
  EXPECT_NEAR(r.final_residual, ode_defect(p, r.solution), 1e-12);
  EXPECT_NEAR(r.certificates.at("Lambda"), 0.9824, 1e-3);
  EXPECT_NEAR(r.certificates.at("growth_value"), 0.9063, 1e-3);

  const auto h = make_operator(p).apply(r.solution);
  double sup = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) sup = std::max(sup, std::fabs(h[j] - r.solution[j]));
  EXPECT_LE(sup, tol);
}

TEST(Solve, SchemesAgreeOnTheExample) {
  const auto p = example_problem(0.3);
  const auto g = mid(256);
  const auto pic = solve(p, g, SchemeChoice::picard, 1e-10, 5000);
  const auto avg = solve(p, g, SchemeChoice::averaged, 1e-10, 5000);
  ASSERT_TRUE(pic.converged);
  ASSERT_TRUE(avg.converged);
  EXPECT_EQ(avg.scheme, coincidia::engine::Scheme::averaged);
  double diff = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) diff = std::max(diff, std::fabs(pic.solution[j] - avg.solution[j]));
  EXPECT_LE(diff, 1e-7);
}

TEST(Solve, BoundaryLambdaRefusesPicard) {
  auto p = constant_g(0.5);
  p.h1->K3 = 1.0;  // Lambda = 1: nonexpansive only
  const auto r = solve(p, mid(64), SchemeChoice::picard, 1e-10, 200);
  EXPECT_EQ(r.scheme, coincidia::engine::Scheme::averaged);
  bool noted = false;
  for (const auto& n : r.notes) noted |= n.find("picard refused") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Solve, NonFiniteGNamesTheNode) {
  auto p = constant_g(0.0);
  p.g = [](double t, double, double, double) { return t > 0.5 ? NAN : 0.0; };
  try {
    solve(p, mid(16), SchemeChoice::automatic, 1e-10, 10);
    FAIL() << "expected a numeric error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numeric);
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(OdeDefect, Examples) {
  const auto g = mid(128);
  EXPECT_NEAR(ode_defect(constant_g(1.0), GridFunction::constant(g, 0.0)), 1.0, 1e-14);
  EXPECT_NEAR(ode_defect(constant_g(1.0), GridFunction::constant(g, 1.0)), 0.0, 1e-14);
}

TEST(OdeDefect, GrowsWithPerturbation) {
  const auto p = example_problem(0.4);
  const auto g = mid(256);
  const auto base = solve(p, g, SchemeChoice::automatic, 1e-11, 5000);
  ASSERT_TRUE(base.converged);
  const double eps[] = {1e-6, 1e-4, 1e-2, 1e-1};
  std::vector<double> mean(std::size(eps), 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> noise(g.size());
    for (double& x : noise) x = nd(rng);
    for (std::size_t k = 0; k < std::size(eps); ++k) {
      std::vector<double> y(g.size());
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = base.solution[j] + eps[k] * noise[j];
      mean[k] += ode_defect(p, GridFunction(g, y)) / 10.0;
    }
  }
  for (std::size_t k = 0; k + 1 < mean.size(); ++k) EXPECT_LT(mean[k], mean[k + 1]);
  EXPECT_LE(mean[0], 1e-4);
}

TEST(Wirtinger, Classical) {
  std::mt19937_64 rng(11);
  const auto g = mid(4000);
  for (int i = 0; i < 100; ++i) {
    const Poly x = random_poly(rng, true);
    const auto xs = GridFunction::sample(g, x);
    const auto dx = GridFunction::sample(g, x.derivative());
    EXPECT_LE(coincidia::numerics::l2_norm(xs), 2 / kPi * coincidia::numerics::l2_norm(dx) + 1e-6);
  }
}

TEST(Wirtinger, Generalized) {
  std::mt19937_64 rng(12);
  const auto g = mid(4000);
  for (int i = 0; i < 100; ++i) {
    const Poly x = random_poly(rng, true);
    const Poly dx = x.derivative();
    const auto lhs = GridFunction::sample(g, [&](double t) { return x(t) * x(t) / (t * t); });
    const auto rhs = GridFunction::sample(g, [&](double t) { return dx(t) * dx(t); });
    EXPECT_LE(coincidia::numerics::integrate(lhs), 4.0 * coincidia::numerics::integrate(rhs) + 1e-6);
  }
}

TEST(Wirtinger, DerivativeBoundAndWeightedInequalitiesOverSeeds) {
  const auto g = mid(2000);
  const auto p = [](double t) { return 1.0 / t; };
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 10; ++i) {
      const auto y = GridFunction::sample(g, random_poly(rng, false));
      for (auto [d, eta] : {std::pair{-0.1, 0.5}, {2.0, 0.5}, {0.0, 0.3}}) {
        const auto r = apply_T_inverse(y, d, eta);
        const auto m = inequality_margins(r.v, r.v_prime, y, p, 1.0, 0.5, 0.3, d, eta);
        EXPECT_GE(m.derivative_bound, -1e-6) << seed << " " << d;
        EXPECT_GE(m.first, -1e-6) << seed << " " << d;
        EXPECT_GE(m.second, -1e-6) << seed << " " << d;
        EXPECT_GE(m.third, -1e-6) << seed << " " << d;
      }
    }
  }
}
