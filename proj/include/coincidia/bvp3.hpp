#pragma once

// Three-point boundary value problem
//
//   x''(t) = g(t, x(t), x'(t), x''(t)),   x(0) = 0,   x'(1) = delta x'(eta),
//
// solved as a coincidence problem on y = x'' in L^2[0, 1]: the iterated map
// is h(y)(t) = g(t, v(t), v'(t), y(t)) where (v, v') reconstructs the unique
// function of the constraint set whose second derivative is y.

#include <cstdint>
#include <functional>
#include <optional>

#include "coincidia/engine.hpp"
#include "coincidia/numerics.hpp"
#include "coincidia/report.hpp"

namespace coincidia::bvp3 {

using numerics::Grid;
using numerics::GridFunction;

using Nonlinearity = std::function<double(double t, double u1, double u2, double u3)>;
using Coefficient = std::function<double(double t)>;

/// Lipschitz data: |g(t,u) - g(t,v)| <= k1(t)|u1-v1| + K2|u2-v2| + K3|u3-v3|
/// with k1^2 in Z(ell).
struct LipschitzData {
  Coefficient k1;
  double K2 = 0.0;
  double K3 = 0.0;
  double ell = 0.0;
};

/// Growth data: |g(t,u)| <= a1(t)|u1| + A2|u2| + A3|u3| + a4(t) with a1^2 in Z(m).
struct GrowthData {
  Coefficient a1;
  double A2 = 0.0;
  double A3 = 0.0;
  Coefficient a4;
  double m = 0.0;
};

struct Bvp3Problem {
  double delta = 0.0;
  double eta = 0.5;
  Nonlinearity g;
  std::optional<LipschitzData> h1;
  std::optional<GrowthData> h2;

  /// Throws a config error when an invariant is broken.
  void validate() const;
};

/// The worked example
///   (x''^3 + 2x'')/(x''^2 + 3) = kappa x^2/(t + t x^2) + log(t sqrt(1 + 2 e^{x'})),
///   x(0) = 0,  10 x'(1) + x'(1/2) = 0,
/// rewritten as x'' = g with its Lipschitz and growth data.
Bvp3Problem example_problem(double kappa);

/// F(delta, eta) = [delta^2 (1-eta)^2 + (delta^2 - 2 delta) eta^2 + 1] / (2 (delta-1)^2).
double f_constant(double delta, double eta);

/// C(delta, eta): sqrt(F) for delta > 0, min(sqrt(F), 2/pi) for delta <= 0.
double c_constant(double delta, double eta);

/// Lambda = (2 sqrt(ell) + Q) C(delta, eta) + R.
double lambda_constant(double ell, double Q, double R, double delta, double eta);

/// Checks int_t^1 h(s) ds <= ell / t (+1e-9) at every probe point. The probe
/// grid must be a midpoints grid inside (0, 1]; the integral is evaluated by
/// Simpson's rule after the substitution s = t^(1-u), which tames h ~ 1/s^2.
HypothesisReport check_z_membership(const Coefficient& h, double ell, const Grid& probe_grid);

/// Lipschitz hypothesis: k1^2 in Z(ell), Lambda(ell, K2, K3) <= 1 (+1e-12),
/// and the Lipschitz inequality on `sample_count` random sextuples.
HypothesisReport check_h1(const Bvp3Problem& p, int sample_count, std::uint64_t rng_seed);

/// Growth hypothesis: a1^2 in Z(m), (2 sqrt(m) + A2) C + A3 < 1 (-1e-12), and
/// the growth bound on random samples.
HypothesisReport check_h2(const Bvp3Problem& p, int sample_count, std::uint64_t rng_seed);

/// v with v'' = y, v(0) = 0, v'(1) = delta v'(eta), for y read as cell-wise
/// constant on a midpoints grid over [0, 1]. eta is snapped to the nearest
/// interior cell boundary.
struct Reconstruction {
  GridFunction v;
  GridFunction v_prime;
  /// The constant v'(0) = [delta int_0^eta y - int_0^1 y] / (1 - delta).
  double slope_at_zero = 0.0;
  double eta_snapped = 0.0;
  double snap_distance = 0.0;
};

Reconstruction apply_T_inverse(const GridFunction& y, double delta, double eta);

/// Exact values of the reconstruction at any t in [0, 1] (v(0) = 0 exactly).
double reconstruct_value(const GridFunction& y, const Reconstruction& r, double t);
double reconstruct_slope(const GridFunction& y, const Reconstruction& r, double t);

/// The map h(y) = g(., v, v', y) in the l2 norm, with the certified modulus
/// attached when supplied.
engine::OperatorHandle make_operator(const Bvp3Problem& p, std::optional<double> modulus = {});

/// Scheme selection for `solve`. `automatic` and `picard` run Picard only when
/// the Lipschitz hypothesis certifies Lambda < 1, otherwise averaging.
enum class SchemeChoice { automatic, picard, averaged, resolvent };

engine::SolveReport solve(const Bvp3Problem& p, const Grid& grid, SchemeChoice scheme, double tol,
                          int max_iter);

/// ||y - g(., u, u', y)||_2 with (u, u') reconstructed from y.
double ode_defect(const Bvp3Problem& p, const GridFunction& y);

/// Both sides of the Wirtinger-type inequalities for one x in the constraint
/// set, weight p (p^2 in Z(ell)) and constants Q, R. Margins are rhs - lhs.
struct InequalityMargins {
  double derivative_bound;  // C ||x''|| - ||x'||
  double first;             // 2 sqrt(ell) C^2 ||x''||^2 - int p|x||x'|
  double second;            // (2 sqrt(ell) + Q)^2 C^2 ||x''||^2 - int (p|x| + Q|x'|)^2
  double third;             // Lambda^2 ||x''||^2 - int (p|x| + Q|x'| + R|x''|)^2
};

InequalityMargins inequality_margins(const GridFunction& x, const GridFunction& x_prime,
                                     const GridFunction& x_second, const Coefficient& p,
                                     double ell, double Q, double R, double delta, double eta);

}  // namespace coincidia::bvp3
