#pragma once

// Dirichlet problem A(u''(t)) - sin(u(t)) = g(t), u(0) = u(1) = 0, for an
// expansive A (|Ax - Ay| >= |x - y|). The iterate is y = A(u''); u is rebuilt
// each step through A^{-1} and the Green's function of u'' = w.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coincidia/engine.hpp"
#include "coincidia/numerics.hpp"
#include "coincidia/report.hpp"
#include "coincidia/stability.hpp"

namespace coincidia::pendulum {

using numerics::Grid;
using numerics::GridFunction;
using RealMap = std::function<double(double)>;

struct PendulumProblem {
  RealMap A;
  std::optional<RealMap> A_inverse;
  RealMap driving;
  /// Lower comparison f with f(|Ax - Ay|) <= |x - y|, when known.
  std::optional<RealMap> f_lower;
};

/// u'' - a^2 sin(u) = f0, i.e. A(r) = r / a^2 and g = f0 / a^2 (needs |a| <= 1
/// for expansiveness).
PendulumProblem scaled_problem(double a, RealMap f0);

/// A(x) = 2 sqrt(x) on [0, 1], k x for x > 1, extended oddly to the negative
/// axis; f(t) = min(t^2 / 4, t / k). Continuous only for k = 2.
PendulumProblem example_A_problem(double k, RealMap driving);

/// Spot check of continuity and of the (A2) sandwich on random pairs.
HypothesisReport check_A(const PendulumProblem& p, int sample_count, std::uint64_t rng_seed);

/// x with |A(x) - y| <= tol. Brackets by doubling from [-1, 1] (at most 60
/// doublings, else a range error), then bisects.
double invert_A(const PendulumProblem& p, double y, double tol);

/// u(t) = int_0^1 G(t, s) w(s) ds with u(0) = u(1) = 0, for w on a nodes grid
/// over [0, 1].
GridFunction green_apply(const GridFunction& w);

/// h(y) = sin(u) + g with u = green_apply(A^{-1}(y)), sup norm, modulus 1/8.
engine::OperatorHandle make_operator(const PendulumProblem& p, double invert_tol = 1e-13);

/// Picard from y0 (default: the driving term). Companions: "u", "u_second".
engine::SolveReport solve(const PendulumProblem& p, const Grid& grid, double tol, int max_iter,
                          std::optional<GridFunction> y0 = std::nullopt);

/// sup_t |A(w''(t)) - sin(w(t)) - g(t)|.
double epsilon_defect(const PendulumProblem& p, const GridFunction& w, const GridFunction& w_second);

/// r - 2 sin(r/2) on [0, pi], r - 2 beyond.
stability::PhiFunction phi_pendulum();

struct Candidate {
  std::string name;
  GridFunction w;
  GridFunction w_second;
};

/// The four trial functions w1..w4 of the localization table, with their
/// second derivatives in closed form.
std::vector<Candidate> table1_candidates(const Grid& grid);

struct StabilityRow {
  std::string name;
  double epsilon;
  double psi;
  std::optional<double> sup_distance_to_solution;
};

/// (eps, psi(eps)) per candidate, plus sup |w - u*| when u* is given.
std::vector<StabilityRow> stability_table(const PendulumProblem& p,
                                          const std::vector<Candidate>& candidates,
                                          const std::optional<GridFunction>& u_star = std::nullopt);

}  // namespace coincidia::pendulum
