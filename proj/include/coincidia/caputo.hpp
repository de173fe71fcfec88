#pragma once

// Caputo problem of order 0 < q < 1 with nonlocal initial data
//
//   cD^q x(t) = f(t, x(t)),   x(0) = x0 + sum_i g_i(x(t_i)),
//
// solved through the equivalent Volterra equation
//
//   x(t) = x0 + sum_i g_i(x(t_i)) + 1/Gamma(q) int_0^t (t-s)^(q-1) f(s, x(s)) ds
//
// by Picard iteration with product-trapezoidal weights.

#include <functional>
#include <optional>
#include <vector>

#include "coincidia/engine.hpp"
#include "coincidia/numerics.hpp"
#include "coincidia/report.hpp"

namespace coincidia::caputo {

using numerics::Grid;
using numerics::GridFunction;

struct NonlocalTerm {
  double t = 0.0;
  std::function<double(double)> g;
  /// Lipschitz constant of g.
  double c = 0.0;
};

struct CaputoProblem {
  double q = 0.5;
  std::function<double(double t, double x)> f;
  /// Declared Lipschitz constant of f in x.
  double L_f = 1.0;
  double x0 = 0.0;
  /// Sorted by t. Empty means a plain initial value problem (t_N = 0).
  std::vector<NonlocalTerm> nonlocal;
  double horizon = 1.0;

  void validate() const;
  double L_g() const;
  double t_N() const;
};

/// rows[j][i] integrates (t_j - s)^(q-1) against the hat function at t_i, so
/// sum_i rows[j][i] phi(t_i) is exact for phi piecewise linear on the grid.
/// Row 0 is empty. Needs a nodes grid starting at 0.
using KernelWeights = std::vector<std::vector<double>>;

KernelWeights kernel_weights(const Grid& grid, double q);

/// One application of the Volterra map.
GridFunction picard_step(const CaputoProblem& p, const GridFunction& x, const KernelWeights& w);

/// Grid index each nonlocal point is snapped to (nearest node).
std::vector<std::size_t> snapped_nodes(const CaputoProblem& p, const Grid& grid);

/// Limit condition L_f t_N^q / (Gamma(q) q) + L_g < 1, then the smallest
/// doubling lambda (from max(1, 2q / (L_f t_N)), at most lambda_max) with
///   rho(lambda) = L_f / Gamma(q) (t_N^q / q + Gamma(q) / (lambda L_f)^q) + L_g < 1.
HypothesisReport contraction_certificate(const CaputoProblem& p, double lambda_max = 1e12);

/// sup_j |x(t_j)| / w(t_j), w(t) = exp(lambda L_f max(t, t_N)).
double weighted_sup_norm(const GridFunction& x, double lambda, double L_f, double t_N);

struct SolveOptions {
  /// Defaults to the constant x0.
  std::optional<GridFunction> initial;
  /// Run even when the certificate fails.
  bool override_certificate = false;
  double lambda_max = 1e12;
};

/// Picard on a nodes grid over [0, horizon] until successive iterates differ
/// by <= tol in the sup norm. Throws a certificate error when the contraction
/// certificate fails and no override is set.
engine::SolveReport solve(const CaputoProblem& p, const Grid& grid, double tol, int max_iter,
                          const SolveOptions& options = {});

}  // namespace coincidia::caputo
