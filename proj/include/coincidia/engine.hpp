#pragma once

// Fixed-point iteration on grid-function iterates. A coincidence problem
// T(u) = S(u) enters here as the map h = S o T^{-1} acting on the image of T.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coincidia/numerics.hpp"
#include "coincidia/stability.hpp"

namespace coincidia::engine {

using numerics::GridFunction;

enum class NormKind { sup, l2 };
enum class Scheme { picard, averaged, resolvent };

std::string_view to_string(NormKind kind) noexcept;
std::string_view to_string(Scheme scheme) noexcept;

struct OperatorHandle {
  /// Must be pure and keep the grid of its argument.
  std::function<GridFunction(const GridFunction&)> apply;
  NormKind norm = NormKind::l2;
  /// Contraction constant in [0, 1) asserted by the caller, if known.
  std::optional<double> modulus;
};

struct SolveReport {
  GridFunction solution;
  int iterations = 0;
  std::vector<double> residual_history;
  double final_residual = 0.0;
  Scheme scheme = Scheme::picard;
  bool converged = false;
  double tolerance = 0.0;
  bool stagnated = false;
  std::optional<double> stability_radius;
  /// Named constants backing the solve (modulus, lambda, rho, ...).
  std::map<std::string, double> certificates;
  /// Reconstructed quantities that accompany the iterate (u, u', ...).
  std::map<std::string, GridFunction> companions;
  std::vector<std::string> notes;
};

double norm(NormKind kind, const GridFunction& f);
double distance(NormKind kind, const GridFunction& f, const GridFunction& g);

/// ||y - h(y)|| in h's norm.
double residual(const OperatorHandle& h, const GridFunction& y);

/// y_{k+1} = h(y_k) until the residual drops to tol or max_iter updates ran.
/// Once converged, one further step is kept if it does not raise the residual.
/// Without a declared modulus the run stops early (converged = false,
/// stagnated = true) once 50 consecutive steps fail to improve the best
/// residual by 1e-15.
SolveReport solve_picard(const OperatorHandle& h, const GridFunction& y0, double tol, int max_iter);

/// Krasnoselskii-Mann averaging y_{k+1} = (y_k + h(y_k)) / 2.
SolveReport solve_averaged(const OperatorHandle& h, const GridFunction& y0, double tol,
                           int max_iter);

/// 1, 2, 4, ..., 2^14.
std::vector<int> default_schedule();

/// Called after each completed resolvent stage with (n, y_n, h(y_n)).
using StageObserver =
    std::function<void(int, const GridFunction&, const GridFunction&)>;

/// Almost-fixed-point sequence: for each n of the schedule solve
/// y_n = (y0 + n h(y_n)) / (n + 1) by inner Picard iteration (warm-started from
/// the previous stage) until successive inner iterates differ by <= inner_tol,
/// then record ||y_n - h(y_n)||. Stops after the first stage whose residual is
/// <= tol; tol defaults to inner_tol.
SolveReport solve_resolvent(const OperatorHandle& h, const GridFunction& y0,
                            const std::vector<int>& n_schedule, double inner_tol,
                            std::optional<double> tol = std::nullopt,
                            const StageObserver& observer = {});

/// Localization radius phi^{-1}(eps) of the unique coincidence point.
double error_bound(const stability::PhiFunction& phi, double eps);

}  // namespace coincidia::engine
