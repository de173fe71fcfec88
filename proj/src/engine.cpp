#include "coincidia/engine.hpp"

#include <cmath>
#include <string>

#include "coincidia/error.hpp"
#include "coincidia/kernels.hpp"

namespace coincidia::engine {
namespace {

constexpr int kStagnationWindow = 50;
constexpr double kStagnationDecrease = 1e-15;

GridFunction apply_checked(const OperatorHandle& h, const GridFunction& y) {
  if (!h.apply) fail(ErrorKind::config, "operator handle has no map");
  GridFunction out = h.apply(y);
  if (!(out.grid() == y.grid())) fail(ErrorKind::config, "operator changed the grid of its argument");
  return out;
}

void validate(double tol, int max_iter) {
  if (!(tol > 0.0)) fail(ErrorKind::config, "solver tolerance must be positive");
  if (max_iter < 1) fail(ErrorKind::config, "max_iter must be at least 1");
}

SolveReport make_report(Scheme scheme, const GridFunction& y, double tol) {
  return SolveReport{y, 0, {}, 0.0, scheme, false, tol, false, std::nullopt, {}, {}, {}};
}

template <class Update>
SolveReport iterate(const OperatorHandle& h, const GridFunction& y0, double tol, int max_iter,
                    Scheme scheme, bool watch_stagnation, Update&& update) {
  validate(tol, max_iter);
  GridFunction y = y0;
  GridFunction hy = apply_checked(h, y);
  double r = distance(h.norm, y, hy);
  std::vector<double> history{r};
  double best = r;
  int since_improvement = 0;
  bool stagnated = false;
  int k = 0;
  while (r > tol && k < max_iter) {
    y = update(y, hy);
    hy = apply_checked(h, y);
    r = distance(h.norm, y, hy);
    history.push_back(r);
    ++k;
    if (watch_stagnation) {
      if (r < best - kStagnationDecrease) {
        best = r;
        since_improvement = 0;
      } else if (++since_improvement >= kStagnationWindow) {
        stagnated = true;
        break;
      }
    }
  }
  if (r <= tol && scheme == Scheme::picard && r > 0.0 && k < max_iter) {
    // Polish: h(y) is closer to the fixed point than y under a contraction.
    // Keep the extra step only when it does not raise the residual.
    GridFunction next = update(y, hy);
    GridFunction h_next = apply_checked(h, next);
    const double r_next = distance(h.norm, next, h_next);
    if (r_next <= r) {
      y = std::move(next);
      r = r_next;
      history.push_back(r);
      ++k;
    }
  }
  SolveReport report = make_report(scheme, y, tol);
  report.iterations = k;
  report.residual_history = std::move(history);
  report.final_residual = r;
  report.converged = r <= tol;
  report.stagnated = stagnated && !report.converged;
  if (h.modulus) report.certificates["modulus"] = *h.modulus;
  if (report.stagnated) report.notes.emplace_back("residual stagnated");
  return report;
}

}  // namespace

std::string_view to_string(NormKind kind) noexcept {
  return kind == NormKind::sup ? "sup" : "l2";
}

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::picard:
      return "picard";
    case Scheme::averaged:
      return "averaged";
    case Scheme::resolvent:
      return "resolvent";
  }
  return "unknown";
}

double norm(NormKind kind, const GridFunction& f) {
  return kind == NormKind::sup ? numerics::sup_norm(f) : numerics::l2_norm(f);
}

double distance(NormKind kind, const GridFunction& f, const GridFunction& g) {
  return kind == NormKind::sup ? numerics::sup_distance(f, g) : numerics::l2_distance(f, g);
}

double residual(const OperatorHandle& h, const GridFunction& y) {
  return distance(h.norm, y, apply_checked(h, y));
}

SolveReport solve_picard(const OperatorHandle& h, const GridFunction& y0, double tol,
                         int max_iter) {
  if (h.modulus && !(*h.modulus >= 0.0 && *h.modulus < 1.0)) {
    fail(ErrorKind::config, "declared modulus must lie in [0, 1)");
  }
  return iterate(h, y0, tol, max_iter, Scheme::picard, !h.modulus,
                 [](const GridFunction&, const GridFunction& hy) { return hy; });
}

SolveReport solve_averaged(const OperatorHandle& h, const GridFunction& y0, double tol,
                           int max_iter) {
  return iterate(h, y0, tol, max_iter, Scheme::averaged, false,
                 [](const GridFunction& y, const GridFunction& hy) {
                   std::vector<double> next(y.size());
                   kernels::average(y.values(), hy.values(), next);
                   return GridFunction(y.grid(), std::move(next));
                 });
}

std::vector<int> default_schedule() {
  std::vector<int> s;
  for (int k = 0; k <= 14; ++k) s.push_back(1 << k);
  return s;
}

SolveReport solve_resolvent(const OperatorHandle& h, const GridFunction& y0,
                            const std::vector<int>& n_schedule, double inner_tol,
                            std::optional<double> tol, const StageObserver& observer) {
  if (!(inner_tol > 0.0)) fail(ErrorKind::config, "inner tolerance must be positive");
  if (n_schedule.empty()) fail(ErrorKind::config, "resolvent schedule is empty");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 1 || (i > 0 && n_schedule[i] <= n_schedule[i - 1])) {
      fail(ErrorKind::config, "resolvent schedule must be strictly increasing positive integers");
    }
  }
  const double outer_tol = tol.value_or(inner_tol);
  if (!(outer_tol > 0.0)) fail(ErrorKind::config, "solver tolerance must be positive");

  const auto base = y0.values();
  GridFunction z = y0;
  GridFunction hz = apply_checked(h, z);
  std::vector<double> history;
  long inner_total = 0;
  int stages = 0;
  for (int n : n_schedule) {
    const double nd = static_cast<double>(n);
    const long bound =
        static_cast<long>(std::ceil(std::log(inner_tol) / std::log(nd / (nd + 1.0)))) + 50;
    for (long it = 0;; ++it) {
      // z <- (y0 + n h(z)) / (n + 1), an n/(n+1)-contraction for nonexpansive h.
      std::vector<double> next(z.size());
      const auto hv = hz.values();
      for (std::size_t j = 0; j < next.size(); ++j) next[j] = (base[j] + nd * hv[j]) / (nd + 1.0);
      GridFunction candidate(z.grid(), std::move(next));
      const double step = distance(h.norm, candidate, z);
      if (step <= inner_tol) break;
      if (it >= bound) {
        fail(ErrorKind::inner_convergence, "resolvent stage n = " + std::to_string(n) +
                                               " exceeded " + std::to_string(bound) +
                                               " inner iterations");
      }
      z = std::move(candidate);
      hz = apply_checked(h, z);
      ++inner_total;
    }
    const double r = distance(h.norm, z, hz);
    history.push_back(r);
    ++stages;
    if (observer) observer(n, z, hz);
    if (r <= outer_tol) break;
  }
  SolveReport report = make_report(Scheme::resolvent, z, outer_tol);
  report.iterations = stages;
  report.final_residual = history.back();
  report.residual_history = std::move(history);
  report.converged = report.final_residual <= outer_tol;
  report.certificates["inner_iterations"] = static_cast<double>(inner_total);
  report.certificates["inner_tol"] = inner_tol;
  if (h.modulus) report.certificates["modulus"] = *h.modulus;
  return report;
}

double error_bound(const stability::PhiFunction& phi, double eps) {
  if (!(eps >= 0.0)) fail(ErrorKind::domain, "error bound needs eps >= 0");
  return stability::invert(phi, eps, 1e-9);
}

}  // namespace coincidia::engine
