#include "coincidia/numerics.hpp"

#include <cmath>
#include <string>

#include "coincidia/error.hpp"
#include "coincidia/kernels.hpp"

namespace coincidia::numerics {

Grid::Grid(double a, double b, std::size_t n, GridStyle style) : a_(a), b_(b), n_(n), style_(style) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    fail(ErrorKind::config, "grid requires finite endpoints with a < b");
  }
  if (n < 2) fail(ErrorKind::config, "grid requires at least two cells");
}

double Grid::point(std::size_t j) const noexcept {
  const double h = spacing();
  if (style_ == GridStyle::nodes) {
    return j == n_ ? b_ : a_ + static_cast<double>(j) * h;
  }
  return a_ + (static_cast<double>(j) + 0.5) * h;
}

std::vector<double> Grid::points() const {
  std::vector<double> t(size());
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = point(j);
  return t;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    fail(ErrorKind::config, "sample count " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j])) {
      fail(ErrorKind::numeric, "non-finite sample at grid index " + std::to_string(j) +
                                   " (t = " + std::to_string(grid_.point(j)) + ")");
    }
  }
}

std::vector<double> quadrature_weights(const Grid& grid) {
  const double h = grid.spacing();
  const std::size_t n = grid.cells();
  if (grid.style() == GridStyle::midpoints) return std::vector<double>(n, h);
  if (n % 2 != 0) {
    fail(ErrorKind::config, "Simpson quadrature on a nodes grid needs an even cell count, got " +
                                std::to_string(n));
  }
  std::vector<double> w(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double c = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    w[j] = c * h / 3.0;
  }
  return w;
}

double integrate(const GridFunction& f) {
  const auto w = quadrature_weights(f.grid());
  return kernels::dot(w, f.values());
}

GridFunction cumulative_integral(const GridFunction& f) {
  const Grid& grid = f.grid();
  const double h = grid.spacing();
  const auto v = f.values();
  std::vector<double> out(v.size(), 0.0);

  if (grid.style() == GridStyle::midpoints) {
    double prefix = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      out[j] = h * (prefix + 0.5 * v[j]);
      prefix += v[j];
    }
    return GridFunction(grid, std::move(out));
  }

  // Simpson prefix at even nodes; odd nodes add a 3/8 panel on top of the
  // prefix three cells back. Node 1 integrates the quadratic through nodes
  // 0..2 over its single cell.
  const std::size_t n = grid.cells();
  std::vector<double> even(n + 1, 0.0);
  for (std::size_t j = 2; j <= n; j += 2) {
    even[j] = even[j - 2] + h / 3.0 * (v[j - 2] + 4.0 * v[j - 1] + v[j]);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    if (j % 2 == 0) {
      out[j] = even[j];
    } else if (j == 1) {
      out[j] = h / 12.0 * (5.0 * v[0] + 8.0 * v[1] - v[2]);
    } else {
      out[j] = even[j - 3] + 3.0 * h / 8.0 * (v[j - 3] + 3.0 * v[j - 2] + 3.0 * v[j - 1] + v[j]);
    }
  }
  return GridFunction(grid, std::move(out));
}

double sup_norm(const GridFunction& f) { return kernels::max_abs(f.values()); }

double l2_norm(const GridFunction& f) {
  const auto w = quadrature_weights(f.grid());
  return std::sqrt(kernels::weighted_sum_sq(w, f.values()));
}

namespace {
void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) fail(ErrorKind::config, "grid functions live on different grids");
}
}  // namespace

double sup_distance(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  return kernels::max_abs_diff(f.values(), g.values());
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const auto w = quadrature_weights(f.grid());
  return std::sqrt(kernels::weighted_sq_diff(w, f.values(), g.values()));
}

double bracket_root(const std::function<double(double)>& g, double target, double lo, double hi,
                    double tol) {
  if (!(tol > 0.0)) fail(ErrorKind::domain, "bracket_root needs tol > 0");
  if (!(lo <= hi)) fail(ErrorKind::bracket, "bracket_root needs lo <= hi");
  auto eval = [&g](double x) {
    const double y = g(x);
    if (!std::isfinite(y)) {
      fail(ErrorKind::numeric, "non-finite function value at x = " + std::to_string(x));
    }
    return y;
  };
  const double g_lo = eval(lo);
  const double g_hi = eval(hi);
  if (target < g_lo || target > g_hi) {
    fail(ErrorKind::bracket, "target " + std::to_string(target) + " outside [" +
                                 std::to_string(g_lo) + ", " + std::to_string(g_hi) + "]");
  }
  if (g_lo == target) return lo;
  if (g_hi == target) return hi;

  // 2100 halvings exhaust any double interval.
  for (int step = 0; step < 2100; ++step) {
    const double mid = lo + 0.5 * (hi - lo);
    const double g_mid = eval(mid);
    const double miss = std::fabs(g_mid - target);
    if (g_mid == target || (hi - lo <= 0.25 * tol && miss <= tol)) return mid;
    if (mid <= lo || mid >= hi) {
      if (miss <= tol) return mid;
      fail(ErrorKind::bracket, "target " + std::to_string(target) +
                                   " falls in a jump of the function near x = " +
                                   std::to_string(mid));
    }
    (g_mid < target ? lo : hi) = mid;
  }
  fail(ErrorKind::numeric, "bisection did not terminate");
}

double gamma(double x) {
  if (!(x > 0.0)) fail(ErrorKind::domain, "gamma is evaluated for x > 0 only");
  const double y = std::tgamma(x);
  if (!std::isfinite(y)) fail(ErrorKind::numeric, "gamma overflow at x = " + std::to_string(x));
  return y;
}

double mittag_leffler(double q, double z, double tol) {
  if (!(q > 0.0 && q <= 1.0)) fail(ErrorKind::domain, "mittag_leffler needs 0 < q <= 1");
  if (!(std::fabs(z) <= 30.0)) fail(ErrorKind::domain, "mittag_leffler needs |z| <= 30");
  if (!(tol > 0.0)) fail(ErrorKind::domain, "mittag_leffler needs tol > 0");

  constexpr long max_terms = 100000;
  const double log_abs_z = std::log(std::fabs(z));
  double sum = 0.0;
  for (long k = 0; k <= max_terms; ++k) {
    const double arg = q * static_cast<double>(k) + 1.0;
    double term;
    if (k == 0) {
      term = 1.0;
    } else if (z == 0.0) {
      term = 0.0;
    } else if (arg < 170.0) {
      term = std::pow(z, static_cast<double>(k)) / std::tgamma(arg);
    } else {
      const double mag = std::exp(static_cast<double>(k) * log_abs_z - std::lgamma(arg));
      term = (z < 0.0 && k % 2 == 1) ? -mag : mag;
    }
    sum += term;
    if (!std::isfinite(sum)) fail(ErrorKind::numeric, "Mittag-Leffler series overflowed");
    if (std::fabs(term) < tol * std::fmax(1.0, std::fabs(sum))) return sum;
  }
  fail(ErrorKind::numeric, "Mittag-Leffler series exceeded the term budget");
}

}  // namespace coincidia::numerics
