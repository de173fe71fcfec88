#pragma once

// Shared numeric substrate: uniform grids, sampled functions, fixed-rule
// quadrature, norms, bisection, Gamma and Mittag-Leffler evaluation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace coincidia::numerics {

enum class GridStyle { nodes, midpoints };

/// Uniform partition of [a, b] into n cells.
///
/// `nodes` grids carry the n+1 cell boundaries, `midpoints` grids the n cell
/// centres. The style also fixes the quadrature rule used on the grid:
/// composite Simpson on nodes, composite midpoint on midpoints.
class Grid {
 public:
  Grid(double a, double b, std::size_t n, GridStyle style);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t cells() const noexcept { return n_; }
  GridStyle style() const noexcept { return style_; }
  double spacing() const noexcept { return (b_ - a_) / static_cast<double>(n_); }
  std::size_t size() const noexcept { return style_ == GridStyle::nodes ? n_ + 1 : n_; }
  double point(std::size_t j) const noexcept;
  std::vector<double> points() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  std::size_t n_;
  GridStyle style_;
};

/// Finite samples of a real function, one per grid point. Immutable.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);

  template <class F>
  static GridFunction sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.point(j));
    return GridFunction(grid, std::move(v));
  }

  static GridFunction constant(const Grid& grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Quadrature weights of the grid's composite rule (Simpson needs even n).
std::vector<double> quadrature_weights(const Grid& grid);

double integrate(const GridFunction& f);

/// F(t_j) ~ integral of f over [a, t_j].
///
/// Nodes: Simpson at even nodes, Simpson followed by a 3/8 panel at odd nodes
/// (the first cell integrates the quadratic through nodes 0..2, so it is exact
/// for quadratics like every other node).
/// Midpoints: f is read as a cell-wise constant, so F(t_j) = h (sum_{i<j} f_i + f_j / 2).
GridFunction cumulative_integral(const GridFunction& f);

double sup_norm(const GridFunction& f);
double l2_norm(const GridFunction& f);

/// Distances built on the same kernels as the norms (grids must match).
double sup_distance(const GridFunction& f, const GridFunction& g);
double l2_distance(const GridFunction& f, const GridFunction& g);

/// Bisection for a nondecreasing g with g(lo) <= target <= g(hi).
///
/// Halves the bracket until its width is at most tol/4 (so the returned
/// midpoint is within tol/8 of a root) and |g(r) - target| <= tol. For g
/// with Lipschitz constant <= 8 this takes at most ceil(log2((hi-lo)/tol)) + 2
/// steps; steeper maps keep halving down to floating-point resolution.
double bracket_root(const std::function<double(double)>& g, double target, double lo, double hi,
                    double tol);

/// Gamma function for x > 0.
double gamma(double x);

/// E_q(z) = sum_k z^k / Gamma(q k + 1) for 0 < q <= 1, |z| <= 30.
double mittag_leffler(double q, double z, double tol);

}  // namespace coincidia::numerics
