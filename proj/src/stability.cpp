#include "coincidia/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "coincidia/error.hpp"
#include "coincidia/numerics.hpp"

namespace coincidia::stability {
namespace {

constexpr std::uint64_t kSpotCheckSeed = 0x9e3779b97f4a7c15ULL;

std::vector<double> spot_samples() {
  std::mt19937_64 rng(kSpotCheckSeed);
  std::vector<double> r(1000);
  for (double& x : r) x = 100.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

PhiFunction::PhiFunction(std::string name, Map eval, bool strictly_increasing, Map upper_bracket)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      strictly_increasing_(strictly_increasing),
      upper_bracket_(std::move(upper_bracket)) {
  if (!eval_) fail(ErrorKind::config, "phi '" + name_ + "' has no evaluator");
  if (eval_(0.0) != 0.0) fail(ErrorKind::config, "phi '" + name_ + "' must vanish at 0");
  double prev = 0.0;
  for (double r : spot_samples()) {
    const double v = eval_(r);
    if (!std::isfinite(v)) {
      fail(ErrorKind::config, "phi '" + name_ + "' is not finite at r = " + std::to_string(r));
    }
    if (r > 0.0 && !(v > 0.0)) {
      fail(ErrorKind::config, "phi '" + name_ + "' vanishes at r = " + std::to_string(r));
    }
    if (v < prev) {
      fail(ErrorKind::config, "phi '" + name_ + "' decreases near r = " + std::to_string(r));
    }
    prev = v;
  }
}

double PhiFunction::upper_bracket(double eps) const {
  if (upper_bracket_) {
    const double hi = upper_bracket_(eps);
    if (eval_(hi) >= eps) return hi;
  }
  double hi = 1.0;
  for (int k = 0; k < 200; ++k, hi *= 2.0) {
    if (eval_(hi) >= eps) return hi;
  }
  fail(ErrorKind::range, "phi '" + name_ + "' does not reach " + std::to_string(eps));
}

PhiFunction identity_phi() {
  return PhiFunction("identity", [](double r) { return r; }, true, [](double eps) { return eps; });
}

PhiFunction linear_phi(double c) {
  if (!(c > 0.0)) fail(ErrorKind::config, "linear phi needs c > 0");
  return PhiFunction(
      "linear", [c](double r) { return c * r; }, true, [c](double eps) { return eps / c; });
}

PhiFunction geraghty_phi(std::function<double(double)> alpha, bool decreasing) {
  if (!decreasing) {
    fail(ErrorKind::config, "the Geraghty modulus must be decreasing");
  }
  if (!alpha) fail(ErrorKind::config, "missing Geraghty modulus");
  for (double t : spot_samples()) {
    const double a = alpha(t);
    if (!(a >= 0.0 && a < 1.0)) {
      fail(ErrorKind::config, "Geraghty modulus leaves [0, 1) at t = " + std::to_string(t));
    }
  }
  return PhiFunction(
      "geraghty", [alpha = std::move(alpha)](double t) { return (1.0 - alpha(t)) * t; }, true);
}

double invert(const PhiFunction& phi, double eps, double tol) {
  if (!(eps >= 0.0)) fail(ErrorKind::domain, "phi inversion needs eps >= 0");
  if (!phi.strictly_increasing()) {
    fail(ErrorKind::config, "phi '" + phi.name() + "' is not strictly increasing");
  }
  if (eps == 0.0) return 0.0;
  const double hi = phi.upper_bracket(eps);
  return numerics::bracket_root([&phi](double r) { return phi(r); }, eps, 0.0, hi, tol);
}

}  // namespace coincidia::stability
