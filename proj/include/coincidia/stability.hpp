#pragma once

// Comparison functions phi (nondecreasing, phi(r) = 0 iff r = 0) and the
// generalized Ulam-Hyers radius psi(eps) = phi^{-1}(eps).

#include <functional>
#include <string>

namespace coincidia::stability {

class PhiFunction {
 public:
  using Map = std::function<double(double)>;

  /// Spot-checks membership on 1000 deterministic samples of [0, 100]:
  /// phi(0) = 0, phi(r) > 0 for r > 0, nondecreasing. Throws a config error
  /// on violation. Without `upper_bracket`, inversion brackets by doubling.
  PhiFunction(std::string name, Map eval, bool strictly_increasing, Map upper_bracket = {});

  double operator()(double r) const { return eval_(r); }
  const std::string& name() const noexcept { return name_; }
  bool strictly_increasing() const noexcept { return strictly_increasing_; }

  /// A radius r with phi(r) >= eps (range error if none is found).
  double upper_bracket(double eps) const;

 private:
  std::string name_;
  Map eval_;
  bool strictly_increasing_;
  Map upper_bracket_;
};

PhiFunction identity_phi();

/// phi(t) = c t, the plain Ulam-Hyers case of a c-expansive T - S.
PhiFunction linear_phi(double c);

/// phi(t) = (1 - alpha(t)) t for a decreasing Geraghty modulus alpha with
/// values in [0, 1). `decreasing` must be true.
PhiFunction geraghty_phi(std::function<double(double)> alpha, bool decreasing);

/// psi(eps): the r with |phi(r) - eps| <= tol, psi(0) = 0.
double invert(const PhiFunction& phi, double eps, double tol);

}  // namespace coincidia::stability
