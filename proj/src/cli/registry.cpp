#include "coincidia/cli.hpp"
#include "coincidia/error.hpp"

namespace coincidia::cli {

const std::vector<ProblemEntry>& registry() {
  static const std::vector<ProblemEntry> entries = {
      {"bvp3-example",
       ProblemKind::bvp3,
       "(x''^3 + 2x'')/(x''^2 + 3) = kappa x^2/(t + t x^2) + log(t sqrt(1 + 2 e^{x'})), "
       "x(0) = 0, 10 x'(1) + x'(1/2) = 0",
       {{"kappa", 0.4, "coupling of the singular x^2 term"}},
       1000,
       5000},
      {"pendulum-Pa",
       ProblemKind::pendulum,
       "u'' - a^2 sin(u) = sin(pi t), u(0) = u(1) = 0",
       {{"a", 1.0, "pendulum constant, 0 < |a| <= 1"}},
       1000,
       200},
      {"caputo-linear",
       ProblemKind::caputo,
       "cD^q x = lf x, x(0) = x0 on [0, 1]; exact solution x0 E_q(lf t^q)",
       {{"q", 0.5, "order in (0, 1)"}, {"lf", 1.0, "coefficient, also the Lipschitz constant"},
        {"x0", 1.0, "initial value"}},
       1024,
       500},
      {"caputo-constant",
       ProblemKind::caputo,
       "cD^q x = 1, x(0) = x0 on [0, 1]; exact solution x0 + t^q / Gamma(q + 1)",
       {{"q", 0.5, "order in (0, 1)"}, {"lf", 1.0, "declared Lipschitz constant"},
        {"x0", 0.0, "initial value"}},
       1024,
       500},
      {"caputo-nonlocal",
       ProblemKind::caputo,
       "cD^q x = 0, x(0) = x0 + c1 x(t1) on [0, 1]; exact solution x0 / (1 - c1)",
       {{"q", 0.5, "order in (0, 1)"}, {"lf", 0.2, "declared Lipschitz constant of f"},
        {"x0", 1.0, "initial value"}, {"c1", 0.5, "nonlocal coefficient"},
        {"t1", 1.0, "nonlocal point in (0, 1]"}},
       1024,
       500},
  };
  return entries;
}

const ProblemEntry& find_problem(std::string_view name) {
  for (const ProblemEntry& e : registry()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const ProblemEntry& e : registry()) known += (known.empty() ? "" : ", ") + e.name;
  fail(ErrorKind::config, "unknown problem '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace coincidia::cli
