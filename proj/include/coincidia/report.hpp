#pragma once

#include <map>
#include <string>
#include <vector>

namespace coincidia {

/// A sampled tuple that violates an inequality, with both sides recorded.
struct Witness {
  std::string description;
  std::vector<double> sample;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of checking one hypothesis, with the constants it was judged on.
///
/// A failing report always carries a negative margin or a witness.
struct HypothesisReport {
  std::string condition;
  bool pass = true;
  std::map<std::string, double> constants;
  std::map<std::string, double> margins;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  void set_margin(const std::string& name, double value) {
    margins[name] = value;
    if (value < 0.0) pass = false;
  }

  void add_witness(Witness w) {
    witnesses.push_back(std::move(w));
    pass = false;
  }

  /// Folds another report's verdict, constants and margins in under a prefix.
  void absorb(const HypothesisReport& other, const std::string& prefix);
};

}  // namespace coincidia
