#include "coincidia/report.hpp"

#include "coincidia/error.hpp"

namespace coincidia {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
      return "config";
    case ErrorKind::domain:
      return "domain";
    case ErrorKind::numeric:
      return "numeric";
    case ErrorKind::bracket:
      return "bracket";
    case ErrorKind::range:
      return "range";
    case ErrorKind::certificate:
      return "certificate";
    case ErrorKind::inner_convergence:
      return "inner_convergence";
  }
  return "unknown";
}

void HypothesisReport::absorb(const HypothesisReport& other, const std::string& prefix) {
  for (const auto& [k, v] : other.constants) constants[prefix + k] = v;
  for (const auto& [k, v] : other.margins) margins[prefix + k] = v;
  for (const auto& w : other.witnesses) witnesses.push_back(w);
  for (const auto& n : other.notes) notes.push_back(prefix + n);
  pass = pass && other.pass;
}

}  // namespace coincidia
