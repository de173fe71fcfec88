#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coincidia {

enum class ErrorKind {
  config,             // invalid parameters or problem setup
  domain,             // argument outside a function's mathematical domain
  numeric,            // non-finite value, divergence, failed oracle
  bracket,            // root not bracketed
  range,              // value outside the range of a monotone map
  certificate,        // contraction/hypothesis certificate failed
  inner_convergence,  // inner iteration of the resolvent scheme did not settle
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace coincidia
