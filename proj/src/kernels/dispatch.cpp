#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "coincidia/error.hpp"
#include "tables.hpp"

namespace coincidia::kernels {
namespace {

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(COINCIDIA_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(COINCIDIA_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("COINCIDIA_ISA")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa) && cpu_supports(isa)) return isa;
    }
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const KernelTable& current() { return table_for(active().load(std::memory_order_relaxed)); }

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorKind::config, "kernel operands differ in length");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

Isa detected_isa() noexcept {
  if (cpu_supports(Isa::avx2)) return Isa::avx2;
  if (cpu_supports(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!cpu_supports(isa)) {
    fail(ErrorKind::config, "instruction set '" + std::string(isa_name(isa)) + "' is not available");
  }
  active().store(isa, std::memory_order_relaxed);
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#if defined(COINCIDIA_HAVE_AVX2)
    case Isa::avx2:
      if (cpu_supports(isa)) return avx2::table;
      break;
#endif
#if defined(COINCIDIA_HAVE_NEON)
    case Isa::neon:
      return neon::table;
#endif
    default:
      break;
  }
  return scalar::table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size());
  return current().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return current().sum(a.data(), a.size()); }

double max_abs(std::span<const double> a) { return current().max_abs(a.data(), a.size()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size());
  return current().max_abs_diff(a.data(), b.data(), a.size());
}

double weighted_sum_sq(std::span<const double> w, std::span<const double> a) {
  require_same_length(w.size(), a.size());
  return current().weighted_sum_sq(w.data(), a.data(), a.size());
}

double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b) {
  require_same_length(w.size(), a.size());
  require_same_length(a.size(), b.size());
  return current().weighted_sq_diff(w.data(), a.data(), b.data(), a.size());
}

void average(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  require_same_length(a.size(), b.size());
  require_same_length(a.size(), out.size());
  current().average(a.data(), b.data(), out.data(), a.size());
}

}  // namespace coincidia::kernels
