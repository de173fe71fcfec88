#pragma once

// Data-parallel inner loops used by quadrature, norms and the Volterra
// convolution. Every kernel has a scalar reference implementation; SIMD
// variants (AVX2+FMA on x86-64, NEON on aarch64) are picked once at runtime.
// Set COINCIDIA_ISA=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace coincidia::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set supported by both the build and the running CPU.
Isa detected_isa() noexcept;

/// The instruction set currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Switch the dispatch table. Throws a config error if `isa` is unavailable.
void force_isa(Isa isa);

/// Every ISA usable on this machine, scalar first.
std::vector<Isa> available_isas();

// Dispatching entry points. Span arguments must have equal lengths.
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double max_abs(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// sum_i w_i * a_i^2
double weighted_sum_sq(std::span<const double> w, std::span<const double> a);
/// sum_i w_i * (a_i - b_i)^2
double weighted_sq_diff(std::span<const double> w, std::span<const double> a,
                        std::span<const double> b);
/// out_i = (a_i + b_i) / 2
void average(std::span<const double> a, std::span<const double> b, std::span<double> out);

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
  double (*weighted_sum_sq)(const double*, const double*, std::size_t);
  double (*weighted_sq_diff)(const double*, const double*, const double*, std::size_t);
  void (*average)(const double*, const double*, double*, std::size_t);
};

/// Direct access to one ISA's table (used by the equivalence tests).
const KernelTable& table_for(Isa isa);

}  // namespace coincidia::kernels
