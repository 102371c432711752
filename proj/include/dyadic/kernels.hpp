#pragma once

// Vector kernels behind the regression and policy code. Every kernel has a
// scalar reference implementation; AVX2 (x86-64) and NEON (aarch64) variants
// are compiled when the target supports them and picked at runtime.
//
// Elementwise kernels (axpy, diag_posterior, affine) are bitwise identical
// across variants. dot() reassociates the sum in the SIMD variants and agrees
// with the scalar reference only up to rounding.
//
// Set DYADIC_SIMD=scalar in the environment to force the reference kernels.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace dyadic::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // var = 1 / (gram * inv_sigma2 + lambda); mean = var * (xty * inv_sigma2)
  void (*diag_posterior)(const double* gram_diag, const double* xty, double inv_sigma2,
                         double lambda, double* mean, double* var, std::size_t n);
  // out = mean + scale * z
  void (*affine)(const double* mean, const double* scale, const double* z, double* out,
                 std::size_t n);
};

const KernelTable& active();

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* table_for(Isa isa);

std::vector<Isa> available_isas();

std::string_view isa_name(Isa isa);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

}  // namespace dyadic::kernels
