#include "dyadic/kernels.hpp"

namespace dyadic::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void diag_posterior_scalar(const double* gram_diag, const double* xty, double inv_sigma2,
                           double lambda, double* mean, double* var, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double precision = gram_diag[i] * inv_sigma2 + lambda;
    var[i] = 1.0 / precision;
    mean[i] = var[i] * (xty[i] * inv_sigma2);
  }
}

void affine_scalar(const double* mean, const double* scale, const double* z, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = mean[i] + scale[i] * z[i];
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::kScalar, dot_scalar, axpy_scalar, diag_posterior_scalar,
                               affine_scalar};
}  // namespace detail

}  // namespace dyadic::kernels
