#include <arm_neon.h>

#include "dyadic/kernels.hpp"

namespace dyadic::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  const float64x2_t acc = vaddq_f64(acc0, acc1);
  double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void diag_posterior_neon(const double* gram_diag, const double* xty, double inv_sigma2,
                         double lambda, double* mean, double* var, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(inv_sigma2);
  const float64x2_t vl = vdupq_n_f64(lambda);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t prec = vaddq_f64(vmulq_f64(vld1q_f64(gram_diag + i), vs), vl);
    const float64x2_t v = vdivq_f64(one, prec);
    vst1q_f64(var + i, v);
    vst1q_f64(mean + i, vmulq_f64(v, vmulq_f64(vld1q_f64(xty + i), vs)));
  }
  for (; i < n; ++i) {
    const double precision = gram_diag[i] * inv_sigma2 + lambda;
    var[i] = 1.0 / precision;
    mean[i] = var[i] * (xty[i] * inv_sigma2);
  }
}

void affine_neon(const double* mean, const double* scale, const double* z, double* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(mean + i), vmulq_f64(vld1q_f64(scale + i), vld1q_f64(z + i))));
  for (; i < n; ++i) out[i] = mean[i] + scale[i] * z[i];
}

}  // namespace

namespace detail {
const KernelTable kNeonTable{Isa::kNeon, dot_neon, axpy_neon, diag_posterior_neon, affine_neon};
}  // namespace detail

}  // namespace dyadic::kernels
