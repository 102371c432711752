// Compiled with -mavx2. Only raw pointers and intrinsics here: no inline
// std:: templates may be instantiated with AVX2 codegen in this unit.
#include <immintrin.h>

#include "dyadic/kernels.hpp"

namespace dyadic::kernels {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void diag_posterior_avx2(const double* gram_diag, const double* xty, double inv_sigma2,
                         double lambda, double* mean, double* var, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(inv_sigma2);
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prec = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(gram_diag + i), vs), vl);
    const __m256d v = _mm256_div_pd(one, prec);
    _mm256_storeu_pd(var + i, v);
    _mm256_storeu_pd(mean + i, _mm256_mul_pd(v, _mm256_mul_pd(_mm256_loadu_pd(xty + i), vs)));
  }
  for (; i < n; ++i) {
    const double precision = gram_diag[i] * inv_sigma2 + lambda;
    var[i] = 1.0 / precision;
    mean[i] = var[i] * (xty[i] * inv_sigma2);
  }
}

void affine_avx2(const double* mean, const double* scale, const double* z, double* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(scale + i), _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(mean + i), t));
  }
  for (; i < n; ++i) out[i] = mean[i] + scale[i] * z[i];
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::kAvx2, dot_avx2, axpy_avx2, diag_posterior_avx2, affine_avx2};
}  // namespace detail

}  // namespace dyadic::kernels
