// AVX2 kernel variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here may run unless cpu_has_avx2() returned true.

#include "ebikecast/kernels.hpp"

#if EBIKECAST_HAVE_AVX2_KERNELS

#include <immintrin.h>

namespace ebikecast::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double sum(std::span<const double> x) {
    const double* p = x.data();
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += p[i];
    return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    const double* pa = a.data();
    const double* pb = b.data();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    }
    double total = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) total += pa[i] * pb[i];
    return total;
}

void scale(std::span<const double> x, double k, std::span<double> out) {
    const std::size_t n = x.size();
    const double* p = x.data();
    double* q = out.data();
    const __m256d kv = _mm256_set1_pd(k);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(q + i, _mm256_mul_pd(kv, _mm256_loadu_pd(p + i)));
    }
    for (; i < n; ++i) q[i] = k * p[i];
}

}  // namespace ebikecast::kernels::avx2

#endif  // EBIKECAST_HAVE_AVX2_KERNELS
