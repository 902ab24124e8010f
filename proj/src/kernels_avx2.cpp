// AVX2+FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma in
// its own translation unit; callers reach it only through the runtime dispatch
// in kernels.cpp, so the rest of the library stays baseline-ISA.

#include "opm/kernels.hpp"

#ifdef OPM_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <limits>

namespace opm::kernels::avx2 {

namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, shuf));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double max_dot(const PointBlock& pts, const double* dir) {
    if (pts.count() == 0) return -std::numeric_limits<double>::infinity();
    const std::size_t dim = pts.dim();
    const std::size_t padded = pts.padded();
    __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < padded; j += 4) {
        __m256d s = _mm256_setzero_pd();
        for (std::size_t d = 0; d < dim; ++d)
            s = _mm256_fmadd_pd(_mm256_set1_pd(dir[d]), _mm256_loadu_pd(pts.lane(d) + j), s);
        best = _mm256_max_pd(best, s);
    }
    return hmax(best);
}

}  // namespace opm::kernels::avx2

#endif  // OPM_HAVE_AVX2_KERNELS
