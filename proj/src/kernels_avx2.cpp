#include "raildyn/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace raildyn::kernels {
namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i] * y[i];
    return hsum(acc) + tail;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_add3_avx2(double c0, const double* x, double c1, const double* y,
                     double c2, const double* z, double* out, std::size_t n) {
    const __m256d v0 = _mm256_set1_pd(c0);
    const __m256d v1 = _mm256_set1_pd(c1);
    const __m256d v2 = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_mul_pd(v0, _mm256_loadu_pd(x + i));
        acc = _mm256_fmadd_pd(v1, _mm256_loadu_pd(y + i), acc);
        acc = _mm256_fmadd_pd(v2, _mm256_loadu_pd(z + i), acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) out[i] = c0 * x[i] + c1 * y[i] + c2 * z[i];
}

void gemv_row_avx2(const double* A, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        double tail = 0.0;
        for (; c < cols; ++c) tail += row[c] * x[c];
        y[r] = hsum(acc) + tail;
    }
}

std::size_t absmax_index_avx2(const double* x, std::size_t n) {
    // Pass 1 finds the max magnitude; pass 2 resolves the tie contract
    // (smallest index) exactly as the scalar kernel does.
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d vmax = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        vmax = _mm256_max_pd(vmax, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
    double mag = 0.0;
    {
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vmax);
        for (double lane : lanes) mag = lane > mag ? lane : mag;
    }
    for (; i < n; ++i) {
        const double m = std::fabs(x[i]);
        mag = m > mag ? m : mag;
    }
    for (std::size_t j = 0; j < n; ++j)
        if (std::fabs(x[j]) == mag) return j;
    return 0;
}

} // namespace

const Kernels* avx2_impl();
const Kernels* avx2_impl() {
    static const Kernels k{"avx2",        dot_avx2,      axpy_avx2,
                           scale_add3_avx2, gemv_row_avx2, absmax_index_avx2};
    return &k;
}

} // namespace raildyn::kernels
