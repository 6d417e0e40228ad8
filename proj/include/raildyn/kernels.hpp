#pragma once

#include <cstddef>
#include <string>

namespace raildyn::kernels {

/// Dense kernels used in the solver hot loops (time-history reconstruction,
/// Newmark right-hand sides, peak scans). Each has a scalar reference
/// implementation and may have SIMD variants; all variants satisfy the same
/// contract and agree to floating-point reassociation tolerance (~1e-13
/// relative), which the equivalence tests pin down.
struct Kernels {
    const char* name;

    /// sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);

    /// y[i] += a*x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    /// out[i] = c0*x[i] + c1*y[i] + c2*z[i]
    void (*scale_add3)(double c0, const double* x, double c1, const double* y,
                       double c2, const double* z, double* out, std::size_t n);

    /// y = A*x with A row-major rows x cols; y must not alias x
    void (*gemv_row)(const double* A, const double* x, double* y,
                     std::size_t rows, std::size_t cols);

    /// index of max |x[i]|; ties resolved to the smallest index; n >= 1
    std::size_t (*absmax_index)(const double* x, std::size_t n);
};

/// Active implementation: AVX2 when the CPU supports it and the build carries
/// the AVX2 translation unit, otherwise scalar. Overridable with the
/// environment variable RAILDYN_SIMD=scalar|avx2|auto (read once, first call).
const Kernels& active();

const Kernels& scalar();

/// Null when the build or CPU cannot run AVX2.
const Kernels* avx2();

} // namespace raildyn::kernels
