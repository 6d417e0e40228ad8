#include "raildyn/kernels.hpp"

#include <cmath>

namespace raildyn::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_add3_scalar(double c0, const double* x, double c1, const double* y,
                       double c2, const double* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c0 * x[i] + c1 * y[i] + c2 * z[i];
}

void gemv_row_scalar(const double* A, const double* x, double* y,
                     std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

std::size_t absmax_index_scalar(const double* x, std::size_t n) {
    std::size_t best = 0;
    double mag = std::fabs(x[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double m = std::fabs(x[i]);
        if (m > mag) {
            mag = m;
            best = i;
        }
    }
    return best;
}

} // namespace

const Kernels& scalar() {
    static const Kernels k{"scalar",    dot_scalar,         axpy_scalar,
                           scale_add3_scalar, gemv_row_scalar, absmax_index_scalar};
    return k;
}

} // namespace raildyn::kernels
