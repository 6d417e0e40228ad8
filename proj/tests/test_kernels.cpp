#include "raildyn/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace raildyn;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

} // namespace

TEST_CASE("scalar dot matches plain accumulation") {
    std::mt19937 rng(11);
    const auto& k = kernels::scalar();
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                          std::size_t{17}, std::size_t{256}, std::size_t{1001}}) {
        const auto x = random_vec(rng, n), y = random_vec(rng, n);
        double ref = 0.0;
        for (std::size_t i = 0; i < n; ++i) ref += x[i] * y[i];
        CHECK(k.dot(x.data(), y.data(), n) == doctest::Approx(ref).epsilon(1e-14));
    }
}

TEST_CASE("scalar axpy and scale_add3 match element-wise reference") {
    std::mt19937 rng(12);
    const auto& k = kernels::scalar();
    const std::size_t n = 37;
    const auto x = random_vec(rng, n), y0 = random_vec(rng, n), z = random_vec(rng, n);

    auto y = y0;
    k.axpy(2.5, x.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(y0[i] + 2.5 * x[i]));

    std::vector<double> out(n);
    k.scale_add3(1.5, x.data(), -0.5, y0.data(), 3.0, z.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(out[i] == doctest::Approx(1.5 * x[i] - 0.5 * y0[i] + 3.0 * z[i]));
}

TEST_CASE("scalar gemv_row matches the naive double loop") {
    std::mt19937 rng(13);
    const auto& k = kernels::scalar();
    for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1},
                              {3, 7},
                              {8, 8},
                              {5, 1},
                              {1, 9},
                              {17, 33}}) {
        const auto A = random_vec(rng, rows * cols);
        const auto x = random_vec(rng, cols);
        std::vector<double> y(rows);
        k.gemv_row(A.data(), x.data(), y.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            double ref = 0.0;
            for (std::size_t c = 0; c < cols; ++c) ref += A[r * cols + c] * x[c];
            CHECK(y[r] == doctest::Approx(ref).epsilon(1e-13));
        }
    }
}

TEST_CASE("absmax_index finds the largest magnitude, ties to the smallest index") {
    const auto& k = kernels::scalar();

    const double single[] = {-4.0};
    CHECK(k.absmax_index(single, 1) == 0);

    const double tie[] = {1.0, -3.0, 3.0, -3.0};
    CHECK(k.absmax_index(tie, 4) == 1);

    const double neg[] = {0.5, -9.0, 8.5, 0.0};
    CHECK(k.absmax_index(neg, 4) == 1);

    std::vector<double> long_tail(300, 0.25);
    long_tail[257] = -0.26;
    CHECK(k.absmax_index(long_tail.data(), long_tail.size()) == 257);
}

TEST_CASE("avx2 variant agrees with scalar within reassociation tolerance") {
    const kernels::Kernels* v = kernels::avx2();
    if (!v) {
        MESSAGE("AVX2 unavailable on this host; skipping equivalence checks");
        return;
    }
    const auto& s = kernels::scalar();
    std::mt19937 rng(14);

    for (std::size_t n = 1; n <= 130; n += 7) {
        const auto x = random_vec(rng, n), y = random_vec(rng, n), z = random_vec(rng, n);
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);

        CHECK(std::abs(v->dot(x.data(), y.data(), n) - s.dot(x.data(), y.data(), n)) <=
              1e-13 * (scale + 1.0));

        auto ys = y, yv = y;
        s.axpy(-1.75, x.data(), ys.data(), n);
        v->axpy(-1.75, x.data(), yv.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(yv[i] == doctest::Approx(ys[i]));

        std::vector<double> os(n), ov(n);
        s.scale_add3(0.3, x.data(), 1.1, y.data(), -2.2, z.data(), os.data(), n);
        v->scale_add3(0.3, x.data(), 1.1, y.data(), -2.2, z.data(), ov.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ov[i] == doctest::Approx(os[i]));

        CHECK(v->absmax_index(x.data(), n) == s.absmax_index(x.data(), n));
    }

    for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{4, 4},
                              {7, 13},
                              {16, 16},
                              {31, 64}}) {
        const auto A = random_vec(rng, rows * cols);
        const auto x = random_vec(rng, cols);
        std::vector<double> ys(rows), yv(rows);
        s.gemv_row(A.data(), x.data(), ys.data(), rows, cols);
        v->gemv_row(A.data(), x.data(), yv.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            CHECK(yv[r] == doctest::Approx(ys[r]).epsilon(1e-13));
    }
}

TEST_CASE("avx2 tie-breaking matches the scalar contract exactly") {
    const kernels::Kernels* v = kernels::avx2();
    if (!v) return;

    // Equal-magnitude entries across lane boundaries must still resolve to
    // the first occurrence.
    for (std::size_t n : {std::size_t{5}, std::size_t{8}, std::size_t{9},
                          std::size_t{64}, std::size_t{67}}) {
        std::vector<double> x(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2) ? -1.0 : 1.0;
        CHECK(v->absmax_index(x.data(), n) == 0);
        x[n / 2] = -2.0;
        x[n - 1] = 2.0;
        CHECK(v->absmax_index(x.data(), n) == n / 2);
    }
}

TEST_CASE("active kernels are one of the registered implementations") {
    const std::string name = kernels::active().name;
    CHECK((name == "scalar" || name == "avx2"));
}
