#include <doctest.h>

#include "qproc/kernels.hpp"
#include "qproc/rng.hpp"

#include <vector>

using qproc::Rng;
using qproc::kernels::Complex;
using qproc::kernels::Ops;

namespace {

std::vector<Complex> random_vec(Rng& rng, std::size_t n) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex(rng.normal(), rng.normal());
    return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Every SIMD variant must agree with the scalar reference on the same
// inputs, including odd lengths and empty spans.
void check_equivalence(const Ops& ref, const Ops& alt) {
    Rng rng(7771);
    const std::size_t sizes[] = {0, 1, 2, 3, 5, 8, 16, 17, 33, 64};
    for (std::size_t m : {1u, 2u, 3u, 5u, 9u}) {
        for (std::size_t k : {1u, 4u, 7u}) {
            for (std::size_t n : {1u, 2u, 6u, 11u}) {
                auto a = random_vec(rng, m * k);
                auto b = random_vec(rng, k * n);
                std::vector<Complex> c1(m * n), c2(m * n);
                ref.matmul(c1.data(), a.data(), b.data(), m, k, n, false);
                alt.matmul(c2.data(), a.data(), b.data(), m, k, n, false);
                CHECK(max_diff(c1, c2) < 1e-12);

                ref.matmul(c1.data(), a.data(), b.data(), m, k, n, true);
                alt.matmul(c2.data(), a.data(), b.data(), m, k, n, true);
                CHECK(max_diff(c1, c2) < 1e-12);
            }
        }
    }
    for (std::size_t n : sizes) {
        auto x = random_vec(rng, n);
        auto y = random_vec(rng, n);
        const Complex alpha(rng.normal(), rng.normal());

        CHECK(std::abs(ref.dotc(x.data(), y.data(), n) -
                       alt.dotc(x.data(), y.data(), n)) < 1e-12);
        CHECK(std::abs(ref.dotu(x.data(), y.data(), n) -
                       alt.dotu(x.data(), y.data(), n)) < 1e-12);
        CHECK(std::abs(ref.norm_sq(x.data(), n) - alt.norm_sq(x.data(), n)) < 1e-12);

        auto y1 = y, y2 = y;
        ref.axpy(y1.data(), alpha, x.data(), n);
        alt.axpy(y2.data(), alpha, x.data(), n);
        CHECK(max_diff(y1, y2) < 1e-12);

        auto x1 = x, x2 = x;
        ref.scale(x1.data(), alpha, n);
        alt.scale(x2.data(), alpha, n);
        CHECK(max_diff(x1, x2) < 1e-12);

        if (n > 0 && n % 4 == 1) {
            // matvec with rectangular shapes
            auto a = random_vec(rng, 3 * n);
            std::vector<Complex> r1(3), r2(3);
            ref.matvec(r1.data(), a.data(), x.data(), 3, n, false);
            alt.matvec(r2.data(), a.data(), x.data(), 3, n, false);
            CHECK(max_diff(r1, r2) < 1e-12);
        }
    }
}

}  // namespace

TEST_CASE("scalar kernels: basic algebra") {
    const auto& ops = qproc::kernels::scalar_ops();
    // (1+2i) * (3-1i) = 5 + 5i
    Complex x(1.0, 2.0), y(3.0, -1.0);
    CHECK(std::abs(ops.dotu(&x, &y, 1) - Complex(5.0, 5.0)) < 1e-15);
    // conj(1+2i) * (3-1i) = 1 - 7i
    CHECK(std::abs(ops.dotc(&x, &y, 1) - Complex(1.0, -7.0)) < 1e-15);
    CHECK(ops.norm_sq(&x, 1) == doctest::Approx(5.0));

    // 2x2 identity times arbitrary matrix
    std::vector<Complex> eye = {1.0, 0.0, 0.0, 1.0};
    std::vector<Complex> m = {{1, 1}, {2, -2}, {0, 3}, {4, 0}};
    std::vector<Complex> out(4);
    ops.matmul(out.data(), eye.data(), m.data(), 2, 2, 2, false);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(out[i] - m[i]) < 1e-15);
}

TEST_CASE("avx2 kernels match scalar reference") {
    const Ops* simd = qproc::kernels::avx2_ops();
    if (!simd) {
        MESSAGE("AVX2 not available on this host; dispatch falls back to scalar");
        CHECK(std::string(qproc::kernels::active_ops().name) == "scalar");
        return;
    }
    check_equivalence(qproc::kernels::scalar_ops(), *simd);
}

TEST_CASE("active dispatch is one of the registered variants") {
    const auto& active = qproc::kernels::active_ops();
    const bool is_scalar = &active == &qproc::kernels::scalar_ops();
    const bool is_avx2 = qproc::kernels::avx2_ops() &&
                         &active == qproc::kernels::avx2_ops();
    CHECK((is_scalar || is_avx2));
}
