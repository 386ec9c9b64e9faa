#if defined(__x86_64__) || defined(_M_X64)

#include "qproc/kernels.hpp"

#include <cstring>
#include <immintrin.h>

// Complex doubles are stored interleaved [re, im], two per __m256d.
// Products use the fmaddsub pattern: with t = ai * swap(b),
// fmaddsub(ar, b, t) yields [ar*br - ai*bi, ar*bi + ai*br].

namespace qproc::kernels {
namespace {

inline __m256d swap_halves(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// Elementwise complex product of interleaved vectors.
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d ar = _mm256_movedup_pd(a);
    __m256d ai = _mm256_permute_pd(a, 0b1111);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, swap_halves(b)));
}

void matmul_avx2(Complex* c, const Complex* a, const Complex* b,
                 std::size_t m, std::size_t k, std::size_t n, bool add) {
    if (!add && m * n > 0) std::memset(c, 0, m * n * sizeof(Complex));
    const std::size_t n2 = n & ~std::size_t(1);
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t l = 0; l < k; ++l) {
            const Complex ail = a[i * k + l];
            if (ail == Complex(0.0, 0.0)) continue;
            const __m256d vr = _mm256_set1_pd(ail.real());
            const __m256d vi = _mm256_set1_pd(ail.imag());
            const double* brow = reinterpret_cast<const double*>(b + l * n);
            std::size_t j = 0;
            for (; j < n2; j += 2) {
                __m256d bv = _mm256_loadu_pd(brow + 2 * j);
                __m256d cv = _mm256_loadu_pd(crow + 2 * j);
                __m256d t = _mm256_mul_pd(vi, swap_halves(bv));
                cv = _mm256_add_pd(cv, _mm256_fmaddsub_pd(vr, bv, t));
                _mm256_storeu_pd(crow + 2 * j, cv);
            }
            if (j < n) {
                Complex* ctail = c + i * n + j;
                *ctail += ail * b[l * n + j];
            }
        }
    }
}

// Horizontal reduction of two interleaved complex partial sums.
inline Complex reduce_complex(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return Complex(out[0], out[1]);
}

void matvec_avx2(Complex* y, const Complex* a, const Complex* x,
                 std::size_t m, std::size_t n, bool add) {
    const std::size_t n2 = n & ~std::size_t(1);
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = reinterpret_cast<const double*>(a + i * n);
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j < n2; j += 2) {
            __m256d av = _mm256_loadu_pd(arow + 2 * j);
            __m256d xv = _mm256_loadu_pd(xd + 2 * j);
            acc = _mm256_add_pd(acc, cmul(av, xv));
        }
        Complex s = reduce_complex(acc);
        for (; j < n; ++j) s += a[i * n + j] * x[j];
        y[i] = add ? y[i] + s : s;
    }
}

Complex dotc_avx2(const Complex* x, const Complex* y, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d xr = _mm256_movedup_pd(xv);
        __m256d xi = _mm256_permute_pd(xv, 0b1111);
        __m256d t = _mm256_mul_pd(xi, swap_halves(yv));
        acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(xr, yv, t));
    }
    Complex s = reduce_complex(acc);
    for (; i < n; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

Complex dotu_avx2(const Complex* x, const Complex* y, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc = _mm256_add_pd(acc, cmul(xv, yv));
    }
    Complex s = reduce_complex(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(Complex* y, Complex alpha, const Complex* x, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    const __m256d vr = _mm256_set1_pd(alpha.real());
    const __m256d vi = _mm256_set1_pd(alpha.imag());
    double* yd = reinterpret_cast<double*>(y);
    const double* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        __m256d t = _mm256_mul_pd(vi, swap_halves(xv));
        yv = _mm256_add_pd(yv, _mm256_fmaddsub_pd(vr, xv, t));
        _mm256_storeu_pd(yd + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(Complex* x, Complex alpha, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    const __m256d vr = _mm256_set1_pd(alpha.real());
    const __m256d vi = _mm256_set1_pd(alpha.imag());
    double* xd = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d t = _mm256_mul_pd(vi, swap_halves(xv));
        _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(vr, xv, t));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

double norm_sq_avx2(const Complex* x, std::size_t n) {
    const std::size_t n2 = n & ~std::size_t(1);
    const double* xd = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < n2; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    alignas(32) double out[4];
    _mm256_store_pd(out, acc);
    double s = out[0] + out[1] + out[2] + out[3];
    for (; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{"avx2",      matmul_avx2, matvec_avx2,
                         dotc_avx2,   dotu_avx2,   axpy_avx2,
                         scale_avx2,  norm_sq_avx2};
    return &ops;
}

}  // namespace qproc::kernels

#endif  // x86-64
