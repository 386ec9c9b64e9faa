#include "qproc/kernels.hpp"

#include <cstring>

namespace qproc::kernels {
namespace {

void matmul_scalar(Complex* c, const Complex* a, const Complex* b,
                   std::size_t m, std::size_t k, std::size_t n, bool add) {
    if (!add && m * n > 0) std::memset(c, 0, m * n * sizeof(Complex));
    for (std::size_t i = 0; i < m; ++i) {
        Complex* crow = c + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const Complex ail = a[i * k + l];
            if (ail == Complex(0.0, 0.0)) continue;
            const Complex* brow = b + l * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
        }
    }
}

void matvec_scalar(Complex* y, const Complex* a, const Complex* x,
                   std::size_t m, std::size_t n, bool add) {
    for (std::size_t i = 0; i < m; ++i) {
        Complex acc(0.0, 0.0);
        const Complex* arow = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += arow[j] * x[j];
        y[i] = add ? y[i] + acc : acc;
    }
}

Complex dotc_scalar(const Complex* x, const Complex* y, std::size_t n) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

Complex dotu_scalar(const Complex* x, const Complex* y, std::size_t n) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(Complex* y, Complex alpha, const Complex* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(Complex* x, Complex alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double norm_sq_scalar(const Complex* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar",    matmul_scalar, matvec_scalar,
                         dotc_scalar, dotu_scalar,   axpy_scalar,
                         scale_scalar, norm_sq_scalar};
    return ops;
}

}  // namespace qproc::kernels
