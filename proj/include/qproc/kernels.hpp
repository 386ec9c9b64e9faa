#pragma once

#include <complex>
#include <cstddef>

// Low-level dense complex kernels. All matrices are row-major,
// contiguous, and the output never aliases an input. Each entry point
// exists as a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant; active_ops() picks one at runtime.

namespace qproc::kernels {

using Complex = std::complex<double>;

struct Ops {
    const char* name;

    // c (m x n) = a (m x k) * b (k x n); accumulates into c when add is set.
    void (*matmul)(Complex* c, const Complex* a, const Complex* b,
                   std::size_t m, std::size_t k, std::size_t n, bool add);

    // y (m) = a (m x n) * x (n)
    void (*matvec)(Complex* y, const Complex* a, const Complex* x,
                   std::size_t m, std::size_t n, bool add);

    // sum_i conj(x_i) * y_i
    Complex (*dotc)(const Complex* x, const Complex* y, std::size_t n);

    // sum_i x_i * y_i
    Complex (*dotu)(const Complex* x, const Complex* y, std::size_t n);

    // y += alpha * x
    void (*axpy)(Complex* y, Complex alpha, const Complex* x, std::size_t n);

    // x *= alpha
    void (*scale)(Complex* x, Complex alpha, std::size_t n);

    // sum_i |x_i|^2
    double (*norm_sq)(const Complex* x, std::size_t n);
};

const Ops& scalar_ops();

// nullptr when the binary lacks the AVX2 code path or the CPU does not
// support AVX2+FMA.
const Ops* avx2_ops();

// Runtime selection, overridable with QPROC_KERNELS=scalar|avx2.
const Ops& active_ops();

}  // namespace qproc::kernels
