#pragma once

#include "qproc/linalg.hpp"
#include "qproc/rng.hpp"

namespace qproc::testing {

inline ComplexMatrix pauli_i() { return ComplexMatrix::identity(2); }

inline ComplexMatrix pauli_x() {
    return ComplexMatrix(2, 2, {{0, 0}, {1, 0}, {1, 0}, {0, 0}});
}

inline ComplexMatrix pauli_y() {
    return ComplexMatrix(2, 2, {{0, 0}, {0, -1}, {0, 1}, {0, 0}});
}

inline ComplexMatrix pauli_z() {
    return ComplexMatrix(2, 2, {{1, 0}, {0, 0}, {0, 0}, {-1, 0}});
}

inline ComplexMatrix random_matrix(Rng& rng, std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex(rng.normal(), rng.normal());
    return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
    ComplexMatrix g = random_matrix(rng, n);
    ComplexMatrix h = g.adjoint();
    h += g;
    h *= Complex(0.5, 0.0);
    return h;
}

// Unit-trace positive semidefinite matrix, G G^dagger / Tr.
inline DensityMatrix random_density(Rng& rng, std::size_t n) {
    ComplexMatrix g = random_matrix(rng, n);
    ComplexMatrix p = g * g.adjoint();
    const double tr = p.trace().real();
    p *= Complex(1.0 / tr, 0.0);
    return DensityMatrix(std::move(p));
}

inline StateVector random_state(Rng& rng, std::size_t n) {
    StateVector psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = Complex(rng.normal(), rng.normal());
    psi.normalize();
    return psi;
}

// Haar-ish unitary via Gram-Schmidt on a Gaussian matrix (two passes).
inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
    ComplexMatrix g = random_matrix(rng, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < c; ++prev) {
                Complex overlap(0.0, 0.0);
                for (std::size_t r = 0; r < n; ++r)
                    overlap += std::conj(g(r, prev)) * g(r, c);
                for (std::size_t r = 0; r < n; ++r) g(r, c) -= overlap * g(r, prev);
            }
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < n; ++r) nrm += std::norm(g(r, c));
        nrm = std::sqrt(nrm);
        for (std::size_t r = 0; r < n; ++r) g(r, c) /= nrm;
    }
    return g;
}

inline StateVector bell_phi_plus() {
    StateVector s(4);
    s[0] = 1.0 / std::sqrt(2.0);
    s[3] = 1.0 / std::sqrt(2.0);
    return s;
}

inline double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

// diag(1, 1, 1, -1): the controlled-phase gate used throughout.
inline ComplexMatrix ideal_gate() {
    ComplexMatrix u = ComplexMatrix::identity(4);
    u(3, 3) = -1.0;
    return u;
}

// A random trace-preserving channel as a Kraus set, with direct action
// kept available as an oracle independent of the transfer-operator path.
struct KrausChannel {
    std::vector<ComplexMatrix> kraus;

    DensityMatrix apply(const DensityMatrix& rho) const {
        ComplexMatrix out(4, 4);
        for (const ComplexMatrix& a : kraus) out += a * rho.matrix() * a.adjoint();
        return DensityMatrix(std::move(out));
    }
};

inline KrausChannel random_kraus_channel(Rng& rng, std::size_t n_ops) {
    KrausChannel ch;
    std::vector<ComplexMatrix> raw;
    ComplexMatrix s(4, 4);
    for (std::size_t k = 0; k < n_ops; ++k) {
        raw.push_back(random_matrix(rng, 4));
        s += raw.back().adjoint() * raw.back();
    }
    // normalize: A_k <- A_k s^{-1/2} so that sum A^H A = I
    EigHermitian eig = eig_hermitian(s);
    ComplexMatrix inv_sqrt(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        const double w = 1.0 / std::sqrt(eig.eigenvalues[k]);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                inv_sqrt(r, c) += w * eig.eigenvectors(r, k) *
                                  std::conj(eig.eigenvectors(c, k));
    }
    for (ComplexMatrix& a : raw) ch.kraus.push_back(a * inv_sqrt);
    return ch;
}

}  // namespace qproc::testing
