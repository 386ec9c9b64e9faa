#include <doctest.h>

#include "qproc/linalg.hpp"
#include "qproc/rng.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace qproc;
using namespace qproc::testing;

TEST_CASE("kron: identity, sigma_z x sigma_z, sigma_x x I on |00>") {
    CHECK(max_entry_diff(kron(pauli_i(), pauli_i()), ComplexMatrix::identity(4)) == 0.0);

    ComplexMatrix zz = kron(pauli_z(), pauli_z());
    const double want[4] = {1.0, -1.0, -1.0, 1.0};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const Complex expect = r == c ? Complex(want[r], 0.0) : Complex(0.0, 0.0);
            CHECK(std::abs(zz(r, c) - expect) < 1e-15);
        }

    // (sigma_x x I)|00> = |10>
    ComplexMatrix xi = kron(pauli_x(), pauli_i());
    std::vector<Complex> e00 = {1.0, 0.0, 0.0, 0.0};
    std::vector<Complex> out = xi * e00;
    CHECK(std::abs(out[2] - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(out[0]) + std::abs(out[1]) + std::abs(out[3]) < 1e-15);
}

TEST_CASE("kron: mixed product and bilinearity on random 2x2") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 2);
        ComplexMatrix c = random_matrix(rng, 2), d = random_matrix(rng, 2);
        CHECK(max_entry_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);

        // bilinearity in the first slot
        ComplexMatrix lhs = kron(a + c, b);
        ComplexMatrix rhs = kron(a, b) + kron(c, b);
        CHECK(max_entry_diff(lhs, rhs) < 1e-12);

        // associativity
        CHECK(max_entry_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
    }
}

TEST_CASE("partial_trace: product state, Bell state, trace preservation") {
    DensityMatrix rho00 = DensityMatrix::from_state(
        StateVector::basis_state(4, 0));
    DensityMatrix r0 = partial_trace(rho00, {2, 2}, {0});
    CHECK(std::abs(r0(0, 0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(r0(1, 1)) < 1e-15);

    DensityMatrix bell = DensityMatrix::from_state(bell_phi_plus());
    DensityMatrix rb = partial_trace(bell, {2, 2}, {0});
    CHECK(max_entry_diff(rb.matrix(), DensityMatrix::maximally_mixed(2).matrix()) <
          1e-15);

    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        DensityMatrix rho = random_density(rng, 8);
        DensityMatrix red = partial_trace(rho, {2, 2, 2}, {0, 2});
        CHECK(red.trace_real() == doctest::Approx(rho.trace_real()).epsilon(1e-12));
        // tracing everything yields the scalar trace
        DensityMatrix all = partial_trace(rho, {2, 2, 2}, {0, 1, 2});
        CHECK(max_entry_diff(all.matrix(), rho.matrix()) == 0.0);
    }

    CHECK_THROWS_AS(partial_trace(rho00, {2, 3}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho00, {2, 2}, {}), std::invalid_argument);
}

TEST_CASE("partial_transpose: diagonal invariance, Bell spectrum, product spectrum") {
    DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
    CHECK(max_entry_diff(partial_transpose(mixed, 0), mixed.matrix()) < 1e-15);

    DensityMatrix bell = DensityMatrix::from_state(bell_phi_plus());
    ComplexMatrix pt = partial_transpose(bell, 1);
    EigHermitian eig = eig_hermitian(pt);
    CHECK(eig.eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eig.eigenvalues[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(eig.eigenvalues[3] == doctest::Approx(0.5).epsilon(1e-12));

    // transposing one factor of a product state preserves the spectrum
    Rng rng(13);
    DensityMatrix ra = random_density(rng, 2), rb = random_density(rng, 2);
    DensityMatrix prod{kron(ra.matrix(), rb.matrix())};
    EigHermitian before = eig_hermitian(prod.matrix());
    EigHermitian after = eig_hermitian(partial_transpose(prod, 0));
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(after.eigenvalues[i] ==
              doctest::Approx(before.eigenvalues[i]).epsilon(1e-10));

    DensityMatrix wrong = DensityMatrix::maximally_mixed(2);
    CHECK_THROWS_AS(partial_transpose(wrong, 0), std::invalid_argument);
}

TEST_CASE("eig_hermitian: analytic 2x2 cases") {
    EigHermitian ez = eig_hermitian(pauli_z());
    CHECK(ez.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(ez.eigenvalues[1] == doctest::Approx(1.0));

    EigHermitian ex = eig_hermitian(pauli_x());
    CHECK(ex.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(ex.eigenvalues[1] == doctest::Approx(1.0));
    // eigenvectors (|0> -+ |1>)/sqrt(2) up to phase
    for (std::size_t k = 0; k < 2; ++k) {
        const double sign = k == 0 ? -1.0 : 1.0;
        const Complex ratio = ex.eigenvectors(1, k) / ex.eigenvectors(0, k);
        CHECK(std::abs(ratio - Complex(sign, 0.0)) < 1e-12);
    }

    ComplexMatrix not_herm(2, 2, {{0, 0}, {1, 0}, {0, 0}, {0, 0}});
    CHECK_THROWS_AS(eig_hermitian(not_herm), std::invalid_argument);
}

TEST_CASE("eig_hermitian: reconstruction and unitarity on random matrices") {
    Rng rng(14);
    for (std::size_t n : {2u, 3u, 5u, 16u, 40u}) {
        ComplexMatrix h = random_hermitian(rng, n);
        EigHermitian eig = eig_hermitian(h);
        for (std::size_t i = 0; i + 1 < n; ++i)
            CHECK(eig.eigenvalues[i] <= eig.eigenvalues[i + 1]);
        CHECK(eig.eigenvectors.unitarity_error() < 1e-9);

        ComplexMatrix w = eig.eigenvectors;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < n; ++r) w(r, k) *= eig.eigenvalues[k];
        ComplexMatrix rec = w * eig.eigenvectors.adjoint();
        CHECK(max_entry_diff(rec, h) < 1e-9);
    }
}

TEST_CASE("eig_hermitian: degenerate spectrum") {
    // diag(2, 2, -1) in a rotated basis
    Rng rng(15);
    ComplexMatrix u = random_unitary(rng, 3);
    ComplexMatrix d(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 2.0;
    d(2, 2) = -1.0;
    ComplexMatrix h = u * d * u.adjoint();
    // symmetrize roundoff
    ComplexMatrix ha = h.adjoint();
    h += ha;
    h *= Complex(0.5, 0.0);
    EigHermitian eig = eig_hermitian(h);
    CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(eig.eigenvalues[2] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(eig.eigenvectors.unitarity_error() < 1e-9);
}

TEST_CASE("matrix_exp_hermitian_generator: analytic and property checks") {
    // exp(-i sigma_x pi/2) = -i sigma_x
    ComplexMatrix u = matrix_exp_hermitian_generator(pauli_x(), M_PI / 2.0);
    ComplexMatrix want = pauli_x();
    want *= Complex(0.0, -1.0);
    CHECK(max_entry_diff(u, want) < 1e-12);

    ComplexMatrix id = matrix_exp_hermitian_generator(pauli_y(), 0.0);
    CHECK(max_entry_diff(id, ComplexMatrix::identity(2)) < 1e-15);

    Rng rng(16);
    for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix h = random_hermitian(rng, 6);
        const double t = rng.uniform(0.1, 2.0);
        ComplexMatrix fwd = matrix_exp_hermitian_generator(h, t);
        ComplexMatrix bwd = matrix_exp_hermitian_generator(h, -t);
        CHECK(fwd.unitarity_error() < 1e-9);
        CHECK(max_entry_diff(fwd * bwd, ComplexMatrix::identity(6)) < 1e-9);
    }
}

TEST_CASE("matrix_exp_general agrees with the spectral route") {
    Rng rng(17);
    ComplexMatrix h = random_hermitian(rng, 5);
    ComplexMatrix gen = h;
    gen *= Complex(0.0, -0.7);  // -i h t with t = 0.7
    CHECK(max_entry_diff(matrix_exp_general(gen),
                         matrix_exp_hermitian_generator(h, 0.7)) < 1e-11);
}

TEST_CASE("matrix_log_principal: identity, diagonal, round trip, branch cut") {
    ComplexMatrix lg = matrix_log_principal(ComplexMatrix::identity(3));
    CHECK(lg.max_abs() < 1e-12);

    ComplexMatrix d(2, 2);
    d(0, 0) = std::exp(1.0);
    d(1, 1) = std::exp(2.0);
    ComplexMatrix ld = matrix_log_principal(d);
    CHECK(std::abs(ld(0, 0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(ld(1, 1) - Complex(2.0, 0.0)) < 1e-12);
    CHECK(std::abs(ld(0, 1)) < 1e-12);

    Rng rng(18);
    for (int trial = 0; trial < 5; ++trial) {
        // well-conditioned: identity plus a small random perturbation
        ComplexMatrix m = ComplexMatrix::identity(5);
        ComplexMatrix pert = random_matrix(rng, 5);
        pert *= Complex(0.1, 0.0);
        m += pert;
        ComplexMatrix lm = matrix_log_principal(m);
        CHECK(max_entry_diff(matrix_exp_general(lm), m) < 1e-8);
    }

    ComplexMatrix neg(2, 2);
    neg(0, 0) = 1.0;
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(matrix_log_principal(neg), LogBranchError);
    try {
        matrix_log_principal(neg);
    } catch (const LogBranchError& e) {
        CHECK(std::string(e.what()).find("log-branch-failure") != std::string::npos);
    }
}

TEST_CASE("eig_general: residual on random matrices and defective guard") {
    Rng rng(19);
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        ComplexMatrix a = random_matrix(rng, n);
        EigGeneral eig = eig_general(a);
        // A v_k = lambda_k v_k
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Complex> v(n);
            for (std::size_t r = 0; r < n; ++r) v[r] = eig.eigenvectors(r, k);
            std::vector<Complex> av = a * v;
            double resid = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                resid = std::max(resid, std::abs(av[r] - eig.eigenvalues[k] * v[r]));
            CHECK(resid < 1e-8);
        }
        CHECK(eig.eigenvector_condition < 1e6);  // random matrices are well-behaved
    }

    // Jordan block: eigenvector matrix condition must blow up
    ComplexMatrix jordan(2, 2);
    jordan(0, 0) = 1.0;
    jordan(0, 1) = 1.0;
    jordan(1, 1) = 1.0;
    EigGeneral ej = eig_general(jordan);
    CHECK(ej.eigenvector_condition > 1e8);
}

TEST_CASE("LU: solve, inverse, singularity, condition number") {
    Rng rng(20);
    ComplexMatrix a = random_matrix(rng, 16);
    LuDecomposition lu(a);
    CHECK(!lu.singular());

    std::vector<Complex> b(16);
    for (auto& z : b) z = Complex(rng.normal(), rng.normal());
    std::vector<Complex> x = lu.solve(b);
    std::vector<Complex> ax = a * x;
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(ax[i] - b[i]) < 1e-10);

    CHECK(max_entry_diff(a * lu.inverse(), ComplexMatrix::identity(16)) < 1e-10);

    ComplexMatrix sing(3, 3);  // rank 1
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) sing(r, c) = 1.0;
    CHECK(LuDecomposition(sing).singular());
    CHECK(std::isinf(condition_number_1(sing)));
    CHECK(condition_number_1(ComplexMatrix::identity(4)) == doctest::Approx(1.0));
}

TEST_CASE("DensityMatrix: physicality checks and PSD clipping") {
    DensityMatrix good = DensityMatrix::maximally_mixed(4);
    CHECK(good.is_physical());
    CHECK(good.purity() == doctest::Approx(0.25));

    // slightly negative eigenvalue from synthetic noise
    ComplexMatrix m = good.matrix();
    m(0, 0) = Complex(-0.05, 0.0);
    m(1, 1) = Complex(0.55, 0.0);
    DensityMatrix noisy{m};
    CHECK(!noisy.is_physical());
    DensityMatrix clipped = clip_to_psd(noisy, 1.0);
    CHECK(clipped.is_physical());
    CHECK(clipped.trace_real() == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix bad(2, 2);
    bad(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);
}
