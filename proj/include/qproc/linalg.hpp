#pragma once

#include <complex>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qproc {

using Complex = std::complex<double>;

// Tolerances shared across the toolkit.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kPsdFloor = -1e-9;
inline constexpr double kStateNormTol = 1e-12;

// Principal-logarithm failure: an eigenvalue sits on the branch cut
// (negative real axis / zero) or the eigenvector basis is too
// ill-conditioned to trust the result.
struct LogBranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The tomography input design induces a numerically singular system.
struct SingularDesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }
    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    double one_norm() const;  // max column sum of |entry|

    bool all_finite() const;
    double hermiticity_error() const;  // max |A - A^dagger| entrywise
    bool is_hermitian(double tol = kHermitianTol) const {
        return is_square() && hermiticity_error() <= tol;
    }
    double unitarity_error() const;  // max |A^dagger A - I| entrywise
    bool is_unitary(double tol = kUnitaryTol) const {
        return is_square() && unitarity_error() <= tol;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        return a += b;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        return a -= b;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    friend std::vector<Complex> operator*(const ComplexMatrix& a,
                                          const std::vector<Complex>& x);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::size_t dim) : amplitudes_(dim) {}
    explicit StateVector(std::vector<Complex> amplitudes);

    static StateVector basis_state(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    Complex& operator[](std::size_t i) { return amplitudes_[i]; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    std::vector<Complex>& amplitudes() { return amplitudes_; }

    double norm() const;
    bool is_normalized(double tol = kStateNormTol) const;
    void normalize();

    // |psi><psi|
    ComplexMatrix projector() const;
    StateVector tensor(const StateVector& other) const;
    Complex inner(const StateVector& other) const;  // <this|other>

  private:
    std::vector<Complex> amplitudes_;
};

// Carrier for (possibly sub-normalized or noisy) states. Construction
// checks shape and finiteness only; physical-state invariants are
// available through the check methods so that noisy tomography results
// remain representable.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(ComplexMatrix m);
    static DensityMatrix from_state(const StateVector& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    ComplexMatrix& matrix() { return matrix_; }
    Complex& operator()(std::size_t r, std::size_t c) { return matrix_(r, c); }
    const Complex& operator()(std::size_t r, std::size_t c) const {
        return matrix_(r, c);
    }

    double trace_real() const { return matrix_.trace().real(); }
    double hermiticity_error() const { return matrix_.hermiticity_error(); }
    double min_eigenvalue() const;
    double purity() const;  // Tr[rho^2]

    bool is_physical(double herm_tol = kHermitianTol,
                     double eig_floor = kPsdFloor) const;

  private:
    ComplexMatrix matrix_;
};

// Clip negative eigenvalues to zero and rescale to the requested trace.
DensityMatrix clip_to_psd(const DensityMatrix& rho, double target_trace);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced density matrix over the subsystems in `keep` (ascending
// order); product of dims must match rho.dim.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& keep);

// Two-qubit partial transpose on the chosen qubit (0 or 1). Returned as
// a plain matrix: it is Hermitian but may be indefinite.
ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem);

struct EigHermitian {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, unitary
};

// Householder tridiagonalization + implicit-shift QL. Rejects inputs
// whose Hermiticity error exceeds kHermitianTol.
EigHermitian eig_hermitian(const ComplexMatrix& m);

struct EigGeneral {
    std::vector<Complex> eigenvalues;
    ComplexMatrix eigenvectors;        // columns, normalized
    double eigenvector_condition = 0;  // ||V||_1 * ||V^-1||_1
};

// Schur decomposition via Hessenberg + shifted QR, eigenvectors by
// back-substitution. Intended for the small (16x16) superoperators.
EigGeneral eig_general(const ComplexMatrix& m);

// exp(-i * h * t) for Hermitian h, by spectral decomposition.
ComplexMatrix matrix_exp_hermitian_generator(const ComplexMatrix& h, double t);

// Principal matrix logarithm of a diagonalizable matrix. Signals
// LogBranchError ("log-branch-failure") for spectra touching the
// negative real axis or an eigenvector condition number above 1e8.
ComplexMatrix matrix_log_principal(const ComplexMatrix& m);

// Scaling-and-squaring Taylor exponential for general (small) matrices.
ComplexMatrix matrix_exp_general(const ComplexMatrix& m);

class LuDecomposition {
  public:
    explicit LuDecomposition(ComplexMatrix m);  // throws on non-square
    bool singular() const { return singular_; }
    std::vector<Complex> solve(std::vector<Complex> rhs) const;
    ComplexMatrix solve(const ComplexMatrix& rhs) const;
    ComplexMatrix inverse() const;

  private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
};

// ||A||_1 * ||A^-1||_1; infinity for singular input.
double condition_number_1(const ComplexMatrix& m);

}  // namespace qproc
