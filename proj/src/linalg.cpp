#include "qproc/linalg.hpp"

#include "qproc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qproc {

namespace {
const kernels::Ops& ops() { return kernels::active_ops(); }
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t(0.0, 0.0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    return std::sqrt(ops().norm_sq(data_.data(), data_.size()));
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::one_norm() const {
    double best = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) s += std::abs((*this)(r, c));
        best = std::max(best, s);
    }
    return best;
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double ComplexMatrix::hermiticity_error() const {
    if (!is_square()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
}

double ComplexMatrix::unitarity_error() const {
    if (!is_square()) return std::numeric_limits<double>::infinity();
    ComplexMatrix g = adjoint() * (*this);
    for (std::size_t i = 0; i < rows_; ++i) g(i, i) -= 1.0;
    return g.max_abs();
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix add: shape mismatch");
    ops().axpy(data_.data(), Complex(1.0, 0.0), rhs.data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix subtract: shape mismatch");
    ops().axpy(data_.data(), Complex(-1.0, 0.0), rhs.data_.data(), data_.size());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    ops().scale(data_.data(), s, data_.size());
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    ops().matmul(c.data(), a.data(), b.data(), a.rows(), a.cols(), b.cols(), false);
    return c;
}

std::vector<Complex> operator*(const ComplexMatrix& a, const std::vector<Complex>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<Complex> y(a.rows());
    ops().matvec(y.data(), a.data(), x.data(), a.rows(), a.cols(), false);
    return y;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes)
    : amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis_state(std::size_t dim, std::size_t index) {
    StateVector s(dim);
    s[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    return std::sqrt(ops().norm_sq(amplitudes_.data(), amplitudes_.size()));
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(ops().norm_sq(amplitudes_.data(), amplitudes_.size()) - 1.0) <= tol;
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
    ops().scale(amplitudes_.data(), Complex(1.0 / n, 0.0), amplitudes_.size());
}

ComplexMatrix StateVector::projector() const {
    const std::size_t d = dim();
    ComplexMatrix p(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            p(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
    return p;
}

StateVector StateVector::tensor(const StateVector& other) const {
    StateVector out(dim() * other.dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < other.dim(); ++j)
            out[i * other.dim() + j] = amplitudes_[i] * other[j];
    return out;
}

Complex StateVector::inner(const StateVector& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("inner: dim mismatch");
    return ops().dotc(amplitudes_.data(), other.amplitudes().data(), dim());
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
    if (!matrix_.is_square())
        throw std::invalid_argument("DensityMatrix: matrix must be square");
    if (!matrix_.all_finite())
        throw std::invalid_argument("DensityMatrix: non-finite entries");
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
    // Symmetrize first so that slightly non-Hermitian (noisy) inputs
    // still yield a usable diagnostic.
    ComplexMatrix h = matrix_;
    ComplexMatrix ha = matrix_.adjoint();
    h += ha;
    h *= Complex(0.5, 0.0);
    return eig_hermitian(h).eigenvalues.front();
}

double DensityMatrix::purity() const {
    double s = 0.0;
    const std::size_t d = dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            // Tr[rho^2] = sum_{rc} rho_rc rho_cr
            Complex v = matrix_(r, c) * matrix_(c, r);
            s += v.real();
        }
    return s;
}

bool DensityMatrix::is_physical(double herm_tol, double eig_floor) const {
    if (hermiticity_error() > herm_tol) return false;
    double tr = trace_real();
    if (std::abs(matrix_.trace().imag()) > herm_tol) return false;
    if (tr < -herm_tol || tr > 1.0 + 1e-10) return false;
    return min_eigenvalue() >= eig_floor;
}

DensityMatrix clip_to_psd(const DensityMatrix& rho, double target_trace) {
    ComplexMatrix h = rho.matrix();
    ComplexMatrix ha = h.adjoint();
    h += ha;
    h *= Complex(0.5, 0.0);
    EigHermitian eig = eig_hermitian(h);
    const std::size_t d = rho.dim();
    double clipped_trace = 0.0;
    for (double& lam : eig.eigenvalues) {
        lam = std::max(lam, 0.0);
        clipped_trace += lam;
    }
    double scale = clipped_trace > 0.0 ? target_trace / clipped_trace : 0.0;
    ComplexMatrix out(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        double w = eig.eigenvalues[k] * scale;
        if (w == 0.0) continue;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                out(r, c) += w * eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
    }
    return DensityMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Tensor-structure operations

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex f = a(ar, ac);
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = f * b(br, bc);
        }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::size_t>& dims,
                            const std::set<std::size_t>& keep) {
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t(1), std::multiplies<>());
    if (total != rho.dim())
        throw std::invalid_argument("partial_trace: subsystem dims do not match matrix");
    if (keep.empty() || *keep.rbegin() >= dims.size())
        throw std::invalid_argument("partial_trace: invalid keep set");

    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t s = dims.size(); s-- > 1;)
        strides[s - 1] = strides[s] * dims[s];

    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::vector<std::size_t> traced;
    for (std::size_t s = 0; s < dims.size(); ++s)
        if (!keep.count(s)) traced.push_back(s);

    std::size_t out_dim = 1;
    for (std::size_t s : kept) out_dim *= dims[s];
    std::size_t traced_dim = 1;
    for (std::size_t s : traced) traced_dim *= dims[s];

    auto offset = [&](const std::vector<std::size_t>& subsystems, std::size_t flat) {
        std::size_t off = 0;
        for (std::size_t s = subsystems.size(); s-- > 0;) {
            std::size_t d = dims[subsystems[s]];
            off += (flat % d) * strides[subsystems[s]];
            flat /= d;
        }
        return off;
    };

    ComplexMatrix out(out_dim, out_dim);
    for (std::size_t kr = 0; kr < out_dim; ++kr) {
        const std::size_t row_base = offset(kept, kr);
        for (std::size_t kc = 0; kc < out_dim; ++kc) {
            const std::size_t col_base = offset(kept, kc);
            Complex acc(0.0, 0.0);
            for (std::size_t t = 0; t < traced_dim; ++t) {
                const std::size_t toff = offset(traced, t);
                acc += rho(row_base + toff, col_base + toff);
            }
            out(kr, kc) = acc;
        }
    }
    return DensityMatrix(std::move(out));
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, std::size_t subsystem) {
    if (rho.dim() != 4)
        throw std::invalid_argument("partial_transpose: expected a 4x4 two-qubit state");
    if (subsystem > 1)
        throw std::invalid_argument("partial_transpose: subsystem must be 0 or 1");
    ComplexMatrix out(4, 4);
    for (std::size_t a1 = 0; a1 < 2; ++a1)
        for (std::size_t a2 = 0; a2 < 2; ++a2)
            for (std::size_t b1 = 0; b1 < 2; ++b1)
                for (std::size_t b2 = 0; b2 < 2; ++b2) {
                    std::size_t r = 2 * a1 + a2, c = 2 * b1 + b2;
                    std::size_t sr = subsystem == 0 ? 2 * b1 + a2 : 2 * a1 + b2;
                    std::size_t sc = subsystem == 0 ? 2 * a1 + b2 : 2 * b1 + a2;
                    out(r, c) = rho(sr, sc);
                }
    return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver: Householder tridiagonalization, phase
// normalization of the subdiagonal, then implicit-shift QL with
// accumulated rotations.

namespace {

struct Tridiagonal {
    std::vector<double> d;  // diagonal
    std::vector<double> e;  // subdiagonal, e[i] between i and i+1; e[n-1] = 0
    ComplexMatrix q;        // accumulated unitary
};

Tridiagonal tridiagonalize(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    ComplexMatrix w = a;
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> v(n), p(n), qc(n), vc(n), hv(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t nb = n - k - 1;
        double xnorm_sq = 0.0;
        for (std::size_t r = 0; r < nb; ++r) xnorm_sq += std::norm(w(k + 1 + r, k));
        const double xnorm = std::sqrt(xnorm_sq);
        if (xnorm <= 1e-300) continue;

        const Complex x0 = w(k + 1, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
        const Complex alpha = -phase * xnorm;

        for (std::size_t r = 0; r < nb; ++r) v[r] = w(k + 1 + r, k);
        v[0] -= alpha;
        double vnorm = std::sqrt(ops().norm_sq(v.data(), nb));
        if (vnorm <= 1e-300) continue;
        ops().scale(v.data(), Complex(1.0 / vnorm, 0.0), nb);
        for (std::size_t r = 0; r < nb; ++r) vc[r] = std::conj(v[r]);

        // Two-sided Householder update of the trailing block:
        // B <- B - v q^H - q v^H with p = 2 B v and q = p - (v^H p) v.
        for (std::size_t r = 0; r < nb; ++r)
            p[r] = 2.0 * ops().dotu(&w(k + 1 + r, k + 1), v.data(), nb);
        const Complex kappa = ops().dotc(v.data(), p.data(), nb);
        for (std::size_t r = 0; r < nb; ++r) {
            p[r] -= kappa * v[r];
            qc[r] = std::conj(p[r]);
        }
        for (std::size_t r = 0; r < nb; ++r) {
            Complex* row = &w(k + 1 + r, k + 1);
            ops().axpy(row, -v[r], qc.data(), nb);
            ops().axpy(row, -p[r], vc.data(), nb);
        }

        w(k + 1, k) = alpha;
        w(k, k + 1) = std::conj(alpha);
        for (std::size_t r = k + 2; r < n; ++r) {
            w(r, k) = 0.0;
            w(k, r) = 0.0;
        }

        // Q <- Q P, restricted to columns k+1..n-1.
        for (std::size_t r = 0; r < n; ++r)
            hv[r] = ops().dotu(&q(r, k + 1), v.data(), nb);
        for (std::size_t r = 0; r < n; ++r)
            ops().axpy(&q(r, k + 1), -2.0 * hv[r], vc.data(), nb);
    }

    Tridiagonal t;
    t.d.resize(n);
    t.e.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) t.d[i] = w(i, i).real();

    // Diagonal phase similarity makes the subdiagonal real non-negative.
    Complex phi(1.0, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Complex e = w(i + 1, i);
        const double mag = std::abs(e);
        t.e[i] = mag;
        Complex next = mag > 0.0 ? phi * (e / mag) : phi;
        if (next != Complex(1.0, 0.0) || phi != Complex(1.0, 0.0))
            for (std::size_t r = 0; r < n; ++r) q(r, i + 1) *= next;
        phi = next;
    }
    t.q = std::move(q);
    return t;
}

// Implicit-shift QL on a real symmetric tridiagonal, rotations folded
// into the (complex) column basis.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& z) {
    const std::size_t n = d.size();
    if (n <= 1) return;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            std::size_t m = l;
            while (m + 1 < n) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
                ++m;
            }
            if (m == l) break;
            if (iter++ == 80)
                throw std::runtime_error("eig_hermitian: QL iteration did not converge");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for (std::size_t row = 0; row < n; ++row) {
                    const Complex t = z(row, i + 1);
                    z(row, i + 1) = s * z(row, i) + c * t;
                    z(row, i) = c * z(row, i) - s * t;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

}  // namespace

EigHermitian eig_hermitian(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("eig_hermitian: matrix not square");
    if (m.hermiticity_error() > kHermitianTol)
        throw std::invalid_argument("eig_hermitian: matrix not Hermitian");
    const std::size_t n = m.rows();
    EigHermitian out;
    if (n == 0) {
        out.eigenvectors = ComplexMatrix(0, 0);
        return out;
    }

    Tridiagonal t = tridiagonalize(m);
    ql_implicit(t.d, t.e, t.q);

    // Sort ascending, permuting eigenvector columns along.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return t.d[a] < t.d[b]; });
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = t.d[order[k]];
        for (std::size_t r = 0; r < n; ++r)
            out.eigenvectors(r, k) = t.q(r, order[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// General (non-Hermitian) eigensolver for small matrices: Hessenberg
// reduction, single-shift QR to Schur form, eigenvectors by
// back-substitution through the triangular factor.

namespace {

struct Givens {
    double c;   // real
    Complex s;  // [[c, s], [-conj(s), c]]
};

Givens make_givens(Complex f, Complex g) {
    if (g == Complex(0.0, 0.0)) return {1.0, Complex(0.0, 0.0)};
    if (f == Complex(0.0, 0.0)) return {0.0, std::conj(g) / std::abs(g)};
    const double denom = std::sqrt(std::norm(f) + std::norm(g));
    const double c = std::abs(f) / denom;
    const Complex s = (f / std::abs(f)) * std::conj(g) / denom;
    return {c, s};
}

// Rows i and i+1 of h, columns [c0, n).
void rotate_rows(ComplexMatrix& h, std::size_t i, const Givens& g, std::size_t c0) {
    for (std::size_t c = c0; c < h.cols(); ++c) {
        const Complex a = h(i, c), b = h(i + 1, c);
        h(i, c) = g.c * a + g.s * b;
        h(i + 1, c) = -std::conj(g.s) * a + g.c * b;
    }
}

// Columns i and i+1 of h (right-multiplication by G^H), rows [0, r1).
void rotate_cols(ComplexMatrix& h, std::size_t i, const Givens& g, std::size_t r1) {
    for (std::size_t r = 0; r < r1; ++r) {
        const Complex a = h(r, i), b = h(r, i + 1);
        h(r, i) = g.c * a + std::conj(g.s) * b;
        h(r, i + 1) = -g.s * a + g.c * b;
    }
}

void hessenberg(ComplexMatrix& h, ComplexMatrix& q) {
    const std::size_t n = h.rows();
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t nb = n - k - 1;
        double xnorm_sq = 0.0;
        for (std::size_t r = 0; r < nb; ++r) xnorm_sq += std::norm(h(k + 1 + r, k));
        const double xnorm = std::sqrt(xnorm_sq);
        if (xnorm <= 1e-300) continue;
        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
        const Complex alpha = -phase * xnorm;
        for (std::size_t r = 0; r < nb; ++r) v[r] = h(k + 1 + r, k);
        v[0] -= alpha;
        const double vnorm = std::sqrt(ops().norm_sq(v.data(), nb));
        if (vnorm <= 1e-300) continue;
        ops().scale(v.data(), Complex(1.0 / vnorm, 0.0), nb);

        // Left: rows k+1..; right: cols k+1..; accumulate into q.
        for (std::size_t c = k; c < n; ++c) {
            Complex s(0.0, 0.0);
            for (std::size_t r = 0; r < nb; ++r) s += std::conj(v[r]) * h(k + 1 + r, c);
            s *= 2.0;
            for (std::size_t r = 0; r < nb; ++r) h(k + 1 + r, c) -= v[r] * s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            Complex s = ops().dotu(&h(r, k + 1), v.data(), nb);
            s *= 2.0;
            for (std::size_t c = 0; c < nb; ++c) h(r, k + 1 + c) -= s * std::conj(v[c]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            Complex s = ops().dotu(&q(r, k + 1), v.data(), nb);
            s *= 2.0;
            for (std::size_t c = 0; c < nb; ++c) q(r, k + 1 + c) -= s * std::conj(v[c]);
        }
        for (std::size_t r = k + 2; r < n; ++r) h(r, k) = 0.0;
        h(k + 1, k) = alpha;
    }
}

bool subdiag_negligible(const ComplexMatrix& h, std::size_t i) {
    const double s = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
    const double scale = s > 0.0 ? s : h.max_abs();
    return std::abs(h(i, i - 1)) <= kEps * scale;
}

void schur_qr(ComplexMatrix& h, ComplexMatrix& q) {
    const std::size_t n = h.rows();
    if (n < 2) return;
    std::size_t hi = n - 1;
    int iters_at_hi = 0;
    long total = 0;
    const long max_total = 60 * static_cast<long>(n);

    while (true) {
        while (hi > 0 && subdiag_negligible(h, hi)) {
            h(hi, hi - 1) = 0.0;
            --hi;
            iters_at_hi = 0;
        }
        if (hi == 0) break;
        if (++total > max_total)
            throw std::runtime_error("eig_general: QR iteration did not converge");

        std::size_t lo = hi;
        while (lo > 0 && !subdiag_negligible(h, lo)) --lo;

        // Wilkinson shift from the trailing 2x2 block.
        const Complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
        const Complex c = h(hi, hi - 1), d = h(hi, hi);
        Complex mu;
        if (++iters_at_hi % 12 == 0) {
            mu = d + 1.5 * std::abs(c);  // exceptional shift
        } else {
            const Complex tr = a + d;
            const Complex disc = std::sqrt(0.25 * tr * tr - (a * d - b * c));
            const Complex mu1 = 0.5 * tr + disc, mu2 = 0.5 * tr - disc;
            mu = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
        }

        // Implicit single-shift sweep over [lo..hi].
        Complex x = h(lo, lo) - mu;
        Complex z = h(lo + 1, lo);
        for (std::size_t i = lo; i < hi; ++i) {
            const Givens g = make_givens(x, z);
            rotate_rows(h, i, g, i > lo ? i - 1 : lo);
            rotate_cols(h, i, g, std::min(hi, i + 2) + 1);
            rotate_cols(q, i, g, n);
            if (i + 1 < hi) {
                x = h(i + 1, i);
                z = h(i + 2, i);
            }
        }
    }
}

}  // namespace

EigGeneral eig_general(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("eig_general: matrix not square");
    if (!m.all_finite()) throw std::invalid_argument("eig_general: non-finite entries");
    const std::size_t n = m.rows();
    EigGeneral out;
    if (n == 0) {
        out.eigenvectors = ComplexMatrix(0, 0);
        return out;
    }

    ComplexMatrix t = m;
    ComplexMatrix q = ComplexMatrix::identity(n);
    hessenberg(t, q);
    schur_qr(t, q);

    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = t(i, i);

    // Eigenvectors of the triangular factor by back-substitution.
    const double scale = std::max(t.max_abs(), 1e-300);
    ComplexMatrix v(n, n);
    std::vector<Complex> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(y.begin(), y.end(), Complex(0.0, 0.0));
        y[k] = 1.0;
        for (std::size_t i = k; i-- > 0;) {
            Complex s(0.0, 0.0);
            for (std::size_t j = i + 1; j <= k; ++j) s += t(i, j) * y[j];
            Complex den = t(i, i) - t(k, k);
            if (std::abs(den) < kEps * scale) den = Complex(kEps * scale, 0.0);
            y[i] = -s / den;
        }
        // Columns of q are not contiguous; accumulate row by row.
        std::vector<Complex> col(n, Complex(0.0, 0.0));
        for (std::size_t r = 0; r < n; ++r) {
            Complex acc(0.0, 0.0);
            for (std::size_t j = 0; j <= k; ++j) acc += q(r, j) * y[j];
            col[r] = acc;
        }
        double cn = std::sqrt(ops().norm_sq(col.data(), n));
        if (cn > 0.0) ops().scale(col.data(), Complex(1.0 / cn, 0.0), n);
        for (std::size_t r = 0; r < n; ++r) v(r, k) = col[r];
    }
    out.eigenvector_condition = condition_number_1(v);
    out.eigenvectors = std::move(v);
    return out;
}

// ---------------------------------------------------------------------------
// Matrix functions

ComplexMatrix matrix_exp_hermitian_generator(const ComplexMatrix& h, double t) {
    EigHermitian eig = eig_hermitian(h);  // rejects non-Hermitian input
    const std::size_t n = h.rows();
    ComplexMatrix w = eig.eigenvectors;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex phase = std::exp(Complex(0.0, -eig.eigenvalues[k] * t));
        for (std::size_t r = 0; r < n; ++r) w(r, k) *= phase;
    }
    return w * eig.eigenvectors.adjoint();
}

ComplexMatrix matrix_log_principal(const ComplexMatrix& m) {
    if (!m.is_square())
        throw std::invalid_argument("matrix_log_principal: matrix not square");
    EigGeneral eig = eig_general(m);
    double scale = 0.0;
    for (const Complex& lam : eig.eigenvalues) scale = std::max(scale, std::abs(lam));
    for (const Complex& lam : eig.eigenvalues) {
        if (std::abs(lam) <= 1e-12 * std::max(scale, 1e-300))
            throw LogBranchError("log-branch-failure: eigenvalue at zero");
        if (lam.real() < 0.0 && std::abs(lam.imag()) <= 1e-9 * std::abs(lam))
            throw LogBranchError("log-branch-failure: eigenvalue on negative real axis");
    }
    if (!(eig.eigenvector_condition < 1e8))
        throw LogBranchError(
            "log-branch-failure: ill-conditioned eigenvector basis (cond > 1e8)");

    const std::size_t n = m.rows();
    ComplexMatrix w = eig.eigenvectors;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex lg = std::log(eig.eigenvalues[k]);
        for (std::size_t r = 0; r < n; ++r) w(r, k) *= lg;
    }
    LuDecomposition lu(eig.eigenvectors);
    if (lu.singular())
        throw LogBranchError("log-branch-failure: singular eigenvector basis");
    return w * lu.inverse();
}

ComplexMatrix matrix_exp_general(const ComplexMatrix& m) {
    if (!m.is_square())
        throw std::invalid_argument("matrix_exp_general: matrix not square");
    const std::size_t n = m.rows();
    const double norm = m.one_norm();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    ComplexMatrix b = m;
    b *= Complex(std::ldexp(1.0, -s), 0.0);

    ComplexMatrix sum = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = term * b;
        term *= Complex(1.0 / k, 0.0);
        sum += term;
        if (term.max_abs() < 1e-18 * std::max(1.0, sum.max_abs())) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

LuDecomposition::LuDecomposition(ComplexMatrix m) : lu_(std::move(m)) {
    if (!lu_.is_square()) throw std::invalid_argument("LU: matrix not square");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t(0));
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            const double v = std::abs(lu_(r, k));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= 1e-300) {
            singular_ = true;
            continue;
        }
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(piv, c));
            std::swap(perm_[k], perm_[piv]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const Complex f = lu_(r, k) / lu_(k, k);
            lu_(r, k) = f;
            if (f != Complex(0.0, 0.0))
                ops().axpy(&lu_(r, k + 1), -f, &lu_(k, k + 1), n - k - 1);
        }
    }
}

std::vector<Complex> LuDecomposition::solve(std::vector<Complex> rhs) const {
    if (singular_) throw std::runtime_error("LU solve: singular matrix");
    const std::size_t n = perm_.size();
    if (rhs.size() != n) throw std::invalid_argument("LU solve: size mismatch");
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& rhs) const {
    if (singular_) throw std::runtime_error("LU solve: singular matrix");
    const std::size_t n = perm_.size();
    if (rhs.rows() != n) throw std::invalid_argument("LU solve: shape mismatch");
    const std::size_t w = rhs.cols();
    ComplexMatrix x(n, w);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < w; ++c) x(i, c) = rhs(perm_[i], c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (lu_(i, j) != Complex(0.0, 0.0))
                ops().axpy(&x(i, 0), -lu_(i, j), &x(j, 0), w);
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j)
            if (lu_(i, j) != Complex(0.0, 0.0))
                ops().axpy(&x(i, 0), -lu_(i, j), &x(j, 0), w);
        const Complex inv = 1.0 / lu_(i, i);
        ops().scale(&x(i, 0), inv, w);
    }
    return x;
}

ComplexMatrix LuDecomposition::inverse() const {
    return solve(ComplexMatrix::identity(perm_.size()));
}

double condition_number_1(const ComplexMatrix& m) {
    LuDecomposition lu(m);
    if (lu.singular()) return std::numeric_limits<double>::infinity();
    return m.one_norm() * lu.inverse().one_norm();
}

}  // namespace qproc
