#include "qproc/tomography.hpp"

#include "qproc/rng.hpp"

#include <cmath>

namespace qproc {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

// ---------------------------------------------------------------------------
// Pauli basis

const ComplexMatrix& PauliBasis::single(std::size_t idx) {
    static const std::array<ComplexMatrix, 4> sigma = {
        ComplexMatrix::identity(2),
        ComplexMatrix(2, 2, {{0, 0}, {1, 0}, {1, 0}, {0, 0}}),
        ComplexMatrix(2, 2, {{0, 0}, {0, -1}, {0, 1}, {0, 0}}),
        ComplexMatrix(2, 2, {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}),
    };
    return sigma[idx];
}

PauliBasis::PauliBasis() {
    for (std::size_t q1 = 0; q1 < 4; ++q1)
        for (std::size_t q2 = 0; q2 < 4; ++q2)
            ops_[4 * q1 + q2] = kron(single(q1), single(q2));
}

const PauliBasis& PauliBasis::instance() {
    static const PauliBasis basis;
    return basis;
}

// ---------------------------------------------------------------------------
// Input designs

InputDesign product_input_design() {
    const std::array<StateVector, 4> psi = {
        StateVector({{1.0, 0.0}, {0.0, 0.0}}),
        StateVector({{0.0, 0.0}, {1.0, 0.0}}),
        StateVector({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}}),
        StateVector({{kInvSqrt2, 0.0}, {0.0, kInvSqrt2}}),
    };
    static const char* names[4] = {"|0>", "|1>", "|+>", "|+i>"};
    InputDesign d;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            d.states.push_back(psi[a].tensor(psi[b]));
            d.labels.push_back(std::string(names[a]) + names[b]);
        }
    return d;
}

InputDesign reference_input_design() {
    InputDesign d;
    for (std::size_t k1 = 0; k1 < 4; ++k1)
        for (std::size_t k2 = 0; k2 < 4; ++k2) {
            StateVector c(4);
            if (k1 > k2) {
                c[k1] = kInvSqrt2;
                c[k2] += kInvSqrt2;
            } else if (k1 == k2) {
                c[k1] = 1.0;
            } else {
                c[k1] = kInvSqrt2;
                c[k2] += Complex(0.0, kInvSqrt2);
            }
            d.states.push_back(std::move(c));
            d.labels.push_back("k1=" + std::to_string(k1) +
                               ",k2=" + std::to_string(k2));
        }
    return d;
}

// ---------------------------------------------------------------------------
// M matrix and recovery

MMatrix build_m_matrix(const InputDesign& design) {
    if (design.states.size() != 16)
        throw std::invalid_argument("build_m_matrix: need exactly 16 input states");
    MMatrix out;
    out.matrix = ComplexMatrix(16, 16);
    for (std::size_t k = 0; k < 16; ++k) {
        const StateVector& c = design.states[k];
        if (!c.is_normalized(1e-12))
            throw std::invalid_argument("build_m_matrix: input state not normalized");
        for (std::size_t ip = 0; ip < 4; ++ip)
            for (std::size_t i = 0; i < 4; ++i)
                out.matrix(k, 4 * ip + i) = c[i] * std::conj(c[ip]);
    }
    out.condition_number = condition_number_1(out.matrix);
    if (!(out.condition_number < 1e12))
        throw SingularDesignError("design-singular: input design matrix cond > 1e12");
    return out;
}

TransferOperators recover_transfer_operators(
    const std::vector<DensityMatrix>& outputs, const MMatrix& m) {
    if (outputs.size() != 16)
        throw std::invalid_argument("recover_transfer_operators: need 16 outputs");
    const std::size_t d = outputs[0].dim();
    for (const DensityMatrix& rho : outputs)
        if (rho.dim() != d)
            throw std::invalid_argument(
                "recover_transfer_operators: inconsistent output dims");

    // One linear solve per output matrix element, batched as columns.
    ComplexMatrix rhs(16, d * d);
    for (std::size_t k = 0; k < 16; ++k)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t jp = 0; jp < d; ++jp)
                rhs(k, j * d + jp) = outputs[k](j, jp);

    LuDecomposition lu(m.matrix);
    if (lu.singular())
        throw SingularDesignError("design-singular: M matrix is singular");
    ComplexMatrix x = lu.solve(rhs);

    TransferOperators r;
    r.out_dim = static_cast<int>(d);
    for (std::size_t q = 0; q < 16; ++q) {
        r.ops[q] = ComplexMatrix(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t jp = 0; jp < d; ++jp) r.ops[q](j, jp) = x(q, j * d + jp);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Channel constructors and application

TransferOperators identity_transfer_operators() {
    TransferOperators r;
    for (std::size_t ip = 0; ip < 4; ++ip)
        for (std::size_t i = 0; i < 4; ++i) {
            ComplexMatrix m(4, 4);
            m(i, ip) = 1.0;  // |i><i'|
            r.op(ip, i) = std::move(m);
        }
    return r;
}

TransferOperators depolarizing_transfer_operators() {
    TransferOperators r;
    for (std::size_t ip = 0; ip < 4; ++ip)
        for (std::size_t i = 0; i < 4; ++i) {
            ComplexMatrix m(4, 4);
            if (i == ip)
                for (std::size_t j = 0; j < 4; ++j) m(j, j) = 0.25;
            r.op(ip, i) = std::move(m);
        }
    return r;
}

TransferOperators transfer_operators_of_unitary(const ComplexMatrix& u) {
    if (u.rows() != 4 || u.cols() != 4)
        throw std::invalid_argument("transfer_operators_of_unitary: expected 4x4");
    if (!u.is_unitary(kUnitaryTol))
        throw std::invalid_argument("transfer_operators_of_unitary: not unitary");
    TransferOperators r;
    for (std::size_t ip = 0; ip < 4; ++ip)
        for (std::size_t i = 0; i < 4; ++i) {
            ComplexMatrix m(4, 4);
            // u |i><i'| u^dagger has entries u(j,i) conj(u(j',i'))
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t jp = 0; jp < 4; ++jp)
                    m(j, jp) = u(j, i) * std::conj(u(jp, ip));
            r.op(ip, i) = std::move(m);
        }
    return r;
}

TransferOperators blend(const TransferOperators& a, const TransferOperators& b,
                        double p) {
    TransferOperators out;
    out.out_dim = a.out_dim;
    for (std::size_t q = 0; q < 16; ++q) {
        ComplexMatrix m = a.ops[q];
        m *= Complex(p, 0.0);
        ComplexMatrix n = b.ops[q];
        n *= Complex(1.0 - p, 0.0);
        m += n;
        out.ops[q] = std::move(m);
    }
    return out;
}

DensityMatrix apply_process(const TransferOperators& r, const DensityMatrix& rho_in) {
    if (rho_in.dim() != 4)
        throw std::invalid_argument("apply_process: input must be 4x4");
    const std::size_t d = r.ops[0].rows();
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t ip = 0; ip < 4; ++ip) {
            const Complex w = rho_in(i, ip);
            if (w == Complex(0.0, 0.0)) continue;
            const ComplexMatrix& op = r.op(ip, i);
            for (std::size_t row = 0; row < d; ++row)
                for (std::size_t col = 0; col < d; ++col)
                    out(row, col) += w * op(row, col);
        }
    return DensityMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// State tomography

std::array<Complex, 16> wootters_coefficients(const DensityMatrix& rho) {
    if (rho.dim() != 4)
        throw std::invalid_argument("wootters_coefficients: expected a 4x4 state");
    const PauliBasis& basis = PauliBasis::instance();
    std::array<Complex, 16> lams;
    for (std::size_t q = 0; q < 16; ++q) {
        Complex tr(0.0, 0.0);
        const ComplexMatrix& a = basis.op(q);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) tr += rho(r, c) * a(c, r);
        lams[q] = tr / 4.0;
    }
    return lams;
}

DensityMatrix reconstruct_from_coefficients(const std::array<Complex, 16>& lambdas) {
    const PauliBasis& basis = PauliBasis::instance();
    ComplexMatrix out(4, 4);
    for (std::size_t q = 0; q < 16; ++q) {
        if (lambdas[q] == Complex(0.0, 0.0)) continue;
        const ComplexMatrix& a = basis.op(q);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) out(r, c) += lambdas[q] * a(r, c);
    }
    return DensityMatrix(std::move(out));
}

namespace {

// +1/-1 eigenprojectors of a single-qubit Pauli; index 0 selects the
// identity "observable" whose outcome is always +1.
ComplexMatrix pauli_projector(std::size_t idx, int sign) {
    if (idx == 0)
        return sign > 0 ? ComplexMatrix::identity(2) : ComplexMatrix::zero(2, 2);
    ComplexMatrix p = PauliBasis::single(idx);
    p *= Complex(sign * 0.5, 0.0);
    p += ComplexMatrix::identity(2) * Complex(0.5, 0.0);
    return p;
}

}  // namespace

std::array<double, 16> simulate_pauli_measurements(const DensityMatrix& rho,
                                                   long shots, std::uint64_t seed) {
    if (rho.dim() != 4)
        throw std::invalid_argument("simulate_pauli_measurements: expected 4x4 state");
    if (rho.hermiticity_error() > 1e-8 || !rho.matrix().all_finite())
        throw std::invalid_argument("simulate_pauli_measurements: invalid state");
    if (shots < 0)
        throw std::invalid_argument("simulate_pauli_measurements: negative shots");

    std::array<double, 16> est{};
    const std::array<Complex, 16> exact = wootters_coefficients(rho);
    est[0] = rho.trace_real() / 4.0;
    if (shots == 0) {
        for (std::size_t q = 1; q < 16; ++q) est[q] = exact[q].real();
        return est;
    }

    Rng rng(seed);
    for (std::size_t q = 1; q < 16; ++q) {
        const std::size_t q1 = q / 4, q2 = q % 4;
        // joint outcome probabilities for the two local measurements,
        // plus a null outcome carrying any missing (leaked) weight
        double probs[4];
        int signs[4];
        double total = 0.0;
        for (int o = 0; o < 4; ++o) {
            const int s1 = (o & 2) ? -1 : 1;
            const int s2 = (o & 1) ? -1 : 1;
            ComplexMatrix proj = kron(pauli_projector(q1, s1), pauli_projector(q2, s2));
            Complex tr(0.0, 0.0);
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c) tr += rho(r, c) * proj(c, r);
            probs[o] = std::max(0.0, tr.real());
            signs[o] = s1 * s2;
            total += probs[o];
        }
        long long sum = 0;
        for (long shot = 0; shot < shots; ++shot) {
            double u = rng.uniform() * std::max(total, 1.0);
            int outcome = -1;
            for (int o = 0; o < 4; ++o) {
                if (u < probs[o]) {
                    outcome = o;
                    break;
                }
                u -= probs[o];
            }
            if (outcome >= 0) sum += signs[outcome];
        }
        est[q] = static_cast<double>(sum) / static_cast<double>(shots) / 4.0;
    }
    return est;
}

// ---------------------------------------------------------------------------
// Diagnostics

TransferOperatorReport validate_transfer_operators(const TransferOperators& r) {
    TransferOperatorReport report;
    for (std::size_t ip = 0; ip < 4; ++ip)
        for (std::size_t i = 0; i < 4; ++i) {
            const double want = i == ip ? 1.0 : 0.0;
            report.max_trace_deviation =
                std::max(report.max_trace_deviation,
                         std::abs(r.op(ip, i).trace() - Complex(want, 0.0)));
            ComplexMatrix pair = r.op(ip, i).adjoint();
            pair -= r.op(i, ip);
            report.max_hermitian_pair_deviation =
                std::max(report.max_hermitian_pair_deviation, pair.max_abs());
        }

    const InputDesign design = product_input_design();
    double min_eig = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 16; ++k) {
        DensityMatrix out =
            apply_process(r, DensityMatrix::from_state(design.states[k]));
        report.input_trace_deficit[k] = 1.0 - out.trace_real();
        min_eig = std::min(min_eig, out.min_eigenvalue());
    }
    report.min_output_eigenvalue = min_eig;
    return report;
}

// ---------------------------------------------------------------------------
// Superoperator view and Liouvillian estimation

ComplexMatrix superoperator_of(const TransferOperators& r) {
    ComplexMatrix s(16, 16);
    for (std::size_t ip = 0; ip < 4; ++ip)
        for (std::size_t i = 0; i < 4; ++i) {
            const std::size_t q = 4 * ip + i;
            const ComplexMatrix& op = r.op(ip, i);  // image of |i><i'|
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t jp = 0; jp < 4; ++jp)
                    s(4 * jp + j, q) = op(j, jp);
        }
    return s;
}

TransferOperators transfer_operators_from_superoperator(const ComplexMatrix& s) {
    if (s.rows() != 16 || s.cols() != 16)
        throw std::invalid_argument(
            "transfer_operators_from_superoperator: expected 16x16");
    TransferOperators r;
    for (std::size_t q = 0; q < 16; ++q) {
        ComplexMatrix op(4, 4);
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t jp = 0; jp < 4; ++jp) op(j, jp) = s(4 * jp + j, q);
        r.ops[q] = std::move(op);
    }
    return r;
}

ComplexMatrix estimate_liouvillian(const TransferOperators& r, double t) {
    if (!(t > 0.0))
        throw std::invalid_argument("estimate_liouvillian: time must be positive");
    ComplexMatrix s = superoperator_of(r);
    ComplexMatrix l;
    try {
        l = matrix_log_principal(s);
    } catch (const LogBranchError& e) {
        throw NonLoggableChannelError(std::string("non-loggable-channel: ") + e.what());
    }
    l *= Complex(1.0 / t, 0.0);
    return l;
}

}  // namespace qproc
