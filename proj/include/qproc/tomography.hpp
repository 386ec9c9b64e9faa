#pragma once

#include "qproc/linalg.hpp"

#include <array>
#include <cstdint>
#include <string>

// Reconstruction of a two-qubit process from sixteen prepared inputs
// and single-qubit tomography of the outputs. A process maps input
// basis projectors |i><i'| (i = 2*i1 + i2 over the computational basis)
// to output-space operators R_{i'i}; those sixteen operators determine
// the output state for every input.
//
// Index conventions, used everywhere:
//   q        = 4*i' + i      flattened transfer-operator index
//   vec(X)_p = <j|X|j'>,  p = 4*j' + j   (superoperator flattening)

namespace qproc {

// The sixteen two-qubit Pauli products A_q = sigma_{q1} (x) sigma_{q2},
// q = 4*q1 + q2, sigma in {1, x, y, z}. Tr[A_q A_q'] = 4 delta_{qq'}.
class PauliBasis {
  public:
    static const PauliBasis& instance();
    const ComplexMatrix& op(std::size_t q) const { return ops_[q]; }
    static const ComplexMatrix& single(std::size_t idx);  // 1, x, y, z

  private:
    PauliBasis();
    std::array<ComplexMatrix, 16> ops_;
};

struct InputDesign {
    int n_basis = 4;                   // input-space dimension
    std::vector<StateVector> states;   // 16 coefficient vectors over |i>
    std::vector<std::string> labels;
};

// The sixteen product states |psi_a>|psi_b> with
// psi_1 = |0>, psi_2 = |1>, psi_3 = (|0>+|1>)/sqrt(2),
// psi_4 = (|0>+i|1>)/sqrt(2); k = 4*(a-1) + (b-1).
InputDesign product_input_design();

// The delta-based reference construction (includes entangled members);
// used to cross-validate the product design. k = 4*k1 + k2.
InputDesign reference_input_design();

struct MMatrix {
    ComplexMatrix matrix;  // 16x16, M_{kq} = c_i^(k) conj(c_{i'}^(k))
    double condition_number = 0.0;
};

// Throws SingularDesignError ("design-singular") above cond 1e12.
MMatrix build_m_matrix(const InputDesign& design);

struct TransferOperators {
    int out_dim = 4;
    std::array<ComplexMatrix, 16> ops;  // index q = 4*i' + i

    const ComplexMatrix& op(std::size_t i_prime, std::size_t i) const {
        return ops[4 * i_prime + i];
    }
    ComplexMatrix& op(std::size_t i_prime, std::size_t i) {
        return ops[4 * i_prime + i];
    }
};

TransferOperators identity_transfer_operators();
TransferOperators depolarizing_transfer_operators();

// R_{i'i} = u |i><i'| u^dagger for a 4x4 unitary.
TransferOperators transfer_operators_of_unitary(const ComplexMatrix& u);

// Entrywise convex blend p*a + (1-p)*b.
TransferOperators blend(const TransferOperators& a, const TransferOperators& b,
                        double p);

// lambda_q = Tr[rho A_q] / 4 (complex to keep the round trip exact;
// imaginary parts vanish for Hermitian input).
std::array<Complex, 16> wootters_coefficients(const DensityMatrix& rho);

// rho = sum_q lambda_q A_q. May be non-PSD for sampled coefficients.
DensityMatrix reconstruct_from_coefficients(const std::array<Complex, 16>& lambdas);

// Finite-statistics estimate of the coefficients from independent
// single-qubit measurements: for each observable the four joint +-1
// outcomes are sampled `shots` times (shots = 0 means exact values).
// Sub-normalized states contribute a null outcome, so the estimator
// stays unbiased for leaky processes. lambda_0 is fixed to Tr[rho]/4.
std::array<double, 16> simulate_pauli_measurements(const DensityMatrix& rho,
                                                   long shots, std::uint64_t seed);

// Solves M Rvec = rhovec for all output matrix elements at once.
TransferOperators recover_transfer_operators(
    const std::vector<DensityMatrix>& outputs, const MMatrix& m);

// rho_out = sum_{i,i'} <i|rho_in|i'> R_{i'i}.
DensityMatrix apply_process(const TransferOperators& r, const DensityMatrix& rho_in);

struct TransferOperatorReport {
    double max_trace_deviation = 0.0;      // vs Tr R_{i'i} = delta_{i'i}
    double max_hermitian_pair_deviation = 0.0;  // vs R_{i'i}^dagger = R_{ii'}
    double min_output_eigenvalue = 0.0;    // over the 16 product-design outputs
    std::array<double, 16> input_trace_deficit{};  // 1 - Tr[rho_out^(k)]
};

TransferOperatorReport validate_transfer_operators(const TransferOperators& r);

// The 16x16 matrix acting on flattened states: column q = 4*i' + i is
// vec(apply_process(r, |i><i'|)).
ComplexMatrix superoperator_of(const TransferOperators& r);

TransferOperators transfer_operators_from_superoperator(const ComplexMatrix& s);

// L = log(S)/t for the channel's superoperator S. Branch-cut or
// conditioning failures surface as "non-loggable-channel".
ComplexMatrix estimate_liouvillian(const TransferOperators& r, double t);

struct NonLoggableChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qproc
