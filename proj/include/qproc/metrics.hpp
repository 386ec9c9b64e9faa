#pragma once

#include "qproc/optim.hpp"
#include "qproc/tomography.hpp"

#include <array>

// Global quality figures of a two-qubit gate, evaluated from its
// transfer operators: input-averaged fidelity against the ideal
// unitary, input-averaged output purity, the best overlap of any
// product-input output with a maximally entangled state, and the most
// negative partial-transpose eigenvalue reachable from product inputs.

namespace qproc {

struct GateMetrics {
    double fidelity = 0.0;
    double purity = 0.0;
    double quantum_degree = 0.0;
    double entanglement_capability = 0.0;
    double max_leakage = 0.0;
    bool optimizer_converged = false;
};

struct McEstimate {
    double mean = 0.0;
    double stderr = 0.0;
};

// |psi(theta, phi)> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> per qubit.
struct ProductStateParams {
    double theta1 = 0.0, phi1 = 0.0, theta2 = 0.0, phi2 = 0.0;
};

// (U1 x U2)|Phi+> with U = Rz(a) Ry(b) Rz(c) per qubit; global phase dropped.
struct MaxEntangledParams {
    std::array<double, 6> angles{};
};

StateVector single_qubit_state(double theta, double phi);
StateVector product_state(const ProductStateParams& p);
ComplexMatrix single_qubit_unitary(double a, double b, double c);
StateVector max_entangled_state(const MaxEntangledParams& p);

// Input-averaged overlap with the ideal gate's output, uniform over
// pure input states; closed form, linear in r.
double gate_fidelity(const TransferOperators& r, const ComplexMatrix& u);

// Monte-Carlo route over the same average; the two must agree.
McEstimate gate_fidelity_montecarlo(const TransferOperators& r,
                                    const ComplexMatrix& u, long samples,
                                    std::uint64_t seed);

double gate_purity(const TransferOperators& r);
McEstimate gate_purity_montecarlo(const TransferOperators& r, long samples,
                                  std::uint64_t seed);

struct QuantumDegreeResult {
    double value = 0.0;
    ProductStateParams argmax_input;
    MaxEntangledParams argmax_me;
    bool converged = false;
};

QuantumDegreeResult quantum_degree(const TransferOperators& r,
                                   const OptimizerConfig& opt = {});

// Overlap above this threshold violates a CHSH inequality.
double chsh_threshold();  // (2 + 3 sqrt(2)) / 8
bool chsh_violation_check(double q);

struct EntanglementCapabilityResult {
    double value = 0.0;
    ProductStateParams argmin_input;
    bool converged = false;
};

EntanglementCapabilityResult entanglement_capability(const TransferOperators& r,
                                                     const OptimizerConfig& opt = {});

GateMetrics compute_all_metrics(const TransferOperators& r, const ComplexMatrix& u_ideal,
                                const OptimizerConfig& opt = {});

}  // namespace qproc
