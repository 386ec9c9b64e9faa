#pragma once

#include "qproc/tomography.hpp"

#include <array>

// Two ions in a linear trap driven by traveling-wave lasers, with the
// center-of-mass and relative motional modes kept explicitly. The
// entangling gate is the three-pulse lower-sideband sequence: pi on
// ion 1 (g<->e), 2pi on ion 2 (g<->e'), pi on ion 1 again. Outputs are
// reported in the interaction picture of the free Hamiltonian so that
// the resolved-sideband limit reproduces diag(1,1,1,-1) exactly.

namespace qproc {

struct IonTrapParams {
    double nu = 1.0;       // trap frequency, sets the unit scale
    double eta_cm = 0.5;   // Lamb-Dicke parameters
    double eta_r = 0.5;
    double delta1 = -1.0;  // laser detunings, units of nu (lower sideband)
    double delta2 = -1.0;
    double omega1 = 0.1;   // Rabi frequencies, units of nu
    double omega2 = 0.1;
    int n_max = 5;         // Fock truncation per mode
    bool calibrate_pulses = false;
};

// ion1 (x) ion2 (x) cm (x) r, row-major; ion 2 carries the auxiliary
// level |e'> as its third state.
struct HilbertLayout {
    std::size_t ion1_dim = 2;
    std::size_t ion2_dim = 3;
    std::size_t cm_dim = 0;
    std::size_t r_dim = 0;

    explicit HilbertLayout(int n_max)
        : cm_dim(static_cast<std::size_t>(n_max) + 1),
          r_dim(static_cast<std::size_t>(n_max) + 1) {}

    std::size_t total() const { return ion1_dim * ion2_dim * cm_dim * r_dim; }
    std::size_t index(std::size_t i1, std::size_t i2, std::size_t ncm,
                      std::size_t nr) const {
        return ((i1 * ion2_dim + i2) * cm_dim + ncm) * r_dim + nr;
    }
    std::vector<std::size_t> dims() const {
        return {ion1_dim, ion2_dim, cm_dim, r_dim};
    }
};

enum class Transition { GroundToExcited, GroundToAux };

struct PulseStep {
    int target_ion = 1;  // 1 or 2
    Transition transition = Transition::GroundToExcited;
    double area = 3.14159265358979323846;
    double rabi = 0.1;  // units of nu
};

// The fixed gate program: (pi, ion1, g<->e), (2pi, ion2, g<->e'), (pi, ion1).
std::array<PulseStep, 3> gate_pulse_sequence(const IonTrapParams& p);

// exp(-i * sign * eta * (a + a^dagger)) on a dim-level mode, computed in
// a dim+8 workspace and cropped back.
ComplexMatrix displacement_factor(double eta, std::size_t dim, int sign);

// Full-space Hamiltonian; pass nullptr for the free part only
// (detunings plus mode energies).
ComplexMatrix build_hamiltonian(const IonTrapParams& p, const PulseStep* active);

// Analytic Lamb-Dicke sideband duration: area / (rabi * eta_cm *
// exp(-(eta_cm^2 + eta_r^2)/2)), in units of 1/nu.
double pulse_duration(const PulseStep& step, const IonTrapParams& p);

struct CalibratedDuration {
    double duration = 0.0;
    bool interior_maximum = true;  // false: fell back to the analytic value
};

// Golden-section refinement of the sideband time (transfer probability
// |g,1_cm> -> excited,0_cm maximized over +-30% of the analytic value).
CalibratedDuration calibrate_pulse(const PulseStep& step, const IonTrapParams& p);

// Builds the three pulse propagators once and reuses them; the three
// per-input evolutions are then single matrix-vector products.
class GateSimulator {
  public:
    explicit GateSimulator(const IonTrapParams& p);

    const HilbertLayout& layout() const { return layout_; }
    const std::array<double, 3>& durations() const { return durations_; }
    bool calibration_interior() const { return calibration_interior_; }

    // psi4 is a computational-basis superposition; phonons start in
    // |0,0>. Returns the full-space state after the three pulses, in
    // the free-Hamiltonian interaction picture.
    StateVector run(const StateVector& psi4) const;

  private:
    IonTrapParams params_;
    HilbertLayout layout_;
    ComplexMatrix total_;
    std::array<double, 3> durations_{};
    bool calibration_interior_ = true;
};

StateVector run_gate_sequence(const StateVector& psi4, const IonTrapParams& p);

struct ReducedOutput {
    DensityMatrix rho4;   // computational block, possibly sub-normalized
    double leakage = 0.0;  // 1 - Tr[rho4]
};

// Trace over both phonon modes, then restrict ion 2 to {g, e}.
ReducedOutput reduced_output(const StateVector& full_state,
                             const HilbertLayout& layout);

struct SimulatedProcess {
    TransferOperators r;
    std::array<double, 16> leakage{};
    std::array<double, 3> durations{};
};

// Runs the full tomography pipeline on the simulated gate. The design
// must consist of product states (entangled preparations are rejected);
// shots = 0 performs exact state tomography. psd_clip projects sampled
// reconstructions onto the PSD cone before recovery.
SimulatedProcess simulate_process(const IonTrapParams& p, const InputDesign& design,
                                  long shots = 0, std::uint64_t seed = 0,
                                  bool psd_clip = false);

}  // namespace qproc
