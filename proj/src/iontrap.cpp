#include "qproc/iontrap.hpp"

#include <cmath>

namespace qproc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3 = 1.73205080756887729353;

ComplexMatrix mode_ladder_sum(std::size_t dim) {
    ComplexMatrix x(dim, dim);
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        const double v = std::sqrt(static_cast<double>(n + 1));
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return x;
}

}  // namespace

std::array<PulseStep, 3> gate_pulse_sequence(const IonTrapParams& p) {
    PulseStep first{1, Transition::GroundToExcited, kPi, p.omega1};
    PulseStep second{2, Transition::GroundToAux, 2.0 * kPi, p.omega2};
    return {first, second, first};
}

ComplexMatrix displacement_factor(double eta, std::size_t dim, int sign) {
    if (dim < 2) throw std::invalid_argument("displacement_factor: dim must be >= 2");
    const std::size_t work = dim + 8;
    ComplexMatrix x = mode_ladder_sum(work);
    x *= Complex(eta, 0.0);
    ComplexMatrix u = matrix_exp_hermitian_generator(x, static_cast<double>(sign));
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out(r, c) = u(r, c);
    return out;
}

ComplexMatrix build_hamiltonian(const IonTrapParams& p, const PulseStep* active) {
    const HilbertLayout layout(p.n_max);
    const std::size_t total = layout.total();
    ComplexMatrix h(total, total);

    for (std::size_t i1 = 0; i1 < layout.ion1_dim; ++i1)
        for (std::size_t i2 = 0; i2 < layout.ion2_dim; ++i2)
            for (std::size_t ncm = 0; ncm < layout.cm_dim; ++ncm)
                for (std::size_t nr = 0; nr < layout.r_dim; ++nr) {
                    double e = static_cast<double>(ncm) + kSqrt3 * static_cast<double>(nr);
                    if (i1 == 1) e -= p.delta1;
                    if (i2 == 2) e -= p.delta2;
                    const std::size_t idx = layout.index(i1, i2, ncm, nr);
                    h(idx, idx) = p.nu * e;
                }

    if (active) {
        ComplexMatrix ion_part;
        int r_sign = 0;
        if (active->target_ion == 1) {
            if (active->transition != Transition::GroundToExcited)
                throw std::invalid_argument("build_hamiltonian: ion 1 drives g<->e");
            ComplexMatrix raise(2, 2);
            raise(1, 0) = 1.0;  // |e><g|
            ion_part = kron(raise, ComplexMatrix::identity(3));
            r_sign = +1;
        } else if (active->target_ion == 2) {
            if (active->transition != Transition::GroundToAux)
                throw std::invalid_argument("build_hamiltonian: ion 2 drives g<->e'");
            ComplexMatrix raise(3, 3);
            raise(2, 0) = 1.0;  // |e'><g|
            ion_part = kron(ComplexMatrix::identity(2), raise);
            r_sign = -1;
        } else {
            throw std::invalid_argument("build_hamiltonian: target ion must be 1 or 2");
        }
        ComplexMatrix d_cm = displacement_factor(p.eta_cm, layout.cm_dim, +1);
        ComplexMatrix d_r = displacement_factor(p.eta_r, layout.r_dim, r_sign);
        ComplexMatrix coupling = kron(kron(ion_part, d_cm), d_r);
        coupling *= Complex(0.5 * active->rabi * p.nu, 0.0);
        ComplexMatrix hc = coupling.adjoint();
        h += coupling;
        h += hc;
    }
    return h;
}

double pulse_duration(const PulseStep& step, const IonTrapParams& p) {
    if (!(step.rabi > 0.0))
        throw std::invalid_argument("pulse_duration: Rabi frequency must be positive");
    const double omega_eff = step.rabi * p.nu * p.eta_cm *
                             std::exp(-0.5 * (p.eta_cm * p.eta_cm + p.eta_r * p.eta_r));
    return step.area / omega_eff;
}

CalibratedDuration calibrate_pulse(const PulseStep& step, const IonTrapParams& p) {
    const HilbertLayout layout(p.n_max);
    ComplexMatrix h = build_hamiltonian(p, &step);
    EigHermitian eig = eig_hermitian(h);
    const std::size_t total = layout.total();

    const std::size_t init = layout.index(0, 0, 1, 0);  // |g, g, 1_cm, 0_r>
    const std::size_t target = step.target_ion == 1 ? layout.index(1, 0, 0, 0)
                                                    : layout.index(0, 2, 0, 0);

    // amplitude <target| V e^{-i lambda t} V^H |init>
    std::vector<Complex> a(total), b(total);
    for (std::size_t k = 0; k < total; ++k) {
        a[k] = std::conj(eig.eigenvectors(init, k));
        b[k] = eig.eigenvectors(target, k);
    }
    auto transfer = [&](double t) {
        Complex amp(0.0, 0.0);
        for (std::size_t k = 0; k < total; ++k)
            amp += b[k] * std::exp(Complex(0.0, -eig.eigenvalues[k] * t)) * a[k];
        return std::norm(amp);
    };

    PulseStep pi_step = step;
    pi_step.area = kPi;
    const double t_pi = pulse_duration(pi_step, p);
    double lo = 0.7 * t_pi, hi = 1.3 * t_pi;

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = transfer(x1), f2 = transfer(x2);
    for (int iter = 0; iter < 80; ++iter) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = transfer(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = transfer(x1);
        }
    }
    const double t_best = 0.5 * (lo + hi);
    const double p_best = transfer(t_best);

    CalibratedDuration out;
    const double edge = std::max(transfer(0.7 * t_pi), transfer(1.3 * t_pi));
    if (p_best <= edge) {
        out.duration = t_pi * (step.area / kPi);
        out.interior_maximum = false;
        return out;
    }
    out.duration = t_best * (step.area / kPi);
    out.interior_maximum = true;
    return out;
}

// ---------------------------------------------------------------------------

GateSimulator::GateSimulator(const IonTrapParams& p)
    : params_(p), layout_(p.n_max) {
    if (p.n_max < 2)
        throw std::invalid_argument("GateSimulator: n_max must be at least 2");
    const std::array<PulseStep, 3> steps = gate_pulse_sequence(p);

    for (std::size_t s = 0; s < 3; ++s) {
        if (p.calibrate_pulses) {
            CalibratedDuration cal = calibrate_pulse(steps[s], p);
            durations_[s] = cal.duration;
            calibration_interior_ = calibration_interior_ && cal.interior_maximum;
        } else {
            durations_[s] = pulse_duration(steps[s], p);
        }
    }

    ComplexMatrix h1 = build_hamiltonian(p, &steps[0]);
    ComplexMatrix h2 = build_hamiltonian(p, &steps[1]);
    ComplexMatrix u1 = matrix_exp_hermitian_generator(h1, durations_[0]);
    ComplexMatrix u2 = matrix_exp_hermitian_generator(h2, durations_[1]);
    ComplexMatrix u3 = durations_[2] == durations_[0]
                           ? u1
                           : matrix_exp_hermitian_generator(h1, durations_[2]);
    total_ = u3 * u2 * u1;

    // Report in the interaction picture of the free Hamiltonian: unwind
    // exp(-i H0 T) so that the sideband phases compose to (-1)^{e1 e2}
    // instead of carrying a duration-dependent single-qubit phase.
    ComplexMatrix h0 = build_hamiltonian(p, nullptr);
    const double t_total = durations_[0] + durations_[1] + durations_[2];
    for (std::size_t r = 0; r < layout_.total(); ++r) {
        const Complex phase = std::exp(Complex(0.0, h0(r, r).real() * t_total));
        for (std::size_t c = 0; c < layout_.total(); ++c) total_(r, c) *= phase;
    }
}

StateVector GateSimulator::run(const StateVector& psi4) const {
    if (psi4.dim() != 4)
        throw std::invalid_argument("GateSimulator::run: input must be 4-dimensional");
    if (!psi4.is_normalized(1e-9))
        throw std::invalid_argument("GateSimulator::run: input not normalized");
    StateVector full(layout_.total());
    for (std::size_t e1 = 0; e1 < 2; ++e1)
        for (std::size_t e2 = 0; e2 < 2; ++e2)
            full[layout_.index(e1, e2, 0, 0)] = psi4[2 * e1 + e2];
    return StateVector(total_ * full.amplitudes());
}

StateVector run_gate_sequence(const StateVector& psi4, const IonTrapParams& p) {
    return GateSimulator(p).run(psi4);
}

ReducedOutput reduced_output(const StateVector& full_state,
                             const HilbertLayout& layout) {
    if (full_state.dim() != layout.total())
        throw std::invalid_argument("reduced_output: state does not match layout");

    // rho6 over ion1 (x) ion2, phonons traced directly from amplitudes
    const std::size_t phonons = layout.cm_dim * layout.r_dim;
    ComplexMatrix rho6(6, 6);
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            Complex acc(0.0, 0.0);
            for (std::size_t ph = 0; ph < phonons; ++ph)
                acc += full_state[a * phonons + ph] * std::conj(full_state[b * phonons + ph]);
            rho6(a, b) = acc;
        }

    // computational block: ion 2 restricted to {g, e}
    ComplexMatrix rho4(4, 4);
    for (std::size_t a1 = 0; a1 < 2; ++a1)
        for (std::size_t a2 = 0; a2 < 2; ++a2)
            for (std::size_t b1 = 0; b1 < 2; ++b1)
                for (std::size_t b2 = 0; b2 < 2; ++b2)
                    rho4(2 * a1 + a2, 2 * b1 + b2) = rho6(3 * a1 + a2, 3 * b1 + b2);

    ReducedOutput out{DensityMatrix(std::move(rho4)), 0.0};
    out.leakage = 1.0 - out.rho4.trace_real();
    if (out.leakage < -1e-12)
        throw std::runtime_error("reduced_output: negative leakage beyond tolerance");
    return out;
}

SimulatedProcess simulate_process(const IonTrapParams& p, const InputDesign& design,
                                  long shots, std::uint64_t seed, bool psd_clip) {
    if (design.states.size() != 16)
        throw std::invalid_argument("simulate_process: need 16 design states");
    for (const StateVector& c : design.states) {
        // product check: the 2x2 amplitude matrix of a product state is rank 1
        const Complex det = c[0] * c[3] - c[1] * c[2];
        if (std::abs(det) > 1e-9)
            throw std::invalid_argument(
                "simulate_process: design contains entangled states; the gate "
                "characterization only allows unentangled preparations");
    }

    const MMatrix m = build_m_matrix(design);
    GateSimulator sim(p);

    SimulatedProcess result;
    result.durations = sim.durations();
    std::vector<DensityMatrix> outputs;
    outputs.reserve(16);
    for (std::size_t k = 0; k < 16; ++k) {
        StateVector full = sim.run(design.states[k]);
        ReducedOutput red = reduced_output(full, sim.layout());
        result.leakage[k] = red.leakage;
        if (shots > 0) {
            const std::array<double, 16> est =
                simulate_pauli_measurements(red.rho4, shots, seed * 131 + k);
            std::array<Complex, 16> lams;
            for (std::size_t q = 0; q < 16; ++q) lams[q] = est[q];
            DensityMatrix rho_hat = reconstruct_from_coefficients(lams);
            if (psd_clip) rho_hat = clip_to_psd(rho_hat, rho_hat.trace_real());
            outputs.push_back(std::move(rho_hat));
        } else {
            outputs.push_back(std::move(red.rho4));
        }
    }
    result.r = recover_transfer_operators(outputs, m);
    return result;
}

}  // namespace qproc
