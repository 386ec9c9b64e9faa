#include "qproc/commands.hpp"

#include "qproc/serialization.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <mutex>
#include <thread>

namespace qproc {

namespace fs = std::filesystem;

ComplexMatrix ideal_gate_matrix() {
    ComplexMatrix u = ComplexMatrix::identity(4);
    u(3, 3) = -1.0;
    return u;
}

namespace {

OptimizerConfig optimizer_from(const RunConfig& cfg) {
    OptimizerConfig opt;
    opt.seed = cfg.seed + 0x9e3779b9;
    return opt;
}

int prepare_output_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir)) {
        std::fprintf(stderr, "error: cannot create output directory '%s'\n",
                     cfg.output_dir.c_str());
        return 1;
    }
    return 0;
}

std::string out_path(const RunConfig& cfg, const char* name) {
    return (fs::path(cfg.output_dir) / name).string();
}

void write_channel_outputs(const RunConfig& cfg, const TransferOperators& r,
                           const GateMetrics& metrics) {
    write_text_file(out_path(cfg, "egrid.csv"), complex_matrix_csv(build_egrid(r)));
    write_text_file(out_path(cfg, "metrics.json"), gate_metrics_json(metrics));
    write_text_file(out_path(cfg, "transfer_operators.json"),
                    transfer_operators_json(r));
}

}  // namespace

int cmd_ideal(const RunConfig& cfg) {
    if (int rc = prepare_output_dir(cfg)) return rc;
    const TransferOperators r = transfer_operators_of_unitary(ideal_gate_matrix());
    const GateMetrics metrics = compute_all_metrics(r, ideal_gate_matrix(),
                                                    optimizer_from(cfg));
    write_channel_outputs(cfg, r, metrics);
    std::printf("ideal gate: F=%.12f P=%.12f Q=%.9f E=%.9f\n", metrics.fidelity,
                metrics.purity, metrics.quantum_degree,
                metrics.entanglement_capability);
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    if (int rc = prepare_output_dir(cfg)) return rc;
    const InputDesign design = product_input_design();
    const SimulatedProcess sp =
        simulate_process(cfg.iontrap, design, cfg.shots, cfg.seed, cfg.psd_clip);
    const GateMetrics metrics =
        compute_all_metrics(sp.r, ideal_gate_matrix(), optimizer_from(cfg));
    write_channel_outputs(cfg, sp.r, metrics);
    write_text_file(out_path(cfg, "leakage.csv"), leakage_csv(design.labels, sp.leakage));
    std::printf(
        "simulate: omega1=%g omega2=%g eta_cm=%g eta_r=%g shots=%ld -> "
        "F=%.6f P=%.6f Q=%.6f E=%+.6f leak=%.3e\n",
        cfg.iontrap.omega1, cfg.iontrap.omega2, cfg.iontrap.eta_cm, cfg.iontrap.eta_r,
        cfg.shots, metrics.fidelity, metrics.purity, metrics.quantum_degree,
        metrics.entanglement_capability, metrics.max_leakage);
    return 0;
}

int cmd_sweep(const RunConfig& cfg, int workers) {
    if (int rc = prepare_output_dir(cfg)) return rc;
    if (cfg.sweep.omega_values.empty() || cfg.sweep.eta_values.empty()) {
        std::fprintf(stderr, "error: sweep lists must be non-empty\n");
        return 1;
    }

    struct Point {
        double omega, eta;
    };
    std::vector<Point> grid;
    for (double omega : cfg.sweep.omega_values)
        for (double eta : cfg.sweep.eta_values) grid.push_back({omega, eta});

    const InputDesign design = product_input_design();
    std::vector<SweepRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= grid.size() || failed.load()) return;
            try {
                IonTrapParams p = cfg.iontrap;
                p.omega1 = p.omega2 = grid[idx].omega;
                p.eta_cm = p.eta_r = grid[idx].eta;
                const SimulatedProcess sp = simulate_process(
                    p, design, cfg.shots, cfg.seed + 977 * idx, cfg.psd_clip);
                OptimizerConfig opt = optimizer_from(cfg);
                opt.seed += idx;
                rows[idx] = {grid[idx].omega, grid[idx].eta,
                             compute_all_metrics(sp.r, ideal_gate_matrix(), opt)};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                error_message = e.what();
                return;
            }
        }
    };

    const int n_workers =
        std::max(1, std::min<int>(workers, static_cast<int>(grid.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    if (failed.load()) {
        std::fprintf(stderr, "error: sweep point failed: %s\n", error_message.c_str());
        return 1;
    }

    write_text_file(out_path(cfg, "sweep.csv"), sweep_csv(rows));
    std::printf("sweep: %zu points (%zu omega x %zu eta) -> %s\n", grid.size(),
                cfg.sweep.omega_values.size(), cfg.sweep.eta_values.size(),
                out_path(cfg, "sweep.csv").c_str());
    return 0;
}

int cmd_metrics(const RunConfig& cfg) {
    if (cfg.transfer_ops.empty()) {
        std::fprintf(stderr,
                     "error: metrics mode needs a 'transfer_ops' file in the config\n");
        return 1;
    }
    if (int rc = prepare_output_dir(cfg)) return rc;
    const TransferOperators r =
        parse_transfer_operators_json(read_text_file(cfg.transfer_ops));
    const GateMetrics metrics =
        compute_all_metrics(r, ideal_gate_matrix(), optimizer_from(cfg));
    write_text_file(out_path(cfg, "metrics.json"), gate_metrics_json(metrics));
    std::printf("metrics: F=%.6f P=%.6f Q=%.6f E=%+.6f leak=%.3e converged=%d\n",
                metrics.fidelity, metrics.purity, metrics.quantum_degree,
                metrics.entanglement_capability, metrics.max_leakage,
                metrics.optimizer_converged ? 1 : 0);
    return 0;
}

int cmd_liouvillian(const RunConfig& cfg) {
    if (cfg.transfer_ops.empty()) {
        std::fprintf(
            stderr,
            "error: liouvillian mode needs a 'transfer_ops' file in the config\n");
        return 1;
    }
    if (!(cfg.time > 0.0)) {
        std::fprintf(stderr, "error: liouvillian mode needs a positive 'time'\n");
        return 1;
    }
    if (int rc = prepare_output_dir(cfg)) return rc;

    const TransferOperators r =
        parse_transfer_operators_json(read_text_file(cfg.transfer_ops));
    ComplexMatrix l_t;
    try {
        l_t = estimate_liouvillian(r, cfg.time);
    } catch (const NonLoggableChannelError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    write_text_file(out_path(cfg, "liouvillian.csv"), complex_matrix_csv(l_t));

    if (!cfg.transfer_ops_2t.empty()) {
        const TransferOperators r2 =
            parse_transfer_operators_json(read_text_file(cfg.transfer_ops_2t));
        ComplexMatrix l_2t;
        try {
            l_2t = estimate_liouvillian(r2, 2.0 * cfg.time);
        } catch (const NonLoggableChannelError& e) {
            std::fprintf(stderr, "error: second snapshot: %s\n", e.what());
            return 2;
        }
        ComplexMatrix diff = l_t;
        diff -= l_2t;
        const double residual = diff.max_abs();
        const double threshold = 1e-3;
        nlohmann::json doc = {{"residual", residual},
                              {"threshold", threshold},
                              {"markovian", residual < threshold}};
        write_text_file(out_path(cfg, "markovianity.json"), doc.dump(2) + "\n");
        std::printf("liouvillian: two-snapshot residual %.3e (%s)\n", residual,
                    residual < threshold ? "markovian" : "non-markovian flagged");
    } else {
        std::printf("liouvillian: generator written to %s\n",
                    out_path(cfg, "liouvillian.csv").c_str());
    }
    return 0;
}

}  // namespace qproc
