#include "qproc/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <thread>

// qproc: characterize a two-qubit quantum process from sixteen product
// inputs and single-qubit tomography, compute gate-quality metrics, and
// drive the simulated ion-trap gate.

int main(int argc, char** argv) {
    CLI::App app{"two-qubit process characterization toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    long shots = -1;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 4;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "random seed (overrides config)");
        sub->add_option("--shots", shots,
                        "measurement shots per observable, 0 = exact");
        sub->add_option("--workers", workers, "sweep worker threads");
    };

    CLI::App* ideal = app.add_subcommand("ideal", "ideal-gate grids and metrics");
    CLI::App* simulate =
        app.add_subcommand("simulate", "characterize the simulated ion-trap gate");
    CLI::App* sweep =
        app.add_subcommand("sweep", "metric sweep over Rabi frequency and Lamb-Dicke");
    CLI::App* metrics =
        app.add_subcommand("metrics", "metrics from a transfer-operators file");
    CLI::App* liouvillian = app.add_subcommand(
        "liouvillian", "estimate the generator from one or two snapshots");
    for (CLI::App* sub : {ideal, simulate, sweep, metrics, liouvillian})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    qproc::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = qproc::load_config_file(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (shots >= 0) cfg.shots = shots;

        if (ideal->parsed()) return qproc::cmd_ideal(cfg);
        if (simulate->parsed()) return qproc::cmd_simulate(cfg);
        if (sweep->parsed()) return qproc::cmd_sweep(cfg, workers);
        if (metrics->parsed()) return qproc::cmd_metrics(cfg);
        if (liouvillian->parsed()) return qproc::cmd_liouvillian(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
