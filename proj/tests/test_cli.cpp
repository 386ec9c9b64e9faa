#include <doctest.h>

#include "qproc/commands.hpp"
#include "qproc/serialization.hpp"
#include "test_helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace qproc;
using namespace qproc::testing;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("qproc_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QPROC_BINARY_PATH) + " " + args + " > /dev/null";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config round trip is the identity") {
    RunConfig cfg;
    cfg.mode = "sweep";
    cfg.iontrap.omega1 = 0.07;
    cfg.iontrap.omega2 = 0.09;
    cfg.iontrap.eta_cm = 0.4;
    cfg.iontrap.eta_r = 0.6;
    cfg.iontrap.delta1 = -1.1;
    cfg.iontrap.delta2 = -0.9;
    cfg.iontrap.n_max = 6;
    cfg.iontrap.calibrate_pulses = true;
    cfg.shots = 500;
    cfg.seed = 12345;
    cfg.sweep.omega_values = {0.03, 0.2};
    cfg.sweep.eta_values = {0.5};
    cfg.output_dir = "/tmp/somewhere";
    cfg.psd_clip = true;
    cfg.transfer_ops = "ops.json";
    cfg.transfer_ops_2t = "ops2.json";
    cfg.time = 0.25;

    RunConfig rt = parse_config(serialize_config(cfg));
    CHECK(serialize_config(rt) == serialize_config(cfg));
    CHECK(rt.mode == cfg.mode);
    CHECK(rt.iontrap.omega1 == cfg.iontrap.omega1);
    CHECK(rt.iontrap.n_max == cfg.iontrap.n_max);
    CHECK(rt.sweep.omega_values == cfg.sweep.omega_values);
    CHECK(rt.shots == cfg.shots);
    CHECK(rt.time == cfg.time);

    CHECK_THROWS_AS(parse_config("{\"n_max\": 1}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"sweep\": {\"omega_values\": [0.0]}}"),
                    std::invalid_argument);
}

TEST_CASE("serialization round trips: transfer operators, metrics, matrices") {
    Rng rng(71);
    KrausChannel ch = random_kraus_channel(rng, 3);
    InputDesign d = product_input_design();
    std::vector<DensityMatrix> outs;
    for (const StateVector& psi : d.states)
        outs.push_back(ch.apply(DensityMatrix::from_state(psi)));
    TransferOperators r = recover_transfer_operators(outs, build_m_matrix(d));

    TransferOperators rt = parse_transfer_operators_json(transfer_operators_json(r));
    for (std::size_t q = 0; q < 16; ++q)
        CHECK(max_entry_diff(rt.ops[q], r.ops[q]) == 0.0);

    ComplexMatrix e = build_egrid(r);
    ComplexMatrix ert = parse_complex_matrix_csv(complex_matrix_csv(e));
    CHECK(max_entry_diff(ert, e) == 0.0);

    GateMetrics m{0.85, 0.9, 0.7803300859, -0.25, 1e-4, true};
    GateMetrics mrt = parse_gate_metrics_json(gate_metrics_json(m));
    CHECK(mrt.fidelity == m.fidelity);
    CHECK(mrt.quantum_degree == m.quantum_degree);
    CHECK(mrt.optimizer_converged == m.optimizer_converged);

    std::vector<SweepRow> rows = {{0.05, 0.5, m}, {0.1, 0.5, m}};
    std::vector<SweepRow> rrt = parse_sweep_csv(sweep_csv(rows));
    REQUIRE(rrt.size() == 2);
    CHECK(rrt[0].omega_over_nu == 0.05);
    CHECK(rrt[1].metrics.fidelity == m.fidelity);
}

TEST_CASE("egrid indexing matches the sorting convention") {
    TransferOperators r = transfer_operators_of_unitary(ideal_gate_matrix());
    ComplexMatrix e = build_egrid(r);
    // R_30 = -|0><3|: <j'=0|R_30|j=3> = -1 at n = 4*0+3, m = 4*3+0
    CHECK(std::abs(e(3, 12) - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e(12, 3) - Complex(-1.0, 0.0)) < 1e-15);
    // grid Hermiticity under (n,m) swap + conjugation
    double herm = 0.0;
    for (std::size_t n = 0; n < 16; ++n)
        for (std::size_t m = 0; m < 16; ++m)
            herm = std::max(herm, std::abs(e(n, m) - std::conj(e(m, n))));
    CHECK(herm < 1e-12);
}

TEST_CASE("cmd_ideal writes grids and near-perfect metrics") {
    fs::path dir = make_temp_dir("ideal");
    RunConfig cfg;
    cfg.output_dir = dir.string();
    REQUIRE(cmd_ideal(cfg) == 0);

    GateMetrics m = parse_gate_metrics_json(read_text_file((dir / "metrics.json").string()));
    CHECK(m.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.purity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.quantum_degree == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.entanglement_capability == doctest::Approx(-0.5).epsilon(1e-6));

    ComplexMatrix e =
        parse_complex_matrix_csv(read_text_file((dir / "egrid.csv").string()));
    CHECK(std::abs(e(3, 12) - Complex(-1.0, 0.0)) < 1e-15);
    fs::remove_all(dir);
}

TEST_CASE("cmd_simulate is deterministic and parseable") {
    fs::path dir1 = make_temp_dir("sim1");
    fs::path dir2 = make_temp_dir("sim2");
    RunConfig cfg;
    cfg.iontrap.omega1 = cfg.iontrap.omega2 = 0.1;
    cfg.iontrap.n_max = 4;
    cfg.shots = 200;
    cfg.seed = 7;

    cfg.output_dir = dir1.string();
    REQUIRE(cmd_simulate(cfg) == 0);
    cfg.output_dir = dir2.string();
    REQUIRE(cmd_simulate(cfg) == 0);

    for (const char* name : {"egrid.csv", "metrics.json", "leakage.csv",
                             "transfer_operators.json"}) {
        const std::string a = read_text_file((dir1 / name).string());
        const std::string b = read_text_file((dir2 / name).string());
        CHECK(a == b);  // byte-identical rerun
        CHECK(!a.empty());
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("cmd_sweep emits one row per grid point, deterministically") {
    fs::path dir = make_temp_dir("sweep");
    RunConfig cfg;
    cfg.iontrap.n_max = 4;
    cfg.sweep.omega_values = {0.05, 0.1};
    cfg.sweep.eta_values = {0.5};
    cfg.output_dir = dir.string();
    REQUIRE(cmd_sweep(cfg, 2) == 0);
    const std::string first = read_text_file((dir / "sweep.csv").string());
    std::vector<SweepRow> rows = parse_sweep_csv(first);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].omega_over_nu == 0.05);
    CHECK(rows[1].omega_over_nu == 0.1);
    // fidelity non-increasing in omega at fixed eta
    CHECK(rows[0].metrics.fidelity >= rows[1].metrics.fidelity);

    REQUIRE(cmd_sweep(cfg, 1) == 0);  // different worker count, same bytes
    CHECK(read_text_file((dir / "sweep.csv").string()) == first);
    fs::remove_all(dir);
}

TEST_CASE("cmd_metrics and cmd_liouvillian consume serialized operators") {
    fs::path dir = make_temp_dir("liouv");
    // identity process: zero generator, zero residual
    TransferOperators r = identity_transfer_operators();
    write_text_file((dir / "ops.json").string(), transfer_operators_json(r));
    write_text_file((dir / "ops2.json").string(), transfer_operators_json(r));

    RunConfig cfg;
    cfg.output_dir = dir.string();
    cfg.transfer_ops = (dir / "ops.json").string();
    cfg.transfer_ops_2t = (dir / "ops2.json").string();
    cfg.time = 0.5;
    REQUIRE(cmd_liouvillian(cfg) == 0);

    ComplexMatrix l =
        parse_complex_matrix_csv(read_text_file((dir / "liouvillian.csv").string()));
    CHECK(l.max_abs() < 1e-10);
    const std::string mk = read_text_file((dir / "markovianity.json").string());
    CHECK(mk.find("\"markovian\": true") != std::string::npos);

    REQUIRE(cmd_metrics(cfg) == 0);
    GateMetrics m =
        parse_gate_metrics_json(read_text_file((dir / "metrics.json").string()));
    CHECK(m.quantum_degree == doctest::Approx(0.5).epsilon(1e-6));

    // a channel with a negative superoperator eigenvalue cannot be logged
    ComplexMatrix s_bad = ComplexMatrix::identity(16);
    s_bad(1, 1) = -0.5;
    write_text_file((dir / "bad.json").string(),
                    transfer_operators_json(transfer_operators_from_superoperator(s_bad)));
    cfg.transfer_ops = (dir / "bad.json").string();
    cfg.transfer_ops_2t.clear();
    CHECK(cmd_liouvillian(cfg) == 2);
    fs::remove_all(dir);
}

TEST_CASE("qproc binary: exit codes and byte-identical reruns") {
    fs::path dir = make_temp_dir("bin");
    const std::string cfg_path = (dir / "cfg.json").string();
    RunConfig cfg;
    cfg.iontrap.omega1 = cfg.iontrap.omega2 = 0.2;
    cfg.iontrap.n_max = 4;
    cfg.seed = 3;
    cfg.output_dir = (dir / "out1").string();
    write_text_file(cfg_path, serialize_config(cfg));

    REQUIRE(run_cli("simulate --config " + cfg_path) == 0);
    REQUIRE(run_cli("simulate --config " + cfg_path + " --out " +
                    (dir / "out2").string()) == 0);
    CHECK(read_text_file((dir / "out1" / "egrid.csv").string()) ==
          read_text_file((dir / "out2" / "egrid.csv").string()));

    // bad subcommand and unwritable output directory fail loudly
    CHECK(run_cli("bogus 2> /dev/null") != 0);
    CHECK(run_cli("simulate --config " + cfg_path +
                  " --out /proc/no_such_dir 2> /dev/null") != 0);

    // ideal mode needs no config at all
    REQUIRE(run_cli("ideal --out " + (dir / "out3").string()) == 0);
    CHECK(fs::exists(dir / "out3" / "metrics.json"));
    fs::remove_all(dir);
}
