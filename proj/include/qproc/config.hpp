#pragma once

#include "qproc/iontrap.hpp"

#include <string>
#include <vector>

namespace qproc {

struct SweepSpec {
    std::vector<double> omega_values = {0.05, 0.1, 0.2, 0.5};
    std::vector<double> eta_values = {0.1, 0.5, 0.9};
};

struct RunConfig {
    std::string mode = "ideal";  // ideal | simulate | sweep | metrics | liouvillian
    IonTrapParams iontrap;
    long shots = 0;  // 0 = exact tomography
    std::uint64_t seed = 0;
    SweepSpec sweep;
    std::string output_dir = ".";
    bool psd_clip = false;

    // metrics / liouvillian modes
    std::string transfer_ops;     // serialized TransferOperators (snapshot at t)
    std::string transfer_ops_2t;  // optional second snapshot at 2t
    double time = 1.0;            // evolution time of the first snapshot
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace qproc
