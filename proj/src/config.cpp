#include "qproc/config.hpp"

#include "qproc/serialization.hpp"

#include <json.hpp>

namespace qproc {

using nlohmann::json;

RunConfig parse_config(const std::string& json_text) {
    const json doc = json::parse(json_text);
    RunConfig cfg;
    cfg.mode = doc.value("mode", cfg.mode);
    cfg.iontrap.eta_cm = doc.value("eta_cm", cfg.iontrap.eta_cm);
    cfg.iontrap.eta_r = doc.value("eta_r", cfg.iontrap.eta_r);
    cfg.iontrap.delta1 = doc.value("delta1", cfg.iontrap.delta1);
    cfg.iontrap.delta2 = doc.value("delta2", cfg.iontrap.delta2);
    cfg.iontrap.omega1 = doc.value("omega1", cfg.iontrap.omega1);
    cfg.iontrap.omega2 = doc.value("omega2", cfg.iontrap.omega2);
    cfg.iontrap.n_max = doc.value("n_max", cfg.iontrap.n_max);
    cfg.iontrap.calibrate_pulses =
        doc.value("calibrate_pulses", cfg.iontrap.calibrate_pulses);
    cfg.shots = doc.value("shots", cfg.shots);
    cfg.seed = doc.value("seed", cfg.seed);
    if (doc.contains("sweep")) {
        const json& sw = doc.at("sweep");
        if (sw.contains("omega_values"))
            cfg.sweep.omega_values = sw.at("omega_values").get<std::vector<double>>();
        if (sw.contains("eta_values"))
            cfg.sweep.eta_values = sw.at("eta_values").get<std::vector<double>>();
    }
    cfg.output_dir = doc.value("output_dir", cfg.output_dir);
    cfg.psd_clip = doc.value("psd_clip", cfg.psd_clip);
    cfg.transfer_ops = doc.value("transfer_ops", cfg.transfer_ops);
    cfg.transfer_ops_2t = doc.value("transfer_ops_2t", cfg.transfer_ops_2t);
    cfg.time = doc.value("time", cfg.time);

    if (cfg.iontrap.n_max < 2)
        throw std::invalid_argument("config: n_max must be at least 2");
    for (double w : cfg.sweep.omega_values)
        if (!(w > 0.0))
            throw std::invalid_argument("config: sweep omega values must be positive");
    if (cfg.shots < 0) throw std::invalid_argument("config: shots must be >= 0");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    return parse_config(read_text_file(path));
}

std::string serialize_config(const RunConfig& cfg) {
    json doc = {{"mode", cfg.mode},
                {"eta_cm", cfg.iontrap.eta_cm},
                {"eta_r", cfg.iontrap.eta_r},
                {"delta1", cfg.iontrap.delta1},
                {"delta2", cfg.iontrap.delta2},
                {"omega1", cfg.iontrap.omega1},
                {"omega2", cfg.iontrap.omega2},
                {"n_max", cfg.iontrap.n_max},
                {"calibrate_pulses", cfg.iontrap.calibrate_pulses},
                {"shots", cfg.shots},
                {"seed", cfg.seed},
                {"sweep",
                 {{"omega_values", cfg.sweep.omega_values},
                  {"eta_values", cfg.sweep.eta_values}}},
                {"output_dir", cfg.output_dir},
                {"psd_clip", cfg.psd_clip},
                {"transfer_ops", cfg.transfer_ops},
                {"transfer_ops_2t", cfg.transfer_ops_2t},
                {"time", cfg.time}};
    return doc.dump(2) + "\n";
}

}  // namespace qproc
