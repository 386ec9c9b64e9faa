#include "qproc/serialization.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qproc {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ComplexMatrix build_egrid(const TransferOperators& r) {
    ComplexMatrix e(16, 16);
    for (std::size_t n = 0; n < 16; ++n)
        for (std::size_t m = 0; m < 16; ++m) {
            const std::size_t i = n / 4, j = n % 4;
            const std::size_t ip = m / 4, jp = m % 4;
            e(n, m) = r.op(ip, i)(jp, j);
        }
    return e;
}

std::string complex_matrix_csv(const ComplexMatrix& m) {
    std::ostringstream out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
        }
        out << '\n';
    }
    return out.str();
}

ComplexMatrix parse_complex_matrix_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::invalid_argument("matrix csv: no rows");
    const std::size_t cols = rows[0].size() / 2;
    ComplexMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != 2 * cols)
            throw std::invalid_argument("matrix csv: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = Complex(rows[r][2 * c], rows[r][2 * c + 1]);
    }
    return m;
}

std::string transfer_operators_json(const TransferOperators& r) {
    json ops = json::array();
    for (std::size_t ip = 0; ip < 4; ++ip)
        for (std::size_t i = 0; i < 4; ++i) {
            const ComplexMatrix& op = r.op(ip, i);
            json entries = json::array();
            for (std::size_t row = 0; row < op.rows(); ++row)
                for (std::size_t col = 0; col < op.cols(); ++col)
                    entries.push_back({op(row, col).real(), op(row, col).imag()});
            ops.push_back({{"i_prime", ip}, {"i", i}, {"entries", entries}});
        }
    json doc = {{"out_dim", r.out_dim}, {"operators", ops}};
    return doc.dump(2) + "\n";
}

TransferOperators parse_transfer_operators_json(const std::string& text) {
    const json doc = json::parse(text);
    TransferOperators r;
    r.out_dim = doc.at("out_dim").get<int>();
    const std::size_t d = static_cast<std::size_t>(r.out_dim);
    if (doc.at("operators").size() != 16)
        throw std::invalid_argument("transfer operators json: need 16 operators");
    for (const json& item : doc.at("operators")) {
        const std::size_t ip = item.at("i_prime").get<std::size_t>();
        const std::size_t i = item.at("i").get<std::size_t>();
        const json& entries = item.at("entries");
        if (entries.size() != d * d)
            throw std::invalid_argument("transfer operators json: bad entry count");
        ComplexMatrix op(d, d);
        for (std::size_t k = 0; k < d * d; ++k)
            op(k / d, k % d) =
                Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
        r.op(ip, i) = std::move(op);
    }
    return r;
}

std::string gate_metrics_json(const GateMetrics& m) {
    json doc = {{"fidelity", m.fidelity},
                {"purity", m.purity},
                {"quantum_degree", m.quantum_degree},
                {"entanglement_capability", m.entanglement_capability},
                {"max_leakage", m.max_leakage},
                {"optimizer_converged", m.optimizer_converged}};
    return doc.dump(2) + "\n";
}

GateMetrics parse_gate_metrics_json(const std::string& text) {
    const json doc = json::parse(text);
    GateMetrics m;
    m.fidelity = doc.at("fidelity").get<double>();
    m.purity = doc.at("purity").get<double>();
    m.quantum_degree = doc.at("quantum_degree").get<double>();
    m.entanglement_capability = doc.at("entanglement_capability").get<double>();
    m.max_leakage = doc.at("max_leakage").get<double>();
    m.optimizer_converged = doc.at("optimizer_converged").get<bool>();
    return m;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "omega_over_nu,eta,fidelity,purity,quantum_degree,"
           "entanglement_capability,max_leakage\n";
    for (const SweepRow& row : rows) {
        out << format_double(row.omega_over_nu) << ',' << format_double(row.eta) << ','
            << format_double(row.metrics.fidelity) << ','
            << format_double(row.metrics.purity) << ','
            << format_double(row.metrics.quantum_degree) << ','
            << format_double(row.metrics.entanglement_capability) << ','
            << format_double(row.metrics.max_leakage) << '\n';
    }
    return out.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    std::vector<SweepRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 7) throw std::invalid_argument("sweep csv: bad row");
        SweepRow row;
        row.omega_over_nu = vals[0];
        row.eta = vals[1];
        row.metrics.fidelity = vals[2];
        row.metrics.purity = vals[3];
        row.metrics.quantum_degree = vals[4];
        row.metrics.entanglement_capability = vals[5];
        row.metrics.max_leakage = vals[6];
        rows.push_back(row);
    }
    return rows;
}

std::string leakage_csv(const std::vector<std::string>& labels,
                        const std::array<double, 16>& leakage) {
    std::ostringstream out;
    out << "input_index,label,leakage\n";
    for (std::size_t k = 0; k < 16; ++k)
        out << k << ',' << (k < labels.size() ? labels[k] : "") << ','
            << format_double(leakage[k]) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace qproc
