#pragma once

#include "qproc/metrics.hpp"
#include "qproc/tomography.hpp"

#include <string>

// File formats: JSON for operator sets and metric records, CSV with 17
// significant digits (re, im column pairs) for matrices, so that every
// emitted value round-trips bit-faithfully through parsing.

namespace qproc {

std::string format_double(double v);  // %.17g

// 16x16 grid E(n, m) = <j'| R_{i'i} |j>, n = 4i + j, m = 4i' + j'.
ComplexMatrix build_egrid(const TransferOperators& r);

std::string complex_matrix_csv(const ComplexMatrix& m);
ComplexMatrix parse_complex_matrix_csv(const std::string& text);

std::string transfer_operators_json(const TransferOperators& r);
TransferOperators parse_transfer_operators_json(const std::string& text);

std::string gate_metrics_json(const GateMetrics& m);
GateMetrics parse_gate_metrics_json(const std::string& text);

struct SweepRow {
    double omega_over_nu = 0.0;
    double eta = 0.0;
    GateMetrics metrics;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

std::string leakage_csv(const std::vector<std::string>& labels,
                        const std::array<double, 16>& leakage);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace qproc
