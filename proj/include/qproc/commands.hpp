#pragma once

#include "qproc/config.hpp"

namespace qproc {

// Batch drivers behind the CLI subcommands. Each writes its data files
// into cfg.output_dir and returns a process exit code. All runs are
// deterministic given (config, seed).

int cmd_ideal(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg, int workers);
int cmd_metrics(const RunConfig& cfg);
int cmd_liouvillian(const RunConfig& cfg);

ComplexMatrix ideal_gate_matrix();  // diag(1, 1, 1, -1)

}  // namespace qproc
