#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qproc {

struct OptimizerConfig {
    int restarts = 32;
    int max_iters = 4000;
    double tolerance = 1e-8;
    std::uint64_t seed = 2024;
    int grid_points = 9;  // per-angle resolution of the final cross-check
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    long evaluations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Single Nelder-Mead run from x0 with the given initial step.
OptimResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                        double step, int max_iters, double tolerance);

// Multi-start minimization: `restarts` uniform seeds in [lo, hi]^n, each
// polished twice from the incumbent with shrinking steps.
OptimResult multistart_minimize(const Objective& f, const std::vector<double>& lo,
                                const std::vector<double>& hi,
                                const OptimizerConfig& cfg);

}  // namespace qproc
