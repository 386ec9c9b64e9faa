#include "qproc/optim.hpp"

#include "qproc/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qproc {

OptimResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                        double step, int max_iters, double tolerance) {
    const std::size_t n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    std::vector<double> fv(n + 1);
    long evals = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        fv[i] = f(pts[i]);
        ++evals;
    }

    std::vector<std::size_t> order(n + 1);
    OptimResult res;
    for (int iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        if (std::abs(fv[worst] - fv[best]) <= tolerance) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + t * (centroid[d] - pts[worst][d]);
            return p;
        };

        std::vector<double> xr = along(alpha);
        const double fr = f(xr);
        ++evals;
        if (fr < fv[order[0]]) {
            std::vector<double> xe = along(alpha * gamma);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                pts[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            std::vector<double> xc = along(outside ? rho : -rho);
            const double fc = f(xc);
            ++evals;
            if (fc < (outside ? fr : fv[worst])) {
                pts[worst] = std::move(xc);
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        pts[i][d] = pts[best][d] + sigma * (pts[i][d] - pts[best][d]);
                    fv[i] = f(pts[i]);
                    ++evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = pts[best];
    res.value = fv[best];
    res.evaluations = evals;
    return res;
}

OptimResult multistart_minimize(const Objective& f, const std::vector<double>& lo,
                                const std::vector<double>& hi,
                                const OptimizerConfig& cfg) {
    const std::size_t n = lo.size();
    Rng rng(cfg.seed);
    OptimResult best;
    best.value = std::numeric_limits<double>::infinity();
    long evals = 0;

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::vector<double> x0(n);
        for (std::size_t d = 0; d < n; ++d) x0[d] = rng.uniform(lo[d], hi[d]);
        const double step = 0.25 * (hi[0] - lo[0] > 0 ? hi[0] - lo[0] : 1.0);
        OptimResult r = nelder_mead(f, x0, step, cfg.max_iters, cfg.tolerance);
        evals += r.evaluations;
        if (r.value < best.value) best = r;
    }

    // polish the incumbent with shrinking initial simplices
    for (double step : {0.05, 0.005}) {
        OptimResult r = nelder_mead(f, best.x, step, cfg.max_iters, cfg.tolerance);
        evals += r.evaluations;
        if (r.value <= best.value) best = r;
    }

    best.evaluations = evals;
    return best;
}

}  // namespace qproc
