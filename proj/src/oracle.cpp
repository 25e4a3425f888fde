#include "dtn/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace dtn {
namespace oracle {

namespace {

GridSpec refined(const GridSpec& g, int factor) {
    return GridSpec(g.length(), g.intervals() * factor, g.dt() / factor, g.horizon(),
                    g.sponge_fraction(), g.sponge_strength());
}

}  // namespace

ConvergenceStudy manufactured_study(const ManufacturedSolution& ms, Nonlinearity nonlinearity,
                                    const GridSpec& base_grid, int levels) {
    if (levels < 3) throw std::invalid_argument("manufactured_study: need >= 3 levels");
    const double lambda = lambda_of(nonlinearity);

    SolverConfig config;
    config.nonlinearity = nonlinearity;
    config.forcing = [ms, lambda](double x, double t) { return ms.forcing(lambda, x, t); };
    config.snapshot_stride = std::max(1, base_grid.steps());  // endpoints only

    ConvergenceStudy study;
    for (int level = 0; level < levels; ++level) {
        const GridSpec grid = refined(base_grid, 1 << level);
        SolverConfig cfg = config;
        cfg.snapshot_stride = grid.steps();
        const RunResult result = run(grid, cfg, boundary_from(ms));

        StudyLevel row;
        row.dx = grid.dx();
        row.dt = grid.dt();
        const double T = grid.horizon();
        double max_err = 0.0, l2_err = 0.0;
        const auto w = grid.quadrature_weights();
        for (int j = 0; j <= grid.intervals(); ++j) {
            const cplx exact = ms.field(grid.node(j), T);
            const double e = std::abs(result.final_field.values[j] - exact);
            max_err = std::max(max_err, e);
            l2_err += w[j] * e * e;
        }
        row.max_err = max_err;
        row.l2_err = std::sqrt(l2_err);
        study.levels.push_back(row);
    }
    for (std::size_t i = 1; i < study.levels.size(); ++i) {
        study.observed_orders.push_back(
            std::log2(study.levels[i - 1].max_err / study.levels[i].max_err));
    }
    return study;
}

double cross_integrator_study(const GridSpec& grid, const SolverConfig& config,
                              const BoundarySource& boundary, double T_short) {
    if (!(T_short > 0.0 && T_short <= 5.0)) {
        throw std::invalid_argument("cross_integrator_study: T_short must lie in (0, 5]");
    }
    const GridSpec short_grid(grid.length(), grid.intervals(), grid.dt(), T_short,
                              grid.sponge_fraction(), grid.sponge_strength());
    Stepper stepper(short_grid, config, boundary);

    const std::size_t nodes = static_cast<std::size_t>(short_grid.nodes());
    ComplexField cn(nodes, 0.0), rk(nodes, 0.0);
    cn.values[0] = rk.values[0] = boundary.Q(0.0);
    for (int n = 0; n < short_grid.steps(); ++n) {
        const double t = static_cast<double>(n) * short_grid.dt();
        cn = stepper.step(cn, t);
        try {
            rk = stepper.step_rk4(rk, t);
        } catch (const SolverError&) {
            throw SolverError("explicit instability: reduce dt", t);
        }
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
        diff = std::max(diff, std::abs(cn.values[j] - rk.values[j]));
    }
    return diff;
}

RichardsonStudy richardson_reference(const GridSpec& grid, const SolverConfig& config,
                                     const BoundarySource& boundary) {
    RichardsonStudy study;

    const RunResult coarse = run(grid, config, boundary);

    SolverConfig cfg2 = config;
    cfg2.snapshot_stride = config.snapshot_stride * 2;
    const RunResult fine = run(refined(grid, 2), cfg2, boundary);

    SolverConfig cfg4 = config;
    cfg4.snapshot_stride = config.snapshot_stride * 4;
    const RunResult ref = run(refined(grid, 4), cfg4, boundary);

    const std::size_t n = std::min({coarse.traces.size(), fine.traces.size(), ref.traces.size()});
    study.times.assign(ref.traces.times.begin(), ref.traces.times.begin() + n);
    study.reference_P.assign(ref.traces.P.begin(), ref.traces.P.begin() + n);
    for (std::size_t k = 0; k < n; ++k) {
        study.coarse_err = std::max(study.coarse_err,
                                    std::abs(coarse.traces.P[k] - ref.traces.P[k]));
        study.fine_err = std::max(study.fine_err,
                                  std::abs(fine.traces.P[k] - ref.traces.P[k]));
    }
    return study;
}

}  // namespace oracle
}  // namespace dtn
