#pragma once

#include <vector>

#include "dtn/solver.hpp"

namespace dtn {
namespace oracle {

/// One refinement level of a convergence study.
struct StudyLevel {
    double dx = 0.0;
    double dt = 0.0;
    double max_err = 0.0;
    double l2_err = 0.0;
};

struct ConvergenceStudy {
    std::vector<StudyLevel> levels;
    std::vector<double> observed_orders;  // log2 ratios of successive max errors

    double finest_order() const { return observed_orders.empty() ? 0.0 : observed_orders.back(); }
};

/// Runs the forced solver against the exact manufactured field on a ladder of
/// simultaneously halved (dx, dt) levels; errors are taken at the final time.
ConvergenceStudy manufactured_study(const ManufacturedSolution& ms, Nonlinearity nonlinearity,
                                    const GridSpec& base_grid, int levels);

/// Max-norm discrepancy at the final time between the Crank-Nicolson and
/// explicit RK4 integrations of the same semi-discrete system.
double cross_integrator_study(const GridSpec& grid, const SolverConfig& config,
                              const BoundarySource& boundary, double T_short);

/// Neumann trace of a 4x-refined run, sampled on the coarse snapshot grid,
/// plus the coarse and 2x-refined discrepancies against it.
struct RichardsonStudy {
    std::vector<double> times;
    std::vector<cplx> reference_P;
    double coarse_err = 0.0;  // max |P_coarse - P_ref|
    double fine_err = 0.0;    // max |P_2x - P_ref|
    double ratio() const { return fine_err > 0.0 ? coarse_err / fine_err : 0.0; }
};
RichardsonStudy richardson_reference(const GridSpec& grid, const SolverConfig& config,
                                     const BoundarySource& boundary);

}  // namespace oracle
}  // namespace dtn
