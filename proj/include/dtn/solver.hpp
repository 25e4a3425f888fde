#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dtn/boundary.hpp"
#include "dtn/diagnostics.hpp"
#include "dtn/grid.hpp"

namespace dtn {

/// Thrown when a time step cannot be completed; carries the failing time.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double t)
        : std::runtime_error(what + " at t = " + std::to_string(t)), time_(t) {}
    double failing_time() const { return time_; }

private:
    double time_;
};

using ForcingFn = std::function<cplx(double x, double t)>;

struct SolverConfig {
    Nonlinearity nonlinearity = Nonlinearity::Defocusing;
    double fixed_point_tol = 1e-12;
    int max_fixed_point_iters = 50;
    int snapshot_stride = 10;
    ForcingFn forcing;          // empty = unforced
    bool propagate_qt = false;  // also evolve v = q_t and record its Neumann trace

    double lambda() const { return lambda_of(nonlinearity); }
    void validate() const;
};

struct RunResult {
    TraceSeries traces;
    NormSeries norms;
    CorrectionSeries corrections;
    std::vector<ComplexField> snapshots;
    ComplexField final_field;
    /// v_x(0, t_k) from the propagated derivative equation; empty unless
    /// SolverConfig::propagate_qt is set.
    std::vector<cplx> neumann_rate;

    double mass_leakage_max() const;
};

/// Second-order one-sided Neumann extraction (-3 q0 + 4 q1 - q2) / (2 dx),
/// exact on polynomials up to degree 2.
cplx neumann_trace(const ComplexField& field, const GridSpec& grid);

/// Crank-Nicolson time stepper for
///   i q_t + q_xx - 2 lambda |q|^2 q + i sigma(x) q - f = 0
/// on [0, L] with q(0,t) = Q(t) and q(L,t) = 0. The cubic term is evaluated
/// at the half-sum state by Picard iteration; everything else is implicit and
/// solved by one tridiagonal sweep per iteration.
class Stepper {
public:
    Stepper(const GridSpec& grid, const SolverConfig& config, BoundarySource boundary);

    /// One step from field.time_tag to field.time_tag + dt.
    ComplexField step(const ComplexField& field, double t) const;

    /// Classical four-stage explicit step of the same semi-discrete system;
    /// validation-scale only (conditionally stable).
    ComplexField step_rk4(const ComplexField& field, double t) const;

    const GridSpec& grid() const { return grid_; }

private:
    std::vector<cplx> semi_discrete_rhs(const std::vector<cplx>& q, double t) const;

    GridSpec grid_;
    SolverConfig config_;
    BoundarySource boundary_;
    std::vector<double> sigma_;
    TridiagonalSolver interior_solver_;
};

/// Single Crank-Nicolson step (convenience wrapper around Stepper).
ComplexField step(const ComplexField& field, double t, const GridSpec& grid,
                  const SolverConfig& config, const BoundarySource& boundary);

/// Single explicit RK4 step of the same semi-discrete system.
ComplexField oracle_step_rk4(const ComplexField& field, double t, const GridSpec& grid,
                             const SolverConfig& config, const BoundarySource& boundary);

/// Time-step from q(x,0) = 0 (or the supplied initial field) to the grid
/// horizon, recording traces, norms, and identity corrections every
/// snapshot_stride steps. Deterministic for fixed inputs.
RunResult run(const GridSpec& grid, const SolverConfig& config, const BoundarySource& boundary,
              std::optional<ComplexField> initial = std::nullopt);

}  // namespace dtn
