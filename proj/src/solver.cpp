#include "dtn/solver.hpp"

#include <cmath>
#include <deque>
#include <memory>

namespace dtn {

void SolverConfig::validate() const {
    if (!(fixed_point_tol > 0.0)) throw std::invalid_argument("fixed_point_tol must be positive");
    if (max_fixed_point_iters < 1) throw std::invalid_argument("max_fixed_point_iters must be >= 1");
    if (snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be >= 1");
    if (propagate_qt && forcing) {
        throw std::invalid_argument("propagate_qt requires an unforced run");
    }
}

double RunResult::mass_leakage_max() const {
    double m = 0.0;
    for (double v : norms.leakage) m = std::max(m, v);
    return m;
}

cplx neumann_trace(const ComplexField& field, const GridSpec& grid) {
    if (grid.intervals() < 2) throw std::invalid_argument("neumann_trace: nx < 2");
    const auto& q = field.values;
    return (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * grid.dx());
}

namespace {

cplx neumann_trace_right(const std::vector<cplx>& q, double dx) {
    const std::size_t n = q.size() - 1;
    return (3.0 * q[n] - 4.0 * q[n - 1] + q[n - 2]) / (2.0 * dx);
}

bool all_finite(const std::vector<cplx>& v) {
    for (const cplx& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

}  // namespace

Stepper::Stepper(const GridSpec& grid, const SolverConfig& config, BoundarySource boundary)
    : grid_(grid),
      config_(config),
      boundary_(std::move(boundary)),
      sigma_(grid.sponge_samples()),
      interior_solver_([&] {
          config.validate();
          const int ni = grid.intervals() - 1;
          const double dx2 = grid.dx() * grid.dx();
          const cplx off{1.0 / (2.0 * dx2), 0.0};
          std::vector<cplx> sub(ni, off), diag(ni), sup(ni, off);
          const auto sigma = grid.sponge_samples();
          for (int j = 1; j < grid.intervals(); ++j) {
              diag[j - 1] = cplx{-1.0 / dx2, 1.0 / grid.dt() + 0.5 * sigma[j]};
          }
          return TridiagonalSolver(sub, diag, sup);
      }()) {}

ComplexField Stepper::step(const ComplexField& field, double t) const {
    const int nx = grid_.intervals();
    const std::size_t nodes = field.values.size();
    if (nodes != static_cast<std::size_t>(nx + 1)) {
        throw std::invalid_argument("step: field/grid size mismatch");
    }
    const double dt = grid_.dt();
    const double dx2 = grid_.dx() * grid_.dx();
    const double lambda = config_.lambda();
    const cplx idt{0.0, 1.0 / dt};
    const auto& q = field.values;

    // Iteration-independent part of the right-hand side (interior nodes).
    std::vector<cplx> rhs_base(static_cast<std::size_t>(nx) - 1);
    const double t_half = t + 0.5 * dt;
    for (int j = 1; j < nx; ++j) {
        const cplx lap = (q[j + 1] - 2.0 * q[j] + q[j - 1]) / dx2;
        cplx r = idt * q[j] - 0.5 * lap - cplx{0.0, 0.5 * sigma_[j]} * q[j];
        if (config_.forcing) r += config_.forcing(grid_.node(j), t_half);
        rhs_base[j - 1] = r;
    }
    const cplx q0_next = boundary_.Q(t + dt);
    rhs_base[0] -= q0_next / (2.0 * dx2);

    ComplexField next(nodes, t + dt);
    std::vector<cplx> w(q);  // Picard iterate of the half-sum state
    std::vector<cplx> prev_iterate;
    std::vector<cplx> rhs(rhs_base.size());

    bool converged = false;
    for (int m = 0; m < config_.max_fixed_point_iters; ++m) {
        for (int j = 1; j < nx; ++j) {
            rhs[j - 1] = rhs_base[j - 1] + 2.0 * lambda * std::norm(w[j]) * w[j];
        }
        interior_solver_.solve(rhs);
        next.values[0] = q0_next;
        for (int j = 1; j < nx; ++j) next.values[j] = rhs[j - 1];
        next.values[nx] = cplx{0.0, 0.0};

        if (lambda == 0.0) {
            converged = true;  // cubic term absent, first solve is exact
            break;
        }
        if (!prev_iterate.empty()) {
            double diff = 0.0;
            for (std::size_t j = 0; j < nodes; ++j) {
                diff = std::max(diff, std::abs(next.values[j] - prev_iterate[j]));
            }
            if (diff <= config_.fixed_point_tol) {
                converged = true;
                break;
            }
        }
        prev_iterate = next.values;
        for (std::size_t j = 0; j < nodes; ++j) w[j] = 0.5 * (q[j] + next.values[j]);
    }
    if (!converged) throw SolverError("fixed-point divergence", t + dt);
    if (!all_finite(next.values)) throw SolverError("nonfinite field", t + dt);
    return next;
}

std::vector<cplx> Stepper::semi_discrete_rhs(const std::vector<cplx>& q, double t) const {
    const int nx = grid_.intervals();
    const double dx2 = grid_.dx() * grid_.dx();
    const double lambda = config_.lambda();
    std::vector<cplx> F(q.size(), cplx{0.0, 0.0});
    const cplx i_unit{0.0, 1.0};
    for (int j = 1; j < nx; ++j) {
        const cplx lap = (q[j + 1] - 2.0 * q[j] + q[j - 1]) / dx2;
        cplx f = i_unit * lap - 2.0 * i_unit * lambda * std::norm(q[j]) * q[j] - sigma_[j] * q[j];
        if (config_.forcing) f -= i_unit * config_.forcing(grid_.node(j), t);
        F[j] = f;
    }
    return F;
}

ComplexField Stepper::step_rk4(const ComplexField& field, double t) const {
    const int nx = grid_.intervals();
    const double dt = grid_.dt();
    const auto& q = field.values;

    auto stage = [&](const std::vector<cplx>& base, const std::vector<cplx>& k, double coeff,
                     double ts) {
        std::vector<cplx> y(base);
        for (int j = 1; j < nx; ++j) y[j] += coeff * k[j];
        y[0] = boundary_.Q(ts);
        y[static_cast<std::size_t>(nx)] = cplx{0.0, 0.0};
        return y;
    };

    const auto k1 = semi_discrete_rhs(q, t);
    const auto y2 = stage(q, k1, 0.5 * dt, t + 0.5 * dt);
    const auto k2 = semi_discrete_rhs(y2, t + 0.5 * dt);
    const auto y3 = stage(q, k2, 0.5 * dt, t + 0.5 * dt);
    const auto k3 = semi_discrete_rhs(y3, t + 0.5 * dt);
    const auto y4 = stage(q, k3, dt, t + dt);
    const auto k4 = semi_discrete_rhs(y4, t + dt);

    ComplexField next(q.size(), t + dt);
    for (int j = 1; j < nx; ++j) {
        next.values[j] = q[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    next.values[0] = boundary_.Q(t + dt);
    next.values[static_cast<std::size_t>(nx)] = cplx{0.0, 0.0};
    if (!all_finite(next.values)) throw SolverError("nonfinite field", t + dt);
    return next;
}

ComplexField step(const ComplexField& field, double t, const GridSpec& grid,
                  const SolverConfig& config, const BoundarySource& boundary) {
    return Stepper(grid, config, boundary).step(field, t);
}

ComplexField oracle_step_rk4(const ComplexField& field, double t, const GridSpec& grid,
                             const SolverConfig& config, const BoundarySource& boundary) {
    return Stepper(grid, config, boundary).step_rk4(field, t);
}

namespace {

/// Crank-Nicolson update of the derivative field v = q_t, which obeys
///   i v_t + v_xx - 2 lambda (2|q|^2 v + q^2 conj(v)) + i sigma v = 0
/// with v(0,t) = Q_t(t) and v(L,t) = 0. The variable-coefficient terms are
/// lagged by the same Picard scheme (matrix shared with the q update).
class DerivativeStepper {
public:
    DerivativeStepper(const GridSpec& grid, const SolverConfig& config,
                      const TridiagonalSolver& solver, const std::vector<double>& sigma)
        : grid_(grid), config_(config), solver_(solver), sigma_(sigma) {}

    std::vector<cplx> step(const std::vector<cplx>& v, const std::vector<cplx>& q_half,
                           cplx v0_next, double t) const {
        const int nx = grid_.intervals();
        const double dt = grid_.dt();
        const double dx2 = grid_.dx() * grid_.dx();
        const double lambda = config_.lambda();
        const cplx idt{0.0, 1.0 / dt};

        std::vector<cplx> rhs_base(static_cast<std::size_t>(nx) - 1);
        for (int j = 1; j < nx; ++j) {
            const cplx lap = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / dx2;
            rhs_base[j - 1] = idt * v[j] - 0.5 * lap - cplx{0.0, 0.5 * sigma_[j]} * v[j];
        }
        rhs_base[0] -= v0_next / (2.0 * dx2);

        std::vector<cplx> w(v), next(v.size()), prev, rhs(rhs_base.size());
        for (int m = 0; m < config_.max_fixed_point_iters; ++m) {
            for (int j = 1; j < nx; ++j) {
                const cplx coupling = 2.0 * std::norm(q_half[j]) * w[j] +
                                      q_half[j] * q_half[j] * std::conj(w[j]);
                rhs[j - 1] = rhs_base[j - 1] + 2.0 * lambda * coupling;
            }
            solver_.solve(rhs);
            next[0] = v0_next;
            for (int j = 1; j < nx; ++j) next[j] = rhs[j - 1];
            next[static_cast<std::size_t>(nx)] = cplx{0.0, 0.0};

            if (lambda == 0.0) return next;
            if (!prev.empty()) {
                double diff = 0.0;
                for (std::size_t j = 0; j < next.size(); ++j) {
                    diff = std::max(diff, std::abs(next[j] - prev[j]));
                }
                if (diff <= config_.fixed_point_tol) return next;
            }
            prev = next;
            for (std::size_t j = 0; j < next.size(); ++j) w[j] = 0.5 * (v[j] + next[j]);
        }
        throw SolverError("fixed-point divergence (derivative field)", t);
    }

private:
    const GridSpec& grid_;
    const SolverConfig& config_;
    const TridiagonalSolver& solver_;
    const std::vector<double>& sigma_;
};

struct SnapshotRecorder {
    const GridSpec& grid;
    const SolverConfig& config;
    const BoundarySource& boundary;
    std::vector<double> weights;
    std::vector<double> sigma;
    int leakage_start_node;
    bool need_qdot;

    RunResult* out;
    struct Pending {
        std::size_t snap_index;
        int step;
    };
    std::vector<Pending> pending;

    SnapshotRecorder(const GridSpec& g, const SolverConfig& c, const BoundarySource& b,
                     RunResult* result)
        : grid(g), config(c), boundary(b), weights(g.quadrature_weights()),
          sigma(g.sponge_samples()), out(result) {
        leakage_start_node = grid.intervals();
        for (int j = 0; j <= grid.intervals(); ++j) {
            if (grid.node(j) >= grid.sponge_start()) {
                leakage_start_node = j;
                break;
            }
        }
        need_qdot = (grid.sponge_strength() > 0.0 && grid.sponge_fraction() > 0.0) ||
                    static_cast<bool>(config.forcing);
    }

    double leakage(const ComplexField& field, double l2sq) const {
        if (grid.sponge_fraction() == 0.0 || l2sq <= 0.0) return 0.0;
        const int j0 = leakage_start_node;
        const int nx = grid.intervals();
        if (j0 >= nx) return 0.0;
        double m = 0.0;
        for (int j = j0; j <= nx; ++j) {
            const double w = (j == j0 || j == nx) ? 0.5 * grid.dx() : grid.dx();
            m += w * std::norm(field.values[j]);
        }
        return std::min(1.0, m / l2sq);
    }

    void record(const ComplexField& field, int step_index) {
        const double t = field.time_tag;
        out->traces.times.push_back(t);
        out->traces.Q.push_back(boundary.Q(t));
        out->traces.Qt.push_back(boundary.Qt(t));
        out->traces.Qtt.push_back(boundary.Qtt(t));
        out->traces.P.push_back(neumann_trace(field, grid));

        const NormRow row = diagnostics::norms(field, grid);
        out->norms.append(t, row, leakage(field, row.l2sq));

        auto& corr = out->corrections;
        const auto qx = diagnostics::spatial_derivative(field, grid);
        double mass_sp = 0.0, virial_sp = 0.0, trace_sp = 0.0;
        double mass_f = 0.0, virial_f = 0.0, trace_f = 0.0;
        const bool spongy = grid.sponge_strength() > 0.0 && grid.sponge_fraction() > 0.0;
        if (spongy) {
            for (std::size_t j = 0; j < field.values.size(); ++j) {
                if (sigma[j] == 0.0) continue;
                const double x = grid.node(static_cast<int>(j));
                const double a2 = std::norm(field.values[j]);
                mass_sp += weights[j] * sigma[j] * a2;
                virial_sp += weights[j] * sigma[j] * x * x * a2;
                trace_sp += weights[j] * sigma[j] *
                            std::imag(field.values[j] * std::conj(qx[j]));
            }
        }
        if (config.forcing) {
            for (std::size_t j = 0; j < field.values.size(); ++j) {
                const double x = grid.node(static_cast<int>(j));
                const cplx f = config.forcing(x, t);
                const cplx fq = f * std::conj(field.values[j]);
                mass_f += weights[j] * std::imag(fq);
                virial_f += weights[j] * x * x * std::imag(fq);
                trace_f += weights[j] * std::real(f * std::conj(qx[j]));
            }
        }
        corr.mass_sponge.push_back(2.0 * mass_sp);
        corr.virial_sponge.push_back(2.0 * virial_sp);
        corr.trace_sponge.push_back(2.0 * trace_sp);
        corr.mass_forcing.push_back(2.0 * mass_f);
        corr.virial_forcing.push_back(2.0 * virial_f);
        corr.trace_forcing.push_back(2.0 * trace_f);
        corr.pl_sq.push_back(std::norm(neumann_trace_right(field.values, grid.dx())));
        corr.energy_sponge.push_back(0.0);
        corr.energy_forcing.push_back(0.0);

        out->snapshots.push_back(field);
        if (need_qdot) pending.push_back({out->snapshots.size() - 1, step_index});
    }

    void finalize_energy(std::size_t snap_index, const std::vector<cplx>& qdot) {
        const ComplexField& field = out->snapshots[snap_index];
        const double t = field.time_tag;
        double e_sp = 0.0, e_f = 0.0;
        const bool spongy = grid.sponge_strength() > 0.0 && grid.sponge_fraction() > 0.0;
        for (std::size_t j = 0; j < qdot.size(); ++j) {
            if (spongy && sigma[j] != 0.0) {
                e_sp += weights[j] * sigma[j] * std::imag(field.values[j] * std::conj(qdot[j]));
            }
            if (config.forcing) {
                const cplx f = config.forcing(grid.node(static_cast<int>(j)), t);
                e_f += weights[j] * std::real(f * std::conj(qdot[j]));
            }
        }
        out->corrections.energy_sponge[snap_index] = 2.0 * e_sp;
        out->corrections.energy_forcing[snap_index] = 2.0 * e_f;
    }

    /// Resolve pending snapshots whose centered time derivative has become
    /// available; `hist` holds the most recent consecutive fields and
    /// `last_step` is the index of hist.back(). Second-order stencils
    /// throughout: forward at step 0, centered inside, backward at the end.
    void drain(const std::deque<std::vector<cplx>>& hist, int last_step, bool run_over) {
        if (!need_qdot) return;
        const double dt = grid.dt();
        const int front_step = last_step - static_cast<int>(hist.size()) + 1;
        auto at = [&](int step) -> const std::vector<cplx>& {
            return hist[static_cast<std::size_t>(step - front_step)];
        };
        auto it = pending.begin();
        while (it != pending.end()) {
            const std::size_t nodes = out->snapshots[it->snap_index].values.size();
            std::vector<cplx> qdot;
            const int m = it->step;
            if (m == 0 && front_step == 0 && hist.size() >= 3) {
                qdot.resize(nodes);
                for (std::size_t j = 0; j < nodes; ++j) {
                    qdot[j] = (-3.0 * at(0)[j] + 4.0 * at(1)[j] - at(2)[j]) / (2.0 * dt);
                }
            } else if (m >= 1 && last_step >= m + 1 && front_step <= m - 1) {
                qdot.resize(nodes);
                for (std::size_t j = 0; j < nodes; ++j) {
                    qdot[j] = (at(m + 1)[j] - at(m - 1)[j]) / (2.0 * dt);
                }
            } else if (run_over && last_step == m && front_step <= m - 2) {
                qdot.resize(nodes);
                for (std::size_t j = 0; j < nodes; ++j) {
                    qdot[j] = (3.0 * at(m)[j] - 4.0 * at(m - 1)[j] + at(m - 2)[j]) / (2.0 * dt);
                }
            } else if (run_over && hist.size() >= 2) {
                // degenerate short run: first-order fallback
                qdot.resize(nodes);
                const std::size_t h = hist.size();
                for (std::size_t j = 0; j < nodes; ++j) {
                    qdot[j] = (hist[h - 1][j] - hist[h - 2][j]) / dt;
                }
            }
            if (!qdot.empty()) {
                finalize_energy(it->snap_index, qdot);
                it = pending.erase(it);
            } else {
                ++it;
            }
        }
    }
};

}  // namespace

RunResult run(const GridSpec& grid, const SolverConfig& config, const BoundarySource& boundary,
              std::optional<ComplexField> initial) {
    config.validate();
    const std::size_t nodes = static_cast<std::size_t>(grid.nodes());

    ComplexField q = initial.value_or(ComplexField(nodes, 0.0));
    if (q.values.size() != nodes) throw std::invalid_argument("run: initial field size mismatch");
    q.time_tag = 0.0;
    q.values[0] = boundary.Q(0.0);
    q.values[nodes - 1] = cplx{0.0, 0.0};

    Stepper stepper(grid, config, boundary);
    RunResult result;
    SnapshotRecorder recorder(grid, config, boundary, &result);

    std::vector<cplx> v;
    std::unique_ptr<DerivativeStepper> vstep;
    std::vector<double> sigma;
    std::unique_ptr<TridiagonalSolver> vsolver;
    if (config.propagate_qt) {
        v.assign(nodes, cplx{0.0, 0.0});
        v[0] = boundary.Qt(0.0);
    }

    std::deque<std::vector<cplx>> hist;
    hist.push_back(q.values);

    recorder.record(q, 0);
    if (config.propagate_qt) {
        result.neumann_rate.push_back(
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * grid.dx()));
    }

    const int steps = grid.steps();
    const int stride = config.snapshot_stride;
    for (int n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * grid.dt();
        ComplexField next = stepper.step(q, t);

        if (config.propagate_qt) {
            if (!vstep) {
                // the derivative field shares the q-update matrix
                sigma = grid.sponge_samples();
                const int ni = grid.intervals() - 1;
                const double dx2 = grid.dx() * grid.dx();
                const cplx off{1.0 / (2.0 * dx2), 0.0};
                std::vector<cplx> sub(ni, off), diag(ni), sup(ni, off);
                for (int j = 1; j < grid.intervals(); ++j) {
                    diag[j - 1] = cplx{-1.0 / dx2, 1.0 / grid.dt() + 0.5 * sigma[j]};
                }
                vsolver = std::make_unique<TridiagonalSolver>(sub, diag, sup);
                vstep = std::make_unique<DerivativeStepper>(grid, config, *vsolver, sigma);
            }
            std::vector<cplx> q_half(nodes);
            for (std::size_t j = 0; j < nodes; ++j) {
                q_half[j] = 0.5 * (q.values[j] + next.values[j]);
            }
            v = vstep->step(v, q_half, boundary.Qt(t + grid.dt()), t + grid.dt());
        }

        q = std::move(next);
        hist.push_back(q.values);
        while (hist.size() > 3) hist.pop_front();

        if ((n + 1) % stride == 0) {
            recorder.record(q, n + 1);
            if (config.propagate_qt) {
                result.neumann_rate.push_back(
                    (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * grid.dx()));
            }
        }
        recorder.drain(hist, n + 1, false);
    }
    recorder.drain(hist, steps, true);

    result.traces.differentiate_neumann();
    result.final_field = q;
    return result;
}

}  // namespace dtn
