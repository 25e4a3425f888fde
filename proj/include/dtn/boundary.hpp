#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dtn/grid.hpp"
#include "dtn/numerics.hpp"

namespace dtn {

/// Closed-form Dirichlet data
///   Q(t) = A * (t/s)^m * (1 + t/s)^{-(m+alpha)} * exp(i*omega*t),
/// so Q(0) = Q'(0) = 0 (compatible with zero initial data) and |Q| ~ A t^{-alpha}.
/// The derivative decays one order faster when omega = 0 (beta = alpha + 1)
/// and at the same order otherwise (beta = alpha).
class DecayFamily {
public:
    DecayFamily(double amplitude, int ramp_order, double decay_alpha, double phase_omega,
                double time_scale);

    double amplitude() const { return amplitude_; }
    int ramp_order() const { return ramp_order_; }
    double alpha() const { return alpha_; }
    double omega() const { return omega_; }
    double time_scale() const { return scale_; }

    /// Effective decay exponent of Q_t (resp. Q_tt).
    double beta() const { return omega_ == 0.0 ? alpha_ + 1.0 : alpha_; }
    double gamma() const { return omega_ == 0.0 ? alpha_ + 2.0 : alpha_; }

    cplx eval_Q(double t) const;
    cplx eval_Qt(double t) const;
    cplx eval_Qtt(double t) const;

    /// (integral_t^inf |Q|^2, integral_t^inf |Q_t|^2, integral_t^inf |Q|^4),
    /// adaptive quadrature up to t_big = 1e4 * s plus the analytic tail beyond.
    /// Rejects alpha <= 1/2 (the |Q|^2 tail diverges).
    struct TailIntegrals {
        double q_sq;
        double qt_sq;
        double q_4;
    };
    TailIntegrals tail_integrals(double t) const;

private:
    double envelope(double tau) const;        // u(tau) = tau^m (1+tau)^{-(m+alpha)}
    double envelope_dtau(double tau) const;   // u'(tau)
    double envelope_d2tau(double tau) const;  // u''(tau)

    double amplitude_;
    int ramp_order_;
    double alpha_;
    double omega_;
    double scale_;
};

/// tail_integrals evaluated on a whole nondecreasing time grid with one
/// backward sweep (one far-tail evaluation plus short adaptive panels),
/// for the per-snapshot theorem monitors.
struct TailTable {
    std::vector<double> times;
    std::vector<double> q_sq, qt_sq, q_4;
};
TailTable tail_table(const DecayFamily& family, std::span<const double> times);

/// Exact solution q_m(x,t) = A * t^2 e^{-t} * e^{-x} used as a forced-solver
/// oracle; the PDE residual of q_m is re-injected as forcing.
class ManufacturedSolution {
public:
    explicit ManufacturedSolution(cplx amplitude = cplx{1.0, 0.0}) : amplitude_(amplitude) {}

    cplx amplitude() const { return amplitude_; }

    double envelope(double t) const { return t * t * std::exp(-t); }
    double envelope_dt(double t) const { return (2.0 * t - t * t) * std::exp(-t); }
    double envelope_dtt(double t) const { return (2.0 - 4.0 * t + t * t) * std::exp(-t); }

    cplx field(double x, double t) const { return amplitude_ * envelope(t) * std::exp(-x); }
    cplx dirichlet(double t) const { return amplitude_ * envelope(t); }
    cplx dirichlet_dt(double t) const { return amplitude_ * envelope_dt(t); }
    cplx dirichlet_dtt(double t) const { return amplitude_ * envelope_dtt(t); }
    cplx neumann(double t) const { return -amplitude_ * envelope(t); }

    /// Residual of the unforced equation at q_m:
    ///   f = i d/dt q_m + d^2/dx^2 q_m - 2 lambda |q_m|^2 q_m.
    cplx forcing(double lambda, double x, double t) const;

private:
    cplx amplitude_;
};

/// Time series of boundary traces on the snapshot grid. Q, Qt, Qtt come from
/// the analytic data; P is the extracted Neumann trace and Pt its centered
/// time derivative.
struct TraceSeries {
    std::vector<double> times;
    std::vector<cplx> Q;
    std::vector<cplx> Qt;
    std::vector<cplx> Qtt;
    std::vector<cplx> P;
    std::vector<cplx> Pt;

    std::size_t size() const { return times.size(); }
    double snapshot_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

    /// Fills Pt from P by centered differences (one-sided at the endpoints).
    void differentiate_neumann();
};

/// Dirichlet data handed to the solver: analytic boundary value and its two
/// derivatives. Forcing travels separately in the solver config.
struct BoundarySource {
    std::function<cplx(double)> Q;
    std::function<cplx(double)> Qt;
    std::function<cplx(double)> Qtt;
};

BoundarySource boundary_from(const DecayFamily& family);
BoundarySource boundary_from(const ManufacturedSolution& ms);
BoundarySource zero_boundary();

}  // namespace dtn
