#include "dtn/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace dtn {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// integral_{tau_b}^inf tau^p (1 + tau)^{-K} dtau for integer p >= 0, K > p + 1.
/// Exact via w = 1 + tau and the binomial expansion of (w - 1)^p; safe from
/// cancellation because tau_b is large.
double power_tail(int p, double K, double tau_b) {
    const double w = 1.0 + tau_b;
    double sum = 0.0;
    for (int k = 0; k <= p; ++k) {
        const double expo = K - static_cast<double>(k) - 1.0;
        const double sign = ((p - k) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binomial(p, k) * std::pow(w, -expo) / expo;
    }
    return sum;
}

}  // namespace

DecayFamily::DecayFamily(double amplitude, int ramp_order, double decay_alpha,
                         double phase_omega, double time_scale)
    : amplitude_(amplitude),
      ramp_order_(ramp_order),
      alpha_(decay_alpha),
      omega_(phase_omega),
      scale_(time_scale) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("negative amplitude");
    if (ramp_order < 2) throw std::invalid_argument("ramp_order must be >= 2");
    if (!(decay_alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(time_scale > 0.0)) throw std::invalid_argument("time_scale must be positive");
}

double DecayFamily::envelope(double tau) const {
    return std::pow(tau, ramp_order_) * std::pow(1.0 + tau, -(ramp_order_ + alpha_));
}

double DecayFamily::envelope_dtau(double tau) const {
    const double m = ramp_order_;
    return std::pow(tau, ramp_order_ - 1) * std::pow(1.0 + tau, -(m + alpha_ + 1.0)) *
           (m - alpha_ * tau);
}

double DecayFamily::envelope_d2tau(double tau) const {
    const double m = ramp_order_;
    const double bracket = (m - 1.0) * (1.0 + tau) * (m - alpha_ * tau) -
                           (m + alpha_ + 1.0) * tau * (m - alpha_ * tau) -
                           alpha_ * tau * (1.0 + tau);
    return std::pow(tau, ramp_order_ - 2) * std::pow(1.0 + tau, -(m + alpha_ + 2.0)) * bracket;
}

cplx DecayFamily::eval_Q(double t) const {
    if (t < 0.0) throw std::invalid_argument("eval_Q: negative time");
    const double tau = t / scale_;
    return amplitude_ * envelope(tau) * std::polar(1.0, omega_ * t);
}

cplx DecayFamily::eval_Qt(double t) const {
    if (t < 0.0) throw std::invalid_argument("eval_Qt: negative time");
    const double tau = t / scale_;
    const cplx phase = std::polar(1.0, omega_ * t);
    return amplitude_ * phase *
           (cplx{envelope_dtau(tau) / scale_, 0.0} + cplx{0.0, omega_} * envelope(tau));
}

cplx DecayFamily::eval_Qtt(double t) const {
    if (t < 0.0) throw std::invalid_argument("eval_Qtt: negative time");
    const double tau = t / scale_;
    const cplx phase = std::polar(1.0, omega_ * t);
    const double u = envelope(tau);
    const double up = envelope_dtau(tau) / scale_;
    const double upp = envelope_d2tau(tau) / (scale_ * scale_);
    return amplitude_ * phase * (cplx{upp - omega_ * omega_ * u, 2.0 * omega_ * up});
}

DecayFamily::TailIntegrals DecayFamily::tail_integrals(double t) const {
    if (t < 0.0) throw std::invalid_argument("tail_integrals: negative time");
    if (!(alpha_ > 0.5)) {
        throw std::invalid_argument("tail_integrals: alpha <= 1/2 makes the |Q|^2 tail diverge");
    }
    if (amplitude_ == 0.0) return {0.0, 0.0, 0.0};

    // The binomial remainder is exact; the split only needs tau large enough
    // that its alternating sum loses no precision.
    const double tau0 = t / scale_;
    const double tau_split = std::max(tau0, 32.0 * ramp_order_ * ramp_order_);
    const int m = ramp_order_;
    const double A2 = amplitude_ * amplitude_;

    auto u2 = [this](double tau) { double u = envelope(tau); return u * u; };
    auto up2 = [this](double tau) { double d = envelope_dtau(tau); return d * d; };
    auto u4 = [this](double tau) { double u = envelope(tau); double s = u * u; return s * s; };

    const double rel = 1e-10;
    double int_u2 = adaptive_simpson(u2, tau0, tau_split, rel);
    double int_up2 = adaptive_simpson(up2, tau0, tau_split, rel);
    double int_u4 = adaptive_simpson(u4, tau0, tau_split, rel);

    // Analytic remainders beyond tau_split.
    int_u2 += power_tail(2 * m, 2.0 * m + 2.0 * alpha_, tau_split);
    int_u4 += power_tail(4 * m, 4.0 * m + 4.0 * alpha_, tau_split);
    {
        const double K = 2.0 * m + 2.0 * alpha_ + 2.0;
        const double mm = static_cast<double>(m);
        int_up2 += mm * mm * power_tail(2 * m - 2, K, tau_split) -
                   2.0 * mm * alpha_ * power_tail(2 * m - 1, K, tau_split) +
                   alpha_ * alpha_ * power_tail(2 * m, K, tau_split);
    }

    TailIntegrals out;
    out.q_sq = A2 * scale_ * int_u2;
    out.qt_sq = A2 * (int_up2 / scale_ + omega_ * omega_ * scale_ * int_u2);
    out.q_4 = A2 * A2 * scale_ * int_u4;
    return out;
}

TailTable tail_table(const DecayFamily& family, std::span<const double> times) {
    TailTable table;
    table.times.assign(times.begin(), times.end());
    const std::size_t n = times.size();
    table.q_sq.assign(n, 0.0);
    table.qt_sq.assign(n, 0.0);
    table.q_4.assign(n, 0.0);
    if (n == 0 || family.amplitude() == 0.0) return table;

    const auto last = family.tail_integrals(times.back());
    table.q_sq[n - 1] = last.q_sq;
    table.qt_sq[n - 1] = last.qt_sq;
    table.q_4[n - 1] = last.q_4;

    auto q2 = [&family](double t) { return std::norm(family.eval_Q(t)); };
    auto qt2 = [&family](double t) { return std::norm(family.eval_Qt(t)); };
    auto q4 = [&q2](double t) { const double a = q2(t); return a * a; };

    for (std::size_t k = n - 1; k-- > 0;) {
        const double a = times[k], b = times[k + 1];
        table.q_sq[k] = table.q_sq[k + 1] + adaptive_simpson(q2, a, b, 1e-12);
        table.qt_sq[k] = table.qt_sq[k + 1] + adaptive_simpson(qt2, a, b, 1e-12);
        table.q_4[k] = table.q_4[k + 1] + adaptive_simpson(q4, a, b, 1e-12);
    }
    return table;
}

cplx ManufacturedSolution::forcing(double lambda, double x, double t) const {
    const double h = envelope(t);
    const double hp = envelope_dt(t);
    const double ex = std::exp(-x);
    const cplx linear = amplitude_ * (cplx{h, hp}) * ex;  // (i h' + h) e^{-x}
    const double a2 = std::norm(amplitude_);
    const cplx cubic = 2.0 * lambda * a2 * amplitude_ * h * h * h * ex * ex * ex;
    return linear - cubic;
}

void TraceSeries::differentiate_neumann() {
    if (P.size() < 3) {
        Pt.assign(P.size(), cplx{0.0, 0.0});
        return;
    }
    Pt = centered_derivative(std::span<const cplx>(P), snapshot_dt());
}

BoundarySource boundary_from(const DecayFamily& family) {
    return BoundarySource{
        [family](double t) { return family.eval_Q(t); },
        [family](double t) { return family.eval_Qt(t); },
        [family](double t) { return family.eval_Qtt(t); },
    };
}

BoundarySource boundary_from(const ManufacturedSolution& ms) {
    return BoundarySource{
        [ms](double t) { return ms.dirichlet(t); },
        [ms](double t) { return ms.dirichlet_dt(t); },
        [ms](double t) { return ms.dirichlet_dtt(t); },
    };
}

BoundarySource zero_boundary() {
    auto zero = [](double) { return cplx{0.0, 0.0}; };
    return BoundarySource{zero, zero, zero};
}

}  // namespace dtn
