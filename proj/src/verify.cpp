#include "dtn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtn {

double predicted_delta(double alpha, double beta, DecayCase which) {
    const double shared = 0.5 * (alpha + beta - 1.0);
    const double own = which == DecayCase::Defocusing ? 0.25 * (4.0 * alpha - 1.0)
                                                      : 2.0 * alpha - 1.0;
    return std::min(shared, own);
}

bool delta_hypotheses_met(double alpha, double beta, DecayCase which) {
    if (which == DecayCase::Defocusing) return alpha > 2.5 && beta > 2.5;
    return alpha > 2.5 && beta > 0.5;
}

namespace verify {

namespace {

constexpr double kValueFloor = 1e-30;

std::vector<double> abs_series(const std::vector<cplx>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]);
    return out;
}

/// Cumulative L^2(0,t) and L^4(0,t) powers of the trace series.
struct CumulativeTraceNorms {
    std::vector<double> q_sq;   // int_0^t |Q|^2
    std::vector<double> qt_sq;  // int_0^t |Q_t|^2
    std::vector<double> p_sq;   // int_0^t |P|^2
    std::vector<double> q_4;    // int_0^t |Q|^4
};

CumulativeTraceNorms cumulative_trace_norms(const TraceSeries& traces) {
    const std::size_t n = traces.size();
    std::vector<double> q2(n), qt2(n), p2(n), q4(n);
    for (std::size_t k = 0; k < n; ++k) {
        q2[k] = std::norm(traces.Q[k]);
        qt2[k] = std::norm(traces.Qt[k]);
        p2[k] = std::norm(traces.P[k]);
        q4[k] = q2[k] * q2[k];
    }
    const double h = traces.snapshot_dt();
    CumulativeTraceNorms out;
    out.q_sq = cumulative_trapezoid(q2, h);
    out.qt_sq = cumulative_trapezoid(qt2, h);
    out.p_sq = cumulative_trapezoid(p2, h);
    out.q_4 = cumulative_trapezoid(q4, h);
    return out;
}

std::string case_name(DecayCase which) {
    return which == DecayCase::Defocusing ? "defocusing" : "focusing";
}

}  // namespace

PowerLawFit fit_decay(std::span<const double> times, std::span<const double> values,
                      const FitWindow& window) {
    if (times.size() != values.size()) throw std::invalid_argument("fit_decay: size mismatch");
    if (!(window.t_min >= 1.0) || !(window.t_max > 2.0 * window.t_min)) {
        throw std::invalid_argument("degenerate window");
    }
    std::vector<double> lx, ly;
    bool floored = false;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < window.t_min || times[k] > window.t_max) continue;
        double v = values[k];
        if (v < kValueFloor) {
            v = kValueFloor;
            floored = true;
        }
        lx.push_back(std::log(times[k]));
        ly.push_back(std::log(v));
    }
    if (lx.size() < 10) throw std::invalid_argument("insufficient points");
    const LineFit lf = least_squares_line(lx, ly);
    PowerLawFit fit;
    fit.t_min = window.t_min;
    fit.t_max = window.t_max;
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.rms_residual = lf.rms_residual;
    fit.n_points = static_cast<int>(lx.size());
    fit.floored = floored;
    return fit;
}

EstimateMonitors compute_monitors(const TraceSeries& traces, const DecayFamily& family) {
    EstimateMonitors m;
    m.times = traces.times;
    const std::size_t n = traces.size();
    m.G.resize(n);
    m.G1.resize(n);
    m.Gtilde.resize(n);
    std::vector<double> f1(n), f2(n);
    const TailTable tails = tail_table(family, traces.times);
    for (std::size_t k = 0; k < n; ++k) {
        m.G1[k] = std::pow(tails.q_sq[k], 0.25);
        m.G[k] = m.G1[k] * std::pow(tails.qt_sq[k], 0.25);
        m.Gtilde[k] = m.G[k] + tails.q_sq[k];
        const double t = traces.times[k];
        f1[k] = t * std::real(traces.P[k] * std::conj(traces.Q[k]));
        f2[k] = t * t * std::real(traces.P[k] * std::conj(traces.Qt[k]));
    }
    const double h = traces.snapshot_dt();
    const auto c1 = cumulative_trapezoid(f1, h);
    const auto c2 = cumulative_trapezoid(f2, h);
    m.F.resize(n);
    for (std::size_t k = 0; k < n; ++k) m.F[k] = -c1[k] - 2.0 * c2[k];
    return m;
}

PlateauResult plateau(std::span<const double> times, std::span<const double> values) {
    PlateauResult out;
    if (times.empty()) return out;
    const double T = times.back();
    double last_half_max = 0.0, last_half_min = 0.0;
    bool any = false, any_half = false;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        if (t < 1.0) continue;
        if (!any || values[k] > out.sup) {
            out.sup = values[k];
            out.sup_time = t;
        }
        any = true;
        if (t >= 0.5 * T) {
            if (!any_half) {
                last_half_max = last_half_min = values[k];
                any_half = true;
            } else {
                last_half_max = std::max(last_half_max, values[k]);
                last_half_min = std::min(last_half_min, values[k]);
            }
        }
    }
    if (!any) return out;
    out.last_half_variation =
        any_half && last_half_max > 0.0 ? (last_half_max - last_half_min) / last_half_max : 0.0;
    out.stable = out.sup_time <= 0.5 * T || out.last_half_variation < 0.25;
    return out;
}

CauchyResult dyadic_cauchy(std::span<const double> times, std::span<const double> cumulative,
                           double fraction) {
    CauchyResult out;
    if (times.empty()) return out;
    const double T = times.back();
    out.total = cumulative.back();
    if (out.total <= 0.0) {
        out.converged = true;
        return out;
    }
    double at_half = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] <= 0.5 * T) at_half = cumulative[k];
    }
    out.increment_fraction = (out.total - at_half) / out.total;
    out.converged = out.increment_fraction < fraction;
    return out;
}

TheoremVerdict check_T21(const TraceSeries& traces, double lambda, double q2_total,
                         double smallness_threshold) {
    TheoremVerdict v;
    v.theorem_id = "T2.1";
    v.threshold = 0.25;
    const auto cum = cumulative_trace_norms(traces);
    const std::size_t n = traces.size();
    std::vector<double> rho_t, rho;
    for (std::size_t k = 0; k < n; ++k) {
        double denom = std::pow(cum.q_sq[k], 0.25) * std::pow(cum.qt_sq[k], 0.25);
        if (lambda > 0.0) denom += std::sqrt(cum.q_4[k]);
        if (denom < 1e-14) continue;
        rho_t.push_back(traces.times[k]);
        rho.push_back(std::sqrt(cum.p_sq[k]) / denom);
    }
    if (rho.empty()) {
        v.pass = true;
        v.notes = "vacuous: zero boundary data";
        return v;
    }
    const PlateauResult pl = plateau(rho_t, rho);
    v.measured["rho_sup"] = pl.sup;
    v.measured["rho_sup_time"] = pl.sup_time;
    v.measured["rho_last_half_variation"] = pl.last_half_variation;
    v.pass = pl.stable;
    if (lambda < 0.0) {
        v.notes = "smallness assumed";
        if (q2_total >= 0.0) {
            v.measured["q2_total"] = q2_total;
            v.measured["smallness_threshold"] = smallness_threshold;
            if (q2_total > smallness_threshold) v.notes += " (threshold exceeded)";
        }
    }
    return v;
}

TheoremVerdict check_T32(const NormSeries& norms, const FitWindow& window) {
    TheoremVerdict v;
    v.theorem_id = "T3.2";
    v.threshold = -1.0 + 0.15;
    if (norms.size() < 3) throw std::invalid_argument("check_T32: window outside data");

    bool all_zero = true;
    for (double x : norms.l4_4) {
        if (x != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        v.pass = true;
        v.notes = "vacuous: zero run";
        return v;
    }
    if (norms.times.back() < window.t_max * 0.999) {
        throw std::invalid_argument("check_T32: window outside data");
    }

    const PowerLawFit fit = fit_decay(norms.times, norms.l4_4, window);
    v.measured["l4_slope"] = fit.slope;
    v.measured["fit_rms"] = fit.rms_residual;

    // non-divergence of t * l4_4: max over the last quarter vs the mid quarter
    const double T = norms.times.back();
    double last_q = 0.0, mid_q = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        const double t = norms.times[k];
        const double val = t * norms.l4_4[k];
        if (t >= 0.75 * T) last_q = std::max(last_q, val);
        else if (t >= 0.5 * T) mid_q = std::max(mid_q, val);
    }
    v.measured["t_l4_last_quarter_max"] = last_q;
    v.measured["t_l4_mid_quarter_max"] = mid_q;
    const bool nondivergent = last_q <= 1.25 * mid_q || (last_q == 0.0 && mid_q == 0.0);
    v.pass = fit.slope <= v.threshold && nondivergent;
    return v;
}

TheoremVerdict check_T34(const NormSeries& norms, const DecayFamily& family, double lambda) {
    TheoremVerdict v;
    v.theorem_id = lambda < 0.0 ? "P4.1" : "T3.4";
    v.threshold = 0.25;
    std::vector<double> ts, r_mass, r_grad;
    const TailTable tails = tail_table(family, norms.times);
    for (std::size_t k = 0; k < norms.size(); ++k) {
        const double d1 = std::sqrt(tails.q_sq[k]);
        double d2 = std::sqrt(tails.qt_sq[k]);
        if (lambda < 0.0) d2 += std::pow(tails.q_sq[k], 1.5);
        if (d1 < 1e-280 || d2 < 1e-280) continue;
        ts.push_back(norms.times[k]);
        r_mass.push_back(norms.l2sq[k] / d1);
        r_grad.push_back(norms.gradsq[k] / d2);
    }
    if (ts.empty()) {
        v.pass = true;
        v.notes = "vacuous: zero boundary data";
        return v;
    }
    const PlateauResult pm = plateau(ts, r_mass);
    const PlateauResult pg = plateau(ts, r_grad);
    v.measured["mass_ratio_sup"] = pm.sup;
    v.measured["mass_ratio_variation"] = pm.last_half_variation;
    v.measured["grad_ratio_sup"] = pg.sup;
    v.measured["grad_ratio_variation"] = pg.last_half_variation;
    v.pass = pm.stable && pg.stable;
    if (lambda < 0.0) v.notes = "smallness assumed";
    return v;
}

TheoremVerdict check_P35(const TraceSeries& traces, const DecayFamily& family, double lambda) {
    TheoremVerdict v;
    v.theorem_id = lambda < 0.0 ? "P4.2" : "P3.5";
    v.threshold = 0.25;
    const auto cum = cumulative_trace_norms(traces);
    const double total_p2 = cum.p_sq.back();
    if (total_p2 <= 0.0) {
        v.pass = true;
        v.notes = "vacuous: zero boundary data";
        return v;
    }

    // Extrapolate the |P|^2 tail beyond the horizon from a late-window fit.
    const double T = traces.times.back();
    double tail_beyond_T = 0.0;
    try {
        const FitWindow late{std::max(1.0, 0.25 * T), T};
        const PowerLawFit fit = fit_decay(traces.times, abs_series(traces.P), late);
        v.measured["p_fit_slope"] = fit.slope;
        v.measured["p_fit_rms"] = fit.rms_residual;
        if (fit.rms_residual > 0.2) {
            v.pass = false;
            v.notes = "inconclusive: unreliable tail extrapolation";
            return v;
        }
        if (fit.slope < -0.5) {
            const double c2 = std::exp(2.0 * fit.intercept);
            tail_beyond_T = c2 * std::pow(T, 2.0 * fit.slope + 1.0) / (-2.0 * fit.slope - 1.0);
        }
    } catch (const std::invalid_argument&) {
        v.pass = false;
        v.notes = "inconclusive: degenerate tail fit";
        return v;
    }

    std::vector<double> ts, ratio;
    const TailTable tails = tail_table(family, traces.times);
    for (std::size_t k = 0; k < traces.size(); ++k) {
        double bound = std::pow(tails.q_sq[k], 0.25) * std::pow(tails.qt_sq[k], 0.25) +
                       std::sqrt(tails.q_sq[k]) * std::sqrt(tails.qt_sq[k]);
        bound += lambda < 0.0 ? tails.q_sq[k] : tails.q_4[k];
        if (bound < 1e-280) continue;
        const double neumann_tail = total_p2 - cum.p_sq[k] + tail_beyond_T;
        ts.push_back(traces.times[k]);
        ratio.push_back(neumann_tail / bound);
    }
    if (ts.empty()) {
        v.pass = true;
        v.notes = "vacuous: zero boundary data";
        return v;
    }
    const PlateauResult pl = plateau(ts, ratio);
    v.measured["tail_ratio_sup"] = pl.sup;
    v.measured["tail_ratio_variation"] = pl.last_half_variation;
    v.pass = pl.stable;
    if (lambda < 0.0) v.notes = "smallness assumed";
    return v;
}

TheoremVerdict check_T36(const TraceSeries& traces) {
    TheoremVerdict v;
    v.theorem_id = "T3.6";
    v.threshold = 0.05;
    const std::size_t n = traces.size();
    std::vector<double> pt2(n);
    for (std::size_t k = 0; k < n; ++k) pt2[k] = std::norm(traces.Pt[k]);
    const auto cum = cumulative_trapezoid(pt2, traces.snapshot_dt());
    const CauchyResult c = dyadic_cauchy(traces.times, cum, v.threshold);
    v.measured["pt_sq_total"] = c.total;
    v.measured["increment_fraction"] = c.increment_fraction;
    v.pass = c.converged;
    return v;
}

TheoremVerdict check_T38(const TraceSeries& traces, double alpha, double beta, DecayCase which,
                         const FitWindow& window) {
    TheoremVerdict v;
    v.theorem_id = which == DecayCase::Defocusing ? "T3.8" : "T4.4";
    const double delta = predicted_delta(alpha, beta, which);
    v.threshold = -delta + 0.25;
    v.measured["delta_predicted"] = delta;
    v.measured["hypotheses_met"] = delta_hypotheses_met(alpha, beta, which) ? 1.0 : 0.0;
    try {
        const PowerLawFit fit = fit_decay(traces.times, abs_series(traces.P), window);
        v.measured["p_slope"] = fit.slope;
        v.measured["fit_rms"] = fit.rms_residual;
        v.pass = fit.slope <= v.threshold;
    } catch (const std::invalid_argument& e) {
        v.pass = false;
        v.notes = std::string("degenerate fit: ") + e.what();
        return v;
    }
    if (v.measured["hypotheses_met"] == 0.0) {
        v.notes = "outside " + case_name(which) + " exponent hypotheses";
    }
    if (which == DecayCase::Focusing) {
        v.notes = v.notes.empty() ? "smallness assumed" : v.notes + "; smallness assumed";
    }
    return v;
}

TheoremVerdict check_F_bounded(const EstimateMonitors& monitors) {
    TheoremVerdict v;
    v.theorem_id = "T3.2";
    v.threshold = 1.1;
    const double T = monitors.times.empty() ? 0.0 : monitors.times.back();
    double late = 0.0, mid = 0.0;
    for (std::size_t k = 0; k < monitors.times.size(); ++k) {
        const double t = monitors.times[k];
        const double f = std::abs(monitors.F[k]);
        if (t >= 0.5 * T) late = std::max(late, f);
        else if (t >= 0.25 * T) mid = std::max(mid, f);
    }
    v.measured["F_late_max"] = late;
    v.measured["F_mid_max"] = mid;
    v.pass = late <= 1.1 * mid || (late == 0.0 && mid == 0.0);
    v.notes = "boundedness of the virial boundary functional F";
    return v;
}

TheoremVerdict check_appendix(const TraceSeries& traces, double p) {
    TheoremVerdict v;
    v.theorem_id = "AppA";
    v.threshold = 0.05;
    const auto w = diagnostics::weighted_time_integrals(traces, p);
    const auto c1 = dyadic_cauchy(traces.times, w.tp_p_sq, v.threshold);
    const auto c2 = dyadic_cauchy(traces.times, w.p_abs, v.threshold);
    const auto c3 = dyadic_cauchy(traces.times, w.t_p_abs, v.threshold);
    v.measured["p_exponent"] = p;
    v.measured["tp_p_sq_total"] = c1.total;
    v.measured["tp_p_sq_fraction"] = c1.increment_fraction;
    v.measured["p_abs_total"] = c2.total;
    v.measured["p_abs_fraction"] = c2.increment_fraction;
    v.measured["t_p_abs_total"] = c3.total;
    v.measured["t_p_abs_fraction"] = c3.increment_fraction;
    v.pass = c1.converged && c2.converged && c3.converged;
    return v;
}

TheoremVerdict check_L1_neumann(const TraceSeries& traces, DecayCase which) {
    TheoremVerdict v;
    v.theorem_id = which == DecayCase::Defocusing ? "T3.9" : "T4.5";
    v.threshold = 0.05;
    const std::size_t n = traces.size();
    std::vector<double> pa(n);
    for (std::size_t k = 0; k < n; ++k) pa[k] = std::abs(traces.P[k]);
    const auto cum = cumulative_trapezoid(pa, traces.snapshot_dt());
    const CauchyResult c = dyadic_cauchy(traces.times, cum, v.threshold);
    v.measured["p_abs_total"] = c.total;
    v.measured["increment_fraction"] = c.increment_fraction;
    v.pass = c.converged;
    if (which == DecayCase::Focusing) v.notes = "smallness assumed";
    return v;
}

bool VerificationReport::all_pass() const {
    for (const auto& v : verdicts) {
        if (!v.pass) return false;
    }
    return true;
}

namespace {

int theorem_rank(const std::string& id) {
    static const std::vector<std::string> order = {"T2.1", "T3.2", "T3.4", "P3.5", "T3.6",
                                                   "T3.8", "T3.9", "P4.1", "P4.2", "T4.3",
                                                   "T4.4", "T4.5", "AppA"};
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] == id) return static_cast<int>(i);
    }
    return static_cast<int>(order.size());
}

}  // namespace

VerificationReport build_report(std::vector<TheoremVerdict> verdicts,
                                std::vector<std::pair<std::string, std::string>> metadata) {
    if (verdicts.empty()) throw std::invalid_argument("build_report: no verdicts");
    std::stable_sort(verdicts.begin(), verdicts.end(),
                     [](const TheoremVerdict& a, const TheoremVerdict& b) {
                         return theorem_rank(a.theorem_id) < theorem_rank(b.theorem_id);
                     });
    return VerificationReport{std::move(metadata), std::move(verdicts)};
}

std::vector<TheoremVerdict> run_suite(const RunResult& result, const DecayFamily& family,
                                      Nonlinearity nonlinearity, const SuiteOptions& options) {
    const double lambda = lambda_of(nonlinearity);
    const DecayCase which =
        nonlinearity == Nonlinearity::Focusing ? DecayCase::Focusing : DecayCase::Defocusing;
    const double q2_total = family.tail_integrals(0.0).q_sq;

    std::vector<TheoremVerdict> out;
    out.push_back(check_T21(result.traces, lambda, q2_total, options.smallness_threshold));

    if (which == DecayCase::Defocusing) {
        // Theorem 3.2 groups the L^4 decay conclusion with the F-boundedness
        // lemma its proof rests on; both must hold.
        TheoremVerdict t32 = check_T32(result.norms, options.l4_window);
        const TheoremVerdict fb = check_F_bounded(compute_monitors(result.traces, family));
        for (const auto& [k, val] : fb.measured) t32.measured[k] = val;
        t32.pass = t32.pass && fb.pass;
        if (!fb.pass) t32.notes += (t32.notes.empty() ? "" : "; ") + std::string("F unbounded");
        out.push_back(std::move(t32));
    }

    out.push_back(check_T34(result.norms, family, lambda));
    out.push_back(check_P35(result.traces, family, lambda));

    TheoremVerdict t36 = check_T36(result.traces);
    if (which == DecayCase::Focusing) {
        t36.theorem_id = "T4.3";
        t36.notes = "smallness assumed";
    }
    out.push_back(std::move(t36));

    out.push_back(check_T38(result.traces, family.alpha(), family.beta(), which,
                            options.neumann_window));
    out.push_back(check_L1_neumann(result.traces, which));
    out.push_back(check_appendix(result.traces, options.appendix_p));
    return out;
}

}  // namespace verify
}  // namespace dtn
