#pragma once

#include <map>
#include <string>
#include <vector>

#include "dtn/diagnostics.hpp"
#include "dtn/solver.hpp"

namespace dtn {

struct FitWindow {
    double t_min = 1.0;
    double t_max = 10.0;
};

/// Least-squares power-law fit in log-log coordinates; slope measures -delta.
struct PowerLawFit {
    double t_min = 0.0;
    double t_max = 0.0;
    double slope = 0.0;
    double intercept = 0.0;     // of log(value) vs log(t)
    double rms_residual = 0.0;  // in log-log coordinates
    int n_points = 0;
    bool floored = false;  // some samples were clamped at the positivity floor
};

enum class DecayCase { Defocusing, Focusing };

/// min{(alpha+beta-1)/2, (4 alpha-1)/4} for the defocusing Neumann decay rate,
/// min{(alpha+beta-1)/2, 2 alpha-1} for the focusing one.
double predicted_delta(double alpha, double beta, DecayCase which);

/// Whether (alpha, beta) lie in the exponent ranges the decay theorems assume.
bool delta_hypotheses_met(double alpha, double beta, DecayCase which);

struct TheoremVerdict {
    std::string theorem_id;
    std::map<std::string, double> measured;
    double threshold = 0.0;
    bool pass = false;
    std::string notes;
};

/// c-free monitor series built from the Dirichlet tails and the trace series:
/// G, G1, Gtilde bound the solution pointwise; F is the virial boundary
/// functional whose boundedness drives the L^4 decay proof.
struct EstimateMonitors {
    std::vector<double> times;
    std::vector<double> G;       // (tail |Q|^2)^{1/4} (tail |Q_t|^2)^{1/4}
    std::vector<double> G1;      // (tail |Q|^2)^{1/4}
    std::vector<double> Gtilde;  // G + tail |Q|^2
    std::vector<double> F;       // -int r Re{P conj(Q)} - 2 int r^2 Re{P conj(Q_r)}
};

namespace verify {

PowerLawFit fit_decay(std::span<const double> times, std::span<const double> values,
                      const FitWindow& window);

EstimateMonitors compute_monitors(const TraceSeries& traces, const DecayFamily& family);

/// Stability proxy for "bounded by a constant independent of t": either the
/// sup over t >= 1 is attained before T/2, or the last-half variation is
/// under 25%.
struct PlateauResult {
    double sup = 0.0;
    double sup_time = 0.0;
    double last_half_variation = 1.0;
    bool stable = false;
};
PlateauResult plateau(std::span<const double> times, std::span<const double> values);

/// Dyadic Cauchy proxy for finiteness of a cumulative integral: the increment
/// over [T/2, T] must stay below `fraction` of the total (vacuously true at 0).
struct CauchyResult {
    double total = 0.0;
    double increment_fraction = 0.0;
    bool converged = false;
};
CauchyResult dyadic_cauchy(std::span<const double> times, std::span<const double> cumulative,
                           double fraction = 0.05);

TheoremVerdict check_T21(const TraceSeries& traces, double lambda,
                         double q2_total = -1.0, double smallness_threshold = 0.05);
TheoremVerdict check_T32(const NormSeries& norms, const FitWindow& window);
TheoremVerdict check_T34(const NormSeries& norms, const DecayFamily& family, double lambda);
TheoremVerdict check_P35(const TraceSeries& traces, const DecayFamily& family, double lambda);
TheoremVerdict check_T36(const TraceSeries& traces);
TheoremVerdict check_T38(const TraceSeries& traces, double alpha, double beta, DecayCase which,
                         const FitWindow& window);
TheoremVerdict check_F_bounded(const EstimateMonitors& monitors);
TheoremVerdict check_appendix(const TraceSeries& traces, double p);

/// Dyadic Cauchy check of the cumulative integral of |P| (the L^1 conclusion
/// of the t^{-2-eps} theorems).
TheoremVerdict check_L1_neumann(const TraceSeries& traces, DecayCase which);

struct VerificationReport {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<TheoremVerdict> verdicts;

    bool all_pass() const;
};

/// Deterministic report: verdicts ordered by the prose order of the results
/// they index (T2.1 ... T4.5, AppA).
VerificationReport build_report(std::vector<TheoremVerdict> verdicts,
                                std::vector<std::pair<std::string, std::string>> metadata);

struct SuiteOptions {
    FitWindow l4_window{10.0, 100.0};       // Theorem 3.2 fit window
    FitWindow neumann_window{20.0, 200.0};  // Theorem 3.8 fit window
    double appendix_p = 1.1;
    double smallness_threshold = 0.05;
};

/// The wired theorem checks for one simulated run: 8 verdicts for the
/// defocusing suite (T2.1, T3.2, T3.4, P3.5, T3.6, T3.8, T3.9, AppA),
/// 7 for the focusing one (T2.1, P4.1, P4.2, T4.3, T4.4, T4.5, AppA).
std::vector<TheoremVerdict> run_suite(const RunResult& result, const DecayFamily& family,
                                      Nonlinearity nonlinearity, const SuiteOptions& options);

}  // namespace verify
}  // namespace dtn
