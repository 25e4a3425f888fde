#pragma once

#include <vector>

#include "dtn/boundary.hpp"
#include "dtn/grid.hpp"

namespace dtn {

/// Space-integral diagnostics of one field snapshot.
struct NormRow {
    double l2sq = 0.0;        // ||q||^2
    double gradsq = 0.0;      // ||q_x||^2
    double l4_4 = 0.0;        // ||q||_4^4
    double energy = 0.0;      // gradsq + l4_4
    double moment2 = 0.0;     // integral x^2 |q|^2
    double virial = 0.0;      // Im integral x conj(q) q_x
    double supabs = 0.0;      // max_j |q_j|
};

struct NormSeries {
    std::vector<double> times;
    std::vector<double> l2sq, gradsq, l4_4, energy, moment2, virial, supabs;
    std::vector<double> leakage;  // fraction of mass inside the sponge layer

    std::size_t size() const { return times.size(); }
    double snapshot_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    void append(double t, const NormRow& row, double leak);
};

/// Per-snapshot correction terms recorded by the solver so the truncated,
/// damped, forced dynamics satisfy the half-line identities exactly:
///   d/dt ||q||^2        = 2 Im{P conj(Q)} - mass_sponge + mass_forcing
///   d/dt (||q_x||^2 + lambda ||q||_4^4)
///                       = -2 Re{P conj(Qt)} - energy_sponge - energy_forcing
///   |P|^2               = -Im d/dt(q, q_x) - Im{Q conj(Qt)} + lambda |Q|^4
///                         + pl_sq - trace_sponge - trace_forcing
///   d/dt integral x^2|q|^2 = 4 y - virial_sponge + virial_forcing
struct CorrectionSeries {
    std::vector<double> mass_sponge;     // 2 integral sigma |q|^2
    std::vector<double> mass_forcing;    // 2 Im integral f conj(q)
    std::vector<double> energy_sponge;   // 2 Im integral sigma q conj(q_t)
    std::vector<double> energy_forcing;  // 2 Re integral f conj(q_t)
    std::vector<double> trace_sponge;    // 2 Im integral sigma q conj(q_x)
    std::vector<double> trace_forcing;   // 2 Re integral f conj(q_x)
    std::vector<double> pl_sq;           // |q_x(L,t)|^2
    std::vector<double> virial_sponge;   // 2 integral sigma x^2 |q|^2
    std::vector<double> virial_forcing;  // 2 Im integral x^2 f conj(q)

    std::size_t size() const { return mass_sponge.size(); }
};

/// Residuals of the boundary/virial identities measured on the snapshot grid.
struct IdentityResiduals {
    std::vector<double> times;
    std::vector<double> mass_res;
    std::vector<double> energy_res;
    std::vector<double> trace_res;
    std::vector<double> virial_res;
    std::vector<double> pseudoconf;  // relative defect of the algebraic identity
};

namespace diagnostics {

/// Trapezoid-quadrature norms of one snapshot; q_x by centered differences
/// (second-order one-sided at the ends).
NormRow norms(const ComplexField& field, const GridSpec& grid);

/// Discrete spatial derivative used by every diagnostic.
std::vector<cplx> spatial_derivative(const ComplexField& field, const GridSpec& grid);

std::vector<double> mass_identity_residual(const NormSeries& norms, const TraceSeries& traces,
                                           const CorrectionSeries& corr);

std::vector<double> energy_identity_residual(const NormSeries& norms, const TraceSeries& traces,
                                             const CorrectionSeries& corr, double lambda);

std::vector<double> trace_identity_residual(const std::vector<ComplexField>& snapshots,
                                            const TraceSeries& traces,
                                            const CorrectionSeries& corr,
                                            const GridSpec& grid, double lambda);

std::vector<double> virial_residual(const NormSeries& norms, const CorrectionSeries& corr);

/// Both sides of the algebraic virial reconstruction
///   4 t y = integral [x^2|q|^2 + 4 t^2 |q_x|^2 - |x q + 2 i t q_x|^2] dx,
/// evaluated with the same discrete q_x; they agree to rounding.
struct PseudoconformalCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;  // abs_err / quadrature scale of the three terms
};
PseudoconformalCheck pseudoconformal_check(const ComplexField& field, double t,
                                           const GridSpec& grid);

/// Cumulative trapezoid integrals of t^p |P|^2, |P|, and t |P| (p > 1).
struct WeightedTimeIntegrals {
    std::vector<double> tp_p_sq;  // integral_0^t r^p |P|^2 dr
    std::vector<double> p_abs;    // integral_0^t |P| dr
    std::vector<double> t_p_abs;  // integral_0^t r |P| dr
};
WeightedTimeIntegrals weighted_time_integrals(const TraceSeries& traces, double p);

/// l4_4 / (l2sq^{3/2} gradsq^{1/2}) and supabs^2 / sqrt(l2sq * gradsq);
/// both 0 for a vanishing field.
double sobolev_chain_ratio(const NormRow& row);
double trace_bound_ratio(const NormRow& row);

/// Maxima of the two ratios over a norm series.
struct SobolevReport {
    double max_chain_ratio = 0.0;
    double max_trace_ratio = 0.0;
    double argmax_chain_time = 0.0;
    double argmax_trace_time = 0.0;
};
SobolevReport sobolev_report(const NormSeries& norms);

}  // namespace diagnostics
}  // namespace dtn
