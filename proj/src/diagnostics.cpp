#include "dtn/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace dtn {

void NormSeries::append(double t, const NormRow& row, double leak) {
    times.push_back(t);
    l2sq.push_back(row.l2sq);
    gradsq.push_back(row.gradsq);
    l4_4.push_back(row.l4_4);
    energy.push_back(row.energy);
    moment2.push_back(row.moment2);
    virial.push_back(row.virial);
    supabs.push_back(row.supabs);
    leakage.push_back(leak);
}

namespace diagnostics {

namespace {

void require_aligned(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string("mismatched series grids: ") + what);
}

std::vector<double> series_derivative(const std::vector<double>& v, double h) {
    return centered_derivative(std::span<const double>(v), h);
}

}  // namespace

std::vector<cplx> spatial_derivative(const ComplexField& field, const GridSpec& grid) {
    const auto& q = field.values;
    if (q.size() != static_cast<std::size_t>(grid.nodes())) {
        throw std::invalid_argument("spatial_derivative: field/grid size mismatch");
    }
    return centered_derivative(std::span<const cplx>(q), grid.dx());
}

NormRow norms(const ComplexField& field, const GridSpec& grid) {
    const auto& q = field.values;
    if (q.size() != static_cast<std::size_t>(grid.nodes())) {
        throw std::invalid_argument("norms: field/grid size mismatch");
    }
    const auto w = grid.quadrature_weights();
    const auto qx = spatial_derivative(field, grid);
    NormRow row;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double x = grid.node(static_cast<int>(j));
        const double a2 = std::norm(q[j]);
        row.l2sq += w[j] * a2;
        row.gradsq += w[j] * std::norm(qx[j]);
        row.l4_4 += w[j] * a2 * a2;
        row.moment2 += w[j] * x * x * a2;
        row.virial += w[j] * x * std::imag(std::conj(q[j]) * qx[j]);
        row.supabs = std::max(row.supabs, std::abs(q[j]));
    }
    row.energy = row.gradsq + row.l4_4;
    return row;
}

std::vector<double> mass_identity_residual(const NormSeries& norms, const TraceSeries& traces,
                                           const CorrectionSeries& corr) {
    require_aligned(norms.size(), traces.size(), "norms vs traces");
    require_aligned(norms.size(), corr.size(), "norms vs corrections");
    const auto dl2 = series_derivative(norms.l2sq, norms.snapshot_dt());
    std::vector<double> r(norms.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double flux = 2.0 * std::imag(traces.P[k] * std::conj(traces.Q[k]));
        r[k] = dl2[k] - flux + corr.mass_sponge[k] - corr.mass_forcing[k];
    }
    return r;
}

std::vector<double> energy_identity_residual(const NormSeries& norms, const TraceSeries& traces,
                                             const CorrectionSeries& corr, double lambda) {
    require_aligned(norms.size(), traces.size(), "norms vs traces");
    require_aligned(norms.size(), corr.size(), "norms vs corrections");
    std::vector<double> combo(norms.size());
    for (std::size_t k = 0; k < combo.size(); ++k) {
        combo[k] = norms.gradsq[k] + lambda * norms.l4_4[k];
    }
    const auto dcombo = series_derivative(combo, norms.snapshot_dt());
    std::vector<double> r(norms.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double flux = -2.0 * std::real(traces.P[k] * std::conj(traces.Qt[k]));
        r[k] = dcombo[k] - flux + corr.energy_sponge[k] + corr.energy_forcing[k];
    }
    return r;
}

std::vector<double> trace_identity_residual(const std::vector<ComplexField>& snapshots,
                                            const TraceSeries& traces,
                                            const CorrectionSeries& corr,
                                            const GridSpec& grid, double lambda) {
    require_aligned(snapshots.size(), traces.size(), "snapshots vs traces");
    require_aligned(snapshots.size(), corr.size(), "snapshots vs corrections");
    if (snapshots.size() < 3) throw std::invalid_argument("trace residual: need >= 3 snapshots");

    const auto w = grid.quadrature_weights();
    std::vector<cplx> ip(snapshots.size());
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const auto qx = spatial_derivative(snapshots[k], grid);
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < qx.size(); ++j) {
            s += w[j] * snapshots[k].values[j] * std::conj(qx[j]);
        }
        ip[k] = s;
    }
    const auto dip = centered_derivative(std::span<const cplx>(ip), traces.snapshot_dt());

    std::vector<double> r(snapshots.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double q4 = std::pow(std::abs(traces.Q[k]), 4);
        const double rhs = -std::imag(dip[k]) -
                           std::imag(traces.Q[k] * std::conj(traces.Qt[k])) + lambda * q4 +
                           corr.pl_sq[k] - corr.trace_sponge[k] - corr.trace_forcing[k];
        r[k] = std::norm(traces.P[k]) - rhs;
    }
    return r;
}

std::vector<double> virial_residual(const NormSeries& norms, const CorrectionSeries& corr) {
    require_aligned(norms.size(), corr.size(), "norms vs corrections");
    const auto dm2 = series_derivative(norms.moment2, norms.snapshot_dt());
    std::vector<double> r(norms.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = dm2[k] - 4.0 * norms.virial[k] + corr.virial_sponge[k] - corr.virial_forcing[k];
    }
    return r;
}

PseudoconformalCheck pseudoconformal_check(const ComplexField& field, double t,
                                           const GridSpec& grid) {
    if (t < 0.0) throw std::invalid_argument("pseudoconformal_check: negative time");
    const auto w = grid.quadrature_weights();
    const auto qx = spatial_derivative(field, grid);
    PseudoconformalCheck out;
    double scale = 0.0;
    double rhs = 0.0;
    double virial = 0.0;
    for (std::size_t j = 0; j < qx.size(); ++j) {
        const double x = grid.node(static_cast<int>(j));
        const cplx q = field.values[j];
        const double term_a = x * x * std::norm(q);
        const double term_b = 4.0 * t * t * std::norm(qx[j]);
        const double term_c = std::norm(x * q + cplx{0.0, 2.0 * t} * qx[j]);
        rhs += w[j] * (term_a + term_b - term_c);
        scale += w[j] * (term_a + term_b + term_c);
        virial += w[j] * x * std::imag(std::conj(q) * qx[j]);
    }
    out.lhs = 4.0 * t * virial;
    out.rhs = rhs;
    out.abs_err = std::abs(out.lhs - out.rhs);
    out.rel_err = scale > 0.0 ? out.abs_err / scale : 0.0;
    return out;
}

WeightedTimeIntegrals weighted_time_integrals(const TraceSeries& traces, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("weighted_time_integrals: requires p > 1");
    const std::size_t n = traces.size();
    std::vector<double> f1(n), f2(n), f3(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = traces.times[k];
        const double pa = std::abs(traces.P[k]);
        f1[k] = std::pow(t, p) * pa * pa;
        f2[k] = pa;
        f3[k] = t * pa;
    }
    const double h = traces.snapshot_dt();
    WeightedTimeIntegrals out;
    out.tp_p_sq = cumulative_trapezoid(f1, h);
    out.p_abs = cumulative_trapezoid(f2, h);
    out.t_p_abs = cumulative_trapezoid(f3, h);
    return out;
}

double sobolev_chain_ratio(const NormRow& row) {
    const double denom = std::pow(row.l2sq, 1.5) * std::sqrt(row.gradsq);
    return denom > 0.0 ? row.l4_4 / denom : 0.0;
}

double trace_bound_ratio(const NormRow& row) {
    const double denom = std::sqrt(row.l2sq * row.gradsq);
    return denom > 0.0 ? row.supabs * row.supabs / denom : 0.0;
}

SobolevReport sobolev_report(const NormSeries& norms) {
    SobolevReport rep;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        NormRow row;
        row.l2sq = norms.l2sq[k];
        row.gradsq = norms.gradsq[k];
        row.l4_4 = norms.l4_4[k];
        row.supabs = norms.supabs[k];
        const double cr = sobolev_chain_ratio(row);
        const double tr = trace_bound_ratio(row);
        if (cr > rep.max_chain_ratio) {
            rep.max_chain_ratio = cr;
            rep.argmax_chain_time = norms.times[k];
        }
        if (tr > rep.max_trace_ratio) {
            rep.max_trace_ratio = tr;
            rep.argmax_trace_time = norms.times[k];
        }
    }
    return rep;
}

}  // namespace diagnostics
}  // namespace dtn
