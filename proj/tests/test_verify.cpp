#include "dtn/verify.hpp"

#include "test_util.hpp"

using namespace dtn;
using namespace testutil;

static TraceSeries synthetic(double T, double dt, const std::function<double(double)>& p_of_t,
                             const std::function<double(double)>& pt_of_t = nullptr) {
    TraceSeries tr;
    const int n = static_cast<int>(T / dt);
    for (int k = 0; k <= n; ++k) {
        const double t = k * dt;
        tr.times.push_back(t);
        tr.Q.push_back(cplx{0.0, 0.0});
        tr.Qt.push_back(cplx{0.0, 0.0});
        tr.Qtt.push_back(cplx{0.0, 0.0});
        tr.P.push_back(cplx{p_of_t(t), 0.0});
        tr.Pt.push_back(cplx{pt_of_t ? pt_of_t(t) : 0.0, 0.0});
    }
    return tr;
}

static void test_fit_decay() {
    std::vector<double> t, v;
    for (double x = 10.0; x <= 100.0; x += 0.5) {
        t.push_back(x);
        v.push_back(5.0 / x);
    }
    const PowerLawFit exact = verify::fit_decay(t, v, {10.0, 100.0});
    check_near("exact power law: slope = -1", exact.slope, -1.0, 1e-12);
    check_near("exact power law: intercept = log 5", exact.intercept, std::log(5.0), 1e-12);
    check_near("exact power law: zero rms residual", exact.rms_residual, 0.0, 1e-12);

    std::vector<double> vp;
    for (double x : t) vp.push_back(3.0 * std::pow(x, -2.5) * (1.0 + 0.01 * std::sin(x)));
    check_near("perturbed power law: slope = -2.5 within 0.02",
               verify::fit_decay(t, vp, {10.0, 100.0}).slope, -2.5, 0.02);

    std::vector<double> vc(t.size(), 7.0);
    check_near("constant series: slope = 0", verify::fit_decay(t, vc, {10.0, 100.0}).slope, 0.0,
               1e-12);

    check_throws("insufficient points rejected",
                 [&] { verify::fit_decay(t, v, {10.0, 12.0}); }, "insufficient points");
    check_throws("degenerate window rejected (t_max <= 2 t_min)",
                 [&] { verify::fit_decay(t, v, {10.0, 20.0}); }, "degenerate window");
    check_throws("degenerate window rejected (t_min < 1)",
                 [&] { verify::fit_decay(t, v, {0.5, 50.0}); }, "degenerate window");

    std::vector<double> vz = v;
    vz[40] = 0.0;
    record("zeros are floored with a warning flag",
           verify::fit_decay(t, vz, {10.0, 100.0}).floored);
}

static void test_predicted_delta() {
    check_near("defocusing (3,3): min{2.5, 2.75} = 2.5",
               predicted_delta(3.0, 3.0, DecayCase::Defocusing), 2.5, 1e-15);
    // alpha = beta = 5/2 + eps gives the t^{-2-eps} regime
    const double eps = 0.1;
    check_near("defocusing (5/2+eps): delta = 2 + eps",
               predicted_delta(2.5 + eps, 2.5 + eps, DecayCase::Defocusing), 2.0 + eps, 1e-15);
    check_near("focusing (3,3): min{2.5, 5} = 2.5",
               predicted_delta(3.0, 3.0, DecayCase::Focusing), 2.5, 1e-15);

    // monotone nondecreasing in alpha and beta for both cases
    bool monotone = true;
    for (const DecayCase which : {DecayCase::Defocusing, DecayCase::Focusing}) {
        for (double a = 0.6; a <= 4.0; a += 0.17) {
            for (double b = 0.6; b <= 4.0; b += 0.17) {
                if (predicted_delta(a + 0.17, b, which) < predicted_delta(a, b, which) ||
                    predicted_delta(a, b + 0.17, which) < predicted_delta(a, b, which)) {
                    monotone = false;
                }
            }
        }
    }
    record("predicted_delta monotone in alpha and beta", monotone);

    // for beta = alpha (carrier on), the defocusing min is always the first
    // branch: (2a-1)/2 <= (4a-1)/4 for every a
    bool first_branch = true;
    for (double a = 0.51; a <= 6.0; a += 0.03) {
        if (predicted_delta(a, a, DecayCase::Defocusing) != (2.0 * a - 1.0) / 2.0) {
            first_branch = false;
        }
    }
    record("omega != 0 family: (2a-1)/2 branch always active", first_branch);

    record("hypotheses: defocusing needs alpha, beta > 5/2",
           delta_hypotheses_met(3.0, 3.0, DecayCase::Defocusing) &&
               !delta_hypotheses_met(2.0, 3.0, DecayCase::Defocusing) &&
               !delta_hypotheses_met(3.0, 2.0, DecayCase::Defocusing));
    record("hypotheses: focusing needs alpha > 5/2, beta > 1/2",
           delta_hypotheses_met(3.0, 0.6, DecayCase::Focusing) &&
               !delta_hypotheses_met(2.4, 3.0, DecayCase::Focusing));
}

static void test_detectors() {
    // T3.6 positive and negative controls
    const auto good = synthetic(200.0, 0.05, [](double) { return 0.0; },
                                [](double t) { return std::pow(1.0 + t, -2.0); });
    record("T3.6 passes for square-integrable P_t", verify::check_T36(good).pass);
    const auto bad = synthetic(200.0, 0.05, [](double) { return 0.0; },
                               [](double t) { return std::pow(1.0 + t, -0.4); });
    record("T3.6 negative control fails", !verify::check_T36(bad).pass);

    const auto zero = synthetic(200.0, 0.05, [](double) { return 0.0; });
    const auto z36 = verify::check_T36(zero);
    record("T3.6 zero run: 0 and pass", z36.pass && z36.measured.at("pt_sq_total") == 0.0);

    // appendix positive and harmonic negative control
    const auto fast = synthetic(200.0, 0.05, [](double t) { return std::pow(1.0 + t, -3.0); });
    record("appendix passes for P ~ t^{-3}", verify::check_appendix(fast, 1.1).pass);
    const auto harmonic =
        synthetic(200.0, 0.05, [](double t) { return 1.0 / (1.0 + t); });
    const auto vharm = verify::check_appendix(harmonic, 1.1);
    record("appendix negative control P = (1+t)^{-1} fails", !vharm.pass);
    record("  (the |P| dyadic increment is the violator)",
           vharm.measured.at("p_abs_fraction") >= 0.05);
    check_throws("appendix rejects p <= 1", [&] { verify::check_appendix(fast, 1.0); });

    // T3.8 oracle input: P = t^{-2.5} matches delta(3,3) = 2.5 exactly
    auto p_oracle = synthetic(400.0, 0.05,
                              [](double t) { return t <= 0.0 ? 0.0 : std::pow(t, -2.5); });
    const auto v38 = verify::check_T38(p_oracle, 3.0, 3.0, DecayCase::Defocusing, {20.0, 200.0});
    record("T3.8 synthetic pass at equality", v38.pass);
    check_near("T3.8 measured slope = -2.5", v38.measured.at("p_slope"), -2.5, 1e-9);
    check_near("T3.8 predicted delta wired through", v38.measured.at("delta_predicted"), 2.5,
               1e-15);

    // a too-slow tail fails the slope gate
    auto p_slow = synthetic(400.0, 0.05,
                            [](double t) { return t <= 0.0 ? 0.0 : std::pow(t, -1.5); });
    record("T3.8 fails for slope above -delta + 0.25",
           !verify::check_T38(p_slow, 3.0, 3.0, DecayCase::Defocusing, {20.0, 200.0}).pass);

    // L1 criterion mirrors the appendix |P| check
    record("T3.9 L1 check passes for P ~ t^{-3}",
           verify::check_L1_neumann(fast, DecayCase::Defocusing).pass);
    record("T3.9 L1 check fails for the harmonic tail",
           !verify::check_L1_neumann(harmonic, DecayCase::Defocusing).pass);
}

static void test_F_bounded() {
    EstimateMonitors zero;
    for (int k = 0; k <= 100; ++k) {
        zero.times.push_back(0.5 * k);
        zero.F.push_back(0.0);
    }
    record("F bounded: zero run passes", verify::check_F_bounded(zero).pass);

    // growing traces: P = Q = (1+t)^{-0.4} makes F ~ t^{1.2}
    TraceSeries grow;
    const double dt = 0.05;
    for (int k = 0; k <= 4000; ++k) {
        const double t = k * dt;
        grow.times.push_back(t);
        const double v = std::pow(1.0 + t, -0.4);
        grow.Q.push_back(cplx{v, 0.0});
        grow.Qt.push_back(cplx{-0.4 * std::pow(1.0 + t, -1.4), 0.0});
        grow.Qtt.push_back(cplx{0.0, 0.0});
        grow.P.push_back(cplx{v, 0.0});
        grow.Pt.push_back(cplx{0.0, 0.0});
    }
    const DecayFamily fam(1.0, 2, 3.0, 0.0, 1.0);
    const auto monitors = verify::compute_monitors(grow, fam);
    record("F growth negative control fails", !verify::check_F_bounded(monitors).pass);

    // monitor series from the family tails are nonnegative and nonincreasing
    bool shape_ok = true;
    for (std::size_t k = 1; k < monitors.times.size(); ++k) {
        if (monitors.G[k] < 0.0 || monitors.G[k] > monitors.G[k - 1] * (1.0 + 1e-12) ||
            monitors.G1[k] < 0.0 || monitors.G1[k] > monitors.G1[k - 1] * (1.0 + 1e-12) ||
            monitors.Gtilde[k] < 0.0 ||
            monitors.Gtilde[k] > monitors.Gtilde[k - 1] * (1.0 + 1e-12)) {
            shape_ok = false;
            break;
        }
    }
    record("G, G1, Gtilde nonnegative and nonincreasing", shape_ok);
}

static void test_plateau_and_report() {
    std::vector<double> t, flat, ramp;
    for (int k = 0; k <= 100; ++k) {
        t.push_back(0.5 * k);
        flat.push_back(2.0 + (k < 30 ? 0.3 : 0.0));
        ramp.push_back(static_cast<double>(k));
    }
    record("plateau: early sup detected as stable", verify::plateau(t, flat).stable);
    record("plateau: linear growth rejected", !verify::plateau(t, ramp).stable);

    std::vector<double> cum_flat(t.size(), 5.0), cum_lin;
    for (double x : t) cum_lin.push_back(x);
    record("dyadic Cauchy: constant cumulative converges",
           verify::dyadic_cauchy(t, cum_flat).converged);
    record("dyadic Cauchy: linear cumulative does not",
           !verify::dyadic_cauchy(t, cum_lin).converged);

    TheoremVerdict a;
    a.theorem_id = "T3.8";
    TheoremVerdict b;
    b.theorem_id = "T2.1";
    TheoremVerdict c;
    c.theorem_id = "AppA";
    const auto report = verify::build_report({a, b, c}, {{"lambda", "1"}});
    record("report ordered by prose order of results",
           report.verdicts[0].theorem_id == "T2.1" && report.verdicts[1].theorem_id == "T3.8" &&
               report.verdicts[2].theorem_id == "AppA");
    check_throws("empty report rejected", [] { verify::build_report({}, {}); });

    const auto zero = synthetic(100.0, 0.05, [](double) { return 0.0; });
    const auto t21 = verify::check_T21(zero, 1.0);
    record("T2.1 vacuous pass on zero data", t21.pass && !t21.notes.empty());

    const auto focusing = verify::check_T21(zero, -1.0, 0.01, 0.05);
    record("T2.1 focusing flags smallness",
           focusing.notes.find("smallness") != std::string::npos);
}

int main() {
    test_fit_decay();
    test_predicted_delta();
    test_detectors();
    test_F_bounded();
    test_plateau_and_report();
    return summary("test_verify");
}
