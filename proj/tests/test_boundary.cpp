#include "dtn/boundary.hpp"

#include <random>

#include "dtn/numerics.hpp"
#include "test_util.hpp"

using namespace dtn;
using namespace testutil;

// Composite Simpson oracle with fixed step, independent of the adaptive
// quadrature inside tail_integrals.
static double brute_simpson(const std::function<double(double)>& f, double a, double b,
                            double step) {
    const long n = 2 * static_cast<long>((b - a) / (2.0 * step));
    const double h = (b - a) / static_cast<double>(n);
    double odd = 0.0, even = 0.0;
    for (long i = 1; i < n; i += 2) odd += f(a + i * h);
    for (long i = 2; i < n; i += 2) even += f(a + i * h);
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

static void test_closed_form_values() {
    const DecayFamily fam(1.0, 2, 3.0, 0.0, 1.0);
    check_near("Q(0) = 0 (ramp compatibility)", std::abs(fam.eval_Q(0.0)), 0.0, 0.0);
    check_near("Q(1) = 1/32 for m=2, alpha=3", fam.eval_Q(1.0).real(), 0.03125, 1e-15);
    check_near("Q'(0) = 0 for m >= 2", std::abs(fam.eval_Qt(0.0)), 0.0, 0.0);

    // asymptotic decay ratio: |Q(2t)|/|Q(t)| -> 2^-3 as t -> infinity
    const double ratio = std::abs(fam.eval_Q(2000.0)) / std::abs(fam.eval_Q(1000.0));
    check_rel("asymptotic ratio |Q(2t)|/|Q(t)| -> 2^-alpha at t=1e3", ratio, 0.125, 0.05);

    const DecayFamily osc(0.5, 3, 2.0, 1.5, 2.0);
    check_near("Q(0) = 0 for the oscillatory family", std::abs(osc.eval_Q(0.0)), 0.0, 0.0);
    record("effective beta: omega=0 gains one order",
           fam.beta() == 4.0 && fam.gamma() == 5.0 && osc.beta() == 2.0 && osc.gamma() == 2.0);

    check_throws("ramp_order < 2 rejected", [] { DecayFamily(1.0, 1, 3.0, 0.0, 1.0); });
    check_throws("alpha <= 0 rejected", [] { DecayFamily(1.0, 2, 0.0, 0.0, 1.0); });
}

static void test_derivative_consistency() {
    // analytic derivatives vs centered differences at fixed pseudo-random times
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(0.05, 20.0);
    const double h = 1e-5;
    for (const DecayFamily fam :
         {DecayFamily(1.0, 2, 3.0, 0.0, 1.0), DecayFamily(0.7, 3, 2.5, 2.0, 1.5)}) {
        double worst_qt = 0.0, worst_qtt = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double t = uni(rng);
            const cplx fd_qt = (fam.eval_Q(t + h) - fam.eval_Q(t - h)) / (2.0 * h);
            const cplx fd_qtt = (fam.eval_Qt(t + h) - fam.eval_Qt(t - h)) / (2.0 * h);
            worst_qt = std::max(worst_qt,
                                std::abs(fd_qt - fam.eval_Qt(t)) / std::abs(fam.eval_Qt(t)));
            worst_qtt = std::max(worst_qtt,
                                 std::abs(fd_qtt - fam.eval_Qtt(t)) / std::abs(fam.eval_Qtt(t)));
        }
        const std::string tag = fam.omega() == 0.0 ? " (omega=0)" : " (omega!=0)";
        record("eval_Qt matches O(h^2) differences of eval_Q" + tag, worst_qt <= 1e-6,
               qoi(worst_qt, 1e-6));
        record("eval_Qtt matches O(h^2) differences of eval_Qt" + tag, worst_qtt <= 1e-6,
               qoi(worst_qtt, 1e-6));
    }
}

static void test_exponent_law() {
    // least-squares slope of log|Q| vs log t on [1e2, 1e3] equals -alpha
    for (const DecayFamily fam :
         {DecayFamily(1.0, 2, 3.0, 0.0, 1.0), DecayFamily(1.0, 2, 2.0, 1.0, 1.0)}) {
        std::vector<double> lt, lq, lqt;
        for (double t = 100.0; t <= 1000.0; t += 10.0) {
            lt.push_back(std::log(t));
            lq.push_back(std::log(std::abs(fam.eval_Q(t))));
            lqt.push_back(std::log(std::abs(fam.eval_Qt(t))));
        }
        const double slope_q = least_squares_line(lt, lq).slope;
        const double slope_qt = least_squares_line(lt, lqt).slope;
        const std::string tag = fam.omega() == 0.0 ? "omega=0" : "omega!=0";
        check_near("log|Q| slope = -alpha (" + tag + ")", slope_q, -fam.alpha(), 0.05);
        check_near("log|Qt| slope = -beta (" + tag + ")", slope_qt, -fam.beta(), 0.05);
    }
}

static void test_tail_integrals() {
    const DecayFamily fam(1.0, 2, 3.0, 0.0, 1.0);
    const auto tails = fam.tail_integrals(0.0);

    // Beta(5,5) = Gamma(5)^2/Gamma(10) = 1/630 for the |Q|^2 tail from 0
    check_rel("tail |Q|^2 from 0 equals Beta(5,5)", tails.q_sq, 1.0 / 630.0, 1e-8);

    const double brute_q2 = brute_simpson(
        [&](double t) { return std::norm(fam.eval_Q(t)); }, 0.0, 1000.0, 1e-4);
    const double brute_qt2 = brute_simpson(
        [&](double t) { return std::norm(fam.eval_Qt(t)); }, 0.0, 1000.0, 1e-3);
    const double brute_q4 = brute_simpson(
        [&](double t) {
            const double a = std::norm(fam.eval_Q(t));
            return a * a;
        },
        0.0, 1000.0, 1e-3);
    check_rel("tail |Q|^2 vs brute Simpson", tails.q_sq, brute_q2, 1e-6);
    check_rel("tail |Qt|^2 vs brute Simpson", tails.qt_sq, brute_qt2, 1e-6);
    check_rel("tail |Q|^4 vs brute Simpson", tails.q_4, brute_q4, 1e-6);

    // an oscillatory family picks up the omega^2 |Q|^2 derivative term
    const DecayFamily osc(0.5, 2, 3.0, 1.0, 1.0);
    const auto osc_tails = osc.tail_integrals(2.0);
    const double brute_osc = brute_simpson(
        [&](double t) { return std::norm(osc.eval_Qt(t)); }, 2.0, 1000.0, 1e-3);
    check_rel("tail |Qt|^2 with carrier vs brute Simpson", osc_tails.qt_sq, brute_osc, 1e-6);

    // monotone decrease to zero
    bool monotone = true;
    auto prev = fam.tail_integrals(0.0);
    for (double t = 1.0; t <= 50.0; t += 1.0) {
        const auto cur = fam.tail_integrals(t);
        if (cur.q_sq > prev.q_sq || cur.qt_sq > prev.qt_sq || cur.q_4 > prev.q_4) {
            monotone = false;
        }
        prev = cur;
    }
    record("tail integrals nonincreasing in t", monotone);
    record("tails vanish at large t", prev.q_sq < 1e-8 && prev.qt_sq < 1e-8 && prev.q_4 < 1e-12);

    const DecayFamily zero(0.0, 2, 3.0, 0.0, 1.0);
    const auto z = zero.tail_integrals(0.0);
    record("zero data has zero tails", z.q_sq == 0.0 && z.qt_sq == 0.0 && z.q_4 == 0.0);

    check_throws("alpha <= 1/2 rejected (divergent tail)",
                 [] { DecayFamily(1.0, 2, 0.5, 0.0, 1.0).tail_integrals(0.0); }, "alpha");
}

static void test_manufactured() {
    const ManufacturedSolution ms(cplx{1.0, 0.0});
    check_near("q_m(x,0) = 0", std::abs(ms.field(3.0, 0.0)), 0.0, 0.0);
    check_near("forcing vanishes at t = 0", std::abs(ms.forcing(1.0, 2.0, 0.0)), 0.0, 0.0);

    // lambda = 0: f = A (i h' + h) e^{-x}
    const double t = 1.7, x = 0.8;
    const cplx f0 = ms.forcing(0.0, x, t);
    const cplx expected =
        (cplx{ms.envelope(t), ms.envelope_dt(t)}) * std::exp(-x);
    check_near("linear forcing matches A(i h' + h)e^{-x}", std::abs(f0 - expected), 0.0, 1e-15);

    // closed form vs finite differences of the residual, lambda = 1
    const ManufacturedSolution msc(cplx{0.8, 0.6});
    const double h = 1e-5;
    const cplx dq_t = (msc.field(x, t + h) - msc.field(x, t - h)) / (2.0 * h);
    const cplx d2q_x =
        (msc.field(x + h, t) - 2.0 * msc.field(x, t) + msc.field(x - h, t)) / (h * h);
    const cplx q = msc.field(x, t);
    const cplx fd = cplx{0.0, 1.0} * dq_t + d2q_x - 2.0 * std::norm(q) * q;
    check_rel("forcing matches finite-difference residual (lambda=1)",
              std::abs(msc.forcing(1.0, x, t) - fd), 0.0, 1e-5 * std::abs(fd) + 1e-9);

    // decay in x like e^{-x}
    const double r = std::abs(ms.forcing(1.0, 6.0, t)) / std::abs(ms.forcing(1.0, 5.0, t));
    check_rel("forcing decays like e^{-x}", r, std::exp(-1.0), 1e-3);

    check_near("exact Neumann trace is -A h(t)", std::abs(ms.neumann(t) + ms.dirichlet(t)), 0.0,
               1e-15);
}

int main() {
    test_closed_form_values();
    test_derivative_consistency();
    test_exponent_law();
    test_tail_integrals();
    test_manufactured();
    return summary("test_boundary");
}
