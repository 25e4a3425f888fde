#include "dtn/config.hpp"

#include "test_util.hpp"

using namespace dtn;
using namespace testutil;

static void test_defaults_and_minimal() {
    const RunConfig cfg = parse_config("[grid]\nL = 40\n");
    record("minimal config: defaults filled",
           cfg.grid.nx == 800 && cfg.grid.dt == 0.005 && cfg.data.kind == DataKind::Decay &&
               cfg.solver.lambda == 1 && cfg.output.dir == "out");
    check_near("minimal config: L honored", cfg.grid.L, 40.0, 0.0);

    const RunConfig full = parse_config(
        "# full example\n"
        "[grid]\n"
        "L = 20\nnx = 400\ndt = 0.01\nT = 50   # inline comment\n"
        "sponge_fraction = 0.2\nsponge_strength = 30\n"
        "[data]\n"
        "kind = decay\namplitude = 0.25\nm = 3\nalpha = 2.75\nomega = -1\ntscale = 2\n"
        "[solver]\n"
        "lambda = -1\nfixed_point_tol = 1e-10\nmax_fixed_point_iters = 30\n"
        "snapshot_stride = 5\npropagate_qt = true\n"
        "[verify]\n"
        "theorems = T2.1,T3.8,AppA\nl4_window = 5,60\nneumann_window = 10,45\n"
        "appendix_p = 1.2\nsmallness_threshold = 0.02\n"
        "[output]\n"
        "dir = results\nstride = 2\n");
    record("full config parsed",
           full.grid.nx == 400 && full.data.m == 3 && full.data.omega == -1.0 &&
               full.solver.lambda == -1 && full.solver.propagate_qt &&
               full.verify.theorems.size() == 3 && full.verify.l4_window.t_max == 60.0 &&
               full.output.dir == "results" && full.output.stride == 2);
}

static void test_errors() {
    check_throws("type mismatch cites the line",
                 [] { parse_config("[grid]\nL = 40\n[data]\nalpha = banana\n"); }, "line 4");
    check_throws("duplicate key names both lines",
                 [] { parse_config("[grid]\nL = 40\nnx = 100\nL = 50\n"); }, "first at line 2");
    check_throws("unknown key rejected",
                 [] { parse_config("[grid]\nL = 40\nwavelength = 3\n"); }, "unknown key");
    check_throws("unknown section rejected", [] { parse_config("[gird]\nL = 40\n"); },
                 "unknown section");
    check_throws("key before any section",
                 [] { parse_config("L = 40\n[grid]\nnx = 100\n"); }, "missing section");
    check_throws("unknown theorem id",
                 [] { parse_config("[verify]\ntheorems = T9.9\n"); }, "unknown theorem");
    check_throws("lambda outside {-1,0,1}",
                 [] { parse_config("[solver]\nlambda = 2\n"); }, "lambda");
    check_throws("grid invariants enforced at parse time",
                 [] { parse_config("[grid]\nnx = 4\n"); }, "mesh too coarse");
    check_throws("data invariants enforced at parse time",
                 [] { parse_config("[data]\nalpha = -1\n"); }, "alpha");
    check_throws("malformed line rejected", [] { parse_config("[grid]\nL판\n"); },
                 "expected key = value");
}

static void test_factories() {
    const RunConfig cfg = parse_config(
        "[data]\nkind = decay\namplitude = 0.5\nalpha = 3\nomega = 1\n[solver]\nlambda = -1\n");
    const DecayFamily fam = cfg.make_family();
    record("family factory carries parameters",
           fam.amplitude() == 0.5 && fam.alpha() == 3.0 && fam.omega() == 1.0 &&
               fam.beta() == 3.0);
    const SolverConfig sc = cfg.make_solver_config();
    record("solver factory carries lambda", sc.nonlinearity == Nonlinearity::Focusing);

    const RunConfig man = parse_config("[data]\nkind = manufactured\namplitude = 1\n");
    record("manufactured data wires the forcing",
           static_cast<bool>(man.make_solver_config().forcing));

    const RunConfig zero = parse_config("[data]\nkind = zero\n");
    record("zero data has zero boundary",
           std::abs(zero.make_boundary().Q(3.0)) == 0.0);

    const RunConfig synth = parse_config(
        "[grid]\nT = 10\ndt = 0.01\n[data]\nkind = synthetic\nsynth_p = 1\nsynth_pt = 0.4\n");
    const TraceSeries tr = synthetic_traces(synth);
    record("synthetic traces: injected exponents honored",
           std::abs(tr.P.back().real() - std::pow(11.0, -1.0)) < 1e-12 &&
               std::abs(tr.Pt.back().real() - std::pow(11.0, -0.4)) < 1e-12);
    check_throws("synthetic data cannot drive the solver", [&] { synth.make_boundary(); },
                 "synthetic");
}

int main() {
    test_defaults_and_minimal();
    test_errors();
    test_factories();
    return summary("test_config");
}
