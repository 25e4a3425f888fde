#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtn/boundary.hpp"
#include "dtn/grid.hpp"
#include "dtn/solver.hpp"
#include "dtn/verify.hpp"

namespace dtn {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DataKind { Decay, Manufactured, Zero, Synthetic };

/// Parsed and validated run configuration. The file format is line-oriented
/// key = value under [section] headers, with '#' comments; unknown keys and
/// duplicate keys are rejected with their line numbers.
struct RunConfig {
    struct Grid {
        double L = 40.0;
        int nx = 800;
        double dt = 0.005;
        double T = 100.0;
        double sponge_fraction = 0.25;
        double sponge_strength = 50.0;
    } grid;

    struct Data {
        DataKind kind = DataKind::Decay;
        double amplitude = 0.5;
        int m = 2;
        double alpha = 3.0;
        double omega = 0.0;
        double tscale = 1.0;
        // synthetic trace injection: series (1+t)^{-exponent}; qt/pt default to
        // the analytic derivative of the q/p series unless overridden
        double synth_q = 3.0;
        double synth_p = 3.0;
        std::optional<double> synth_qt;
        std::optional<double> synth_pt;
    } data;

    struct Solver {
        int lambda = 1;
        double fixed_point_tol = 1e-12;
        int max_fixed_point_iters = 50;
        int snapshot_stride = 10;
        bool propagate_qt = false;
    } solver;

    struct Verify {
        std::vector<std::string> theorems;  // empty = auto
        FitWindow l4_window{10.0, 100.0};
        FitWindow neumann_window{20.0, 200.0};
        double appendix_p = 1.1;
        double smallness_threshold = 0.05;
    } verify;

    struct Output {
        std::string dir = "out";
        int stride = 1;
    } output;

    struct Sweep {
        std::vector<double> alphas;
        std::vector<double> omegas;
        std::vector<double> lambdas;
        std::vector<double> amplitudes;
        bool present = false;
    } sweep;

    GridSpec make_grid() const;
    DecayFamily make_family() const;           // kind == Decay only
    ManufacturedSolution make_manufactured() const;  // kind == Manufactured only
    SolverConfig make_solver_config() const;
    BoundarySource make_boundary() const;
    verify::SuiteOptions make_suite_options() const;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Analytic trace series used by the synthetic negative-control mode.
TraceSeries synthetic_traces(const RunConfig& config);

}  // namespace dtn
