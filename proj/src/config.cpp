#include "dtn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace dtn {

namespace {

struct RawEntry {
    std::string value;
    int line;
};

struct RawConfig {
    // (section, key) -> entry; insertion order preserved for reporting
    std::map<std::pair<std::string, std::string>, RawEntry> entries;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

RawConfig tokenize(const std::string& text) {
    static const std::vector<std::string> known_sections = {"grid",   "data",  "solver",
                                                            "verify", "output", "sweep"};
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(known_sections.begin(), known_sections.end(), section) ==
                known_sections.end()) {
                fail(lineno, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        if (section.empty()) fail(lineno, "missing section: key before any [section] header");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        const auto [it, inserted] = raw.entries.insert({{section, key}, {value, lineno}});
        if (!inserted) {
            fail(lineno, "duplicate key '" + key + "' in [" + section + "] (first at line " +
                             std::to_string(it->second.line) + ")");
        }
    }
    return raw;
}

/// Typed extraction with consumption tracking so leftovers become
/// "unknown key" errors.
class Extractor {
public:
    explicit Extractor(RawConfig raw) : raw_(std::move(raw)) {}

    std::optional<std::pair<std::string, int>> take(const std::string& section,
                                                    const std::string& key) {
        auto it = raw_.entries.find({section, key});
        if (it == raw_.entries.end()) return std::nullopt;
        auto out = std::make_pair(it->second.value, it->second.line);
        raw_.entries.erase(it);
        return out;
    }

    double take_double(const std::string& s, const std::string& k, double fallback) {
        auto e = take(s, k);
        if (!e) return fallback;
        return parse_double(e->first, e->second, k);
    }

    int take_int(const std::string& s, const std::string& k, int fallback) {
        auto e = take(s, k);
        if (!e) return fallback;
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(e->first, &pos);
        } catch (...) {
            fail(e->second, "type mismatch for '" + k + "': expected integer, got '" + e->first + "'");
        }
        if (pos != e->first.size()) {
            fail(e->second, "type mismatch for '" + k + "': expected integer, got '" + e->first + "'");
        }
        return v;
    }

    bool take_bool(const std::string& s, const std::string& k, bool fallback) {
        auto e = take(s, k);
        if (!e) return fallback;
        if (e->first == "true" || e->first == "1") return true;
        if (e->first == "false" || e->first == "0") return false;
        fail(e->second, "type mismatch for '" + k + "': expected true/false, got '" + e->first + "'");
    }

    std::string take_string(const std::string& s, const std::string& k, std::string fallback) {
        auto e = take(s, k);
        return e ? e->first : fallback;
    }

    std::optional<double> take_optional_double(const std::string& s, const std::string& k) {
        auto e = take(s, k);
        if (!e) return std::nullopt;
        return parse_double(e->first, e->second, k);
    }

    std::vector<double> take_double_list(const std::string& s, const std::string& k) {
        auto e = take(s, k);
        if (!e) return {};
        std::vector<double> out;
        std::istringstream ss(e->first);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(parse_double(trim(item), e->second, k));
        }
        if (out.empty()) fail(e->second, "empty list for '" + k + "'");
        return out;
    }

    FitWindow take_window(const std::string& s, const std::string& k, FitWindow fallback) {
        auto e = take(s, k);
        if (!e) return fallback;
        const auto list = [&] {
            std::vector<double> out;
            std::istringstream ss(e->first);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), e->second, k));
            return out;
        }();
        if (list.size() != 2) fail(e->second, "'" + k + "' expects two comma-separated numbers");
        return FitWindow{list[0], list[1]};
    }

    bool section_present(const std::string& s) const {
        for (const auto& [sk, entry] : raw_.entries) {
            if (sk.first == s) return true;
        }
        return false;
    }

    void finish() const {
        if (raw_.entries.empty()) return;
        const auto& [sk, entry] = *raw_.entries.begin();
        fail(entry.line, "unknown key '" + sk.second + "' in [" + sk.first + "]");
    }

private:
    static double parse_double(const std::string& v, int line, const std::string& k) {
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (...) {
            fail(line, "type mismatch for '" + k + "': expected number, got '" + v + "'");
        }
        if (pos != v.size()) {
            fail(line, "type mismatch for '" + k + "': expected number, got '" + v + "'");
        }
        return out;
    }

    RawConfig raw_;
};

std::vector<std::string> parse_theorem_list(const std::string& value, int line) {
    static const std::vector<std::string> known = {"T2.1", "T3.2", "T3.4", "P3.5", "T3.6",
                                                   "T3.8", "T3.9", "P4.1", "P4.2", "T4.3",
                                                   "T4.4", "T4.5", "AppA"};
    if (value == "auto") return {};
    std::vector<std::string> out;
    std::istringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (std::find(known.begin(), known.end(), item) == known.end()) {
            fail(line, "unknown theorem id '" + item + "'");
        }
        out.push_back(item);
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    Extractor ex(tokenize(text));
    RunConfig cfg;

    cfg.grid.L = ex.take_double("grid", "L", cfg.grid.L);
    cfg.grid.nx = ex.take_int("grid", "nx", cfg.grid.nx);
    cfg.grid.dt = ex.take_double("grid", "dt", cfg.grid.dt);
    cfg.grid.T = ex.take_double("grid", "T", cfg.grid.T);
    cfg.grid.sponge_fraction = ex.take_double("grid", "sponge_fraction", cfg.grid.sponge_fraction);
    cfg.grid.sponge_strength = ex.take_double("grid", "sponge_strength", cfg.grid.sponge_strength);

    {
        auto kind = ex.take("data", "kind");
        if (kind) {
            const std::string& v = kind->first;
            if (v == "decay") cfg.data.kind = DataKind::Decay;
            else if (v == "manufactured") cfg.data.kind = DataKind::Manufactured;
            else if (v == "zero") cfg.data.kind = DataKind::Zero;
            else if (v == "synthetic") cfg.data.kind = DataKind::Synthetic;
            else fail(kind->second, "unknown data kind '" + v + "'");
        }
    }
    cfg.data.amplitude = ex.take_double("data", "amplitude", cfg.data.amplitude);
    cfg.data.m = ex.take_int("data", "m", cfg.data.m);
    cfg.data.alpha = ex.take_double("data", "alpha", cfg.data.alpha);
    cfg.data.omega = ex.take_double("data", "omega", cfg.data.omega);
    cfg.data.tscale = ex.take_double("data", "tscale", cfg.data.tscale);
    cfg.data.synth_q = ex.take_double("data", "synth_q", cfg.data.synth_q);
    cfg.data.synth_p = ex.take_double("data", "synth_p", cfg.data.synth_p);
    cfg.data.synth_qt = ex.take_optional_double("data", "synth_qt");
    cfg.data.synth_pt = ex.take_optional_double("data", "synth_pt");

    {
        auto lam = ex.take("solver", "lambda");
        if (lam) {
            int v = 0;
            std::size_t pos = 0;
            try {
                v = std::stoi(lam->first, &pos);
            } catch (...) {
                pos = std::string::npos;
            }
            if (pos != lam->first.size() || (v != -1 && v != 0 && v != 1)) {
                fail(lam->second, "lambda must be one of -1, 0, 1");
            }
            cfg.solver.lambda = v;
        }
    }
    cfg.solver.fixed_point_tol =
        ex.take_double("solver", "fixed_point_tol", cfg.solver.fixed_point_tol);
    cfg.solver.max_fixed_point_iters =
        ex.take_int("solver", "max_fixed_point_iters", cfg.solver.max_fixed_point_iters);
    cfg.solver.snapshot_stride =
        ex.take_int("solver", "snapshot_stride", cfg.solver.snapshot_stride);
    cfg.solver.propagate_qt = ex.take_bool("solver", "propagate_qt", cfg.solver.propagate_qt);

    {
        auto th = ex.take("verify", "theorems");
        if (th) cfg.verify.theorems = parse_theorem_list(th->first, th->second);
    }
    cfg.verify.l4_window = ex.take_window("verify", "l4_window", cfg.verify.l4_window);
    cfg.verify.neumann_window =
        ex.take_window("verify", "neumann_window", cfg.verify.neumann_window);
    cfg.verify.appendix_p = ex.take_double("verify", "appendix_p", cfg.verify.appendix_p);
    cfg.verify.smallness_threshold =
        ex.take_double("verify", "smallness_threshold", cfg.verify.smallness_threshold);

    cfg.output.dir = ex.take_string("output", "dir", cfg.output.dir);
    cfg.output.stride = ex.take_int("output", "stride", cfg.output.stride);

    cfg.sweep.present = ex.section_present("sweep");
    cfg.sweep.alphas = ex.take_double_list("sweep", "alphas");
    cfg.sweep.omegas = ex.take_double_list("sweep", "omegas");
    cfg.sweep.lambdas = ex.take_double_list("sweep", "lambdas");
    cfg.sweep.amplitudes = ex.take_double_list("sweep", "amplitudes");

    ex.finish();

    // Construction-time validation so config errors surface before any run.
    cfg.make_grid();
    if (cfg.data.kind == DataKind::Decay) cfg.make_family();
    cfg.make_solver_config().validate();
    if (cfg.output.stride < 1) throw ConfigError("output stride must be >= 1");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

GridSpec RunConfig::make_grid() const {
    try {
        return GridSpec(grid.L, grid.nx, grid.dt, grid.T, grid.sponge_fraction,
                        grid.sponge_strength);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[grid]: ") + e.what());
    }
}

DecayFamily RunConfig::make_family() const {
    if (data.kind != DataKind::Decay) throw ConfigError("data kind is not 'decay'");
    try {
        return DecayFamily(data.amplitude, data.m, data.alpha, data.omega, data.tscale);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[data]: ") + e.what());
    }
}

ManufacturedSolution RunConfig::make_manufactured() const {
    if (data.kind != DataKind::Manufactured) throw ConfigError("data kind is not 'manufactured'");
    return ManufacturedSolution(cplx{data.amplitude, 0.0});
}

SolverConfig RunConfig::make_solver_config() const {
    SolverConfig sc;
    sc.nonlinearity = nonlinearity_from_int(solver.lambda);
    sc.fixed_point_tol = solver.fixed_point_tol;
    sc.max_fixed_point_iters = solver.max_fixed_point_iters;
    sc.snapshot_stride = solver.snapshot_stride;
    sc.propagate_qt = solver.propagate_qt;
    if (data.kind == DataKind::Manufactured) {
        const ManufacturedSolution ms = make_manufactured();
        const double lambda = static_cast<double>(solver.lambda);
        sc.forcing = [ms, lambda](double x, double t) { return ms.forcing(lambda, x, t); };
    }
    return sc;
}

BoundarySource RunConfig::make_boundary() const {
    switch (data.kind) {
        case DataKind::Decay: return boundary_from(make_family());
        case DataKind::Manufactured: return boundary_from(make_manufactured());
        case DataKind::Zero: return zero_boundary();
        case DataKind::Synthetic:
            throw ConfigError("synthetic data cannot drive the solver; use verify");
    }
    throw ConfigError("unreachable data kind");
}

verify::SuiteOptions RunConfig::make_suite_options() const {
    verify::SuiteOptions opt;
    opt.l4_window = verify.l4_window;
    opt.neumann_window = verify.neumann_window;
    opt.appendix_p = verify.appendix_p;
    opt.smallness_threshold = verify.smallness_threshold;
    return opt;
}

TraceSeries synthetic_traces(const RunConfig& config) {
    const GridSpec g = config.make_grid();
    const int stride = config.solver.snapshot_stride;
    const double h = g.dt() * stride;
    const int count = g.steps() / stride;

    const double aq = config.data.synth_q;
    const double ap = config.data.synth_p;

    TraceSeries tr;
    for (int k = 0; k <= count; ++k) {
        const double t = h * k;
        tr.times.push_back(t);
        tr.Q.push_back(cplx{std::pow(1.0 + t, -aq), 0.0});
        if (config.data.synth_qt) {
            tr.Qt.push_back(cplx{std::pow(1.0 + t, -*config.data.synth_qt), 0.0});
        } else {
            tr.Qt.push_back(cplx{-aq * std::pow(1.0 + t, -aq - 1.0), 0.0});
        }
        tr.Qtt.push_back(cplx{aq * (aq + 1.0) * std::pow(1.0 + t, -aq - 2.0), 0.0});
        tr.P.push_back(cplx{std::pow(1.0 + t, -ap), 0.0});
        if (config.data.synth_pt) {
            tr.Pt.push_back(cplx{std::pow(1.0 + t, -*config.data.synth_pt), 0.0});
        } else {
            tr.Pt.push_back(cplx{-ap * std::pow(1.0 + t, -ap - 1.0), 0.0});
        }
    }
    return tr;
}

}  // namespace dtn
