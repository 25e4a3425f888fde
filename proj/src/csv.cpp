#include "dtn/csv.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dtn {
namespace io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}

void stamp(std::ofstream& out) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    out << "# generated " << buf << "\n";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_traces_csv(const std::string& path, const TraceSeries& traces) {
    auto out = open_out(path);
    stamp(out);
    out << "# t,reQ,imQ,reQt,imQt,reP,imP,rePt,imPt\n";
    for (std::size_t k = 0; k < traces.size(); ++k) {
        out << num(traces.times[k]) << ',' << num(traces.Q[k].real()) << ','
            << num(traces.Q[k].imag()) << ',' << num(traces.Qt[k].real()) << ','
            << num(traces.Qt[k].imag()) << ',' << num(traces.P[k].real()) << ','
            << num(traces.P[k].imag()) << ',' << num(traces.Pt[k].real()) << ','
            << num(traces.Pt[k].imag()) << '\n';
    }
}

void write_norms_csv(const std::string& path, const NormSeries& norms) {
    auto out = open_out(path);
    stamp(out);
    out << "# t,l2sq,gradsq,l4_4,energy,moment2,virial,supabs,leakage\n";
    for (std::size_t k = 0; k < norms.size(); ++k) {
        out << num(norms.times[k]) << ',' << num(norms.l2sq[k]) << ',' << num(norms.gradsq[k])
            << ',' << num(norms.l4_4[k]) << ',' << num(norms.energy[k]) << ','
            << num(norms.moment2[k]) << ',' << num(norms.virial[k]) << ','
            << num(norms.supabs[k]) << ',' << num(norms.leakage[k]) << '\n';
    }
}

void write_residuals_csv(const std::string& path, const IdentityResiduals& residuals) {
    auto out = open_out(path);
    stamp(out);
    out << "# t,mass_res,energy_res,trace_res,virial_res,pseudoconf\n";
    for (std::size_t k = 0; k < residuals.times.size(); ++k) {
        out << num(residuals.times[k]) << ',' << num(residuals.mass_res[k]) << ','
            << num(residuals.energy_res[k]) << ',' << num(residuals.trace_res[k]) << ','
            << num(residuals.virial_res[k]) << ',' << num(residuals.pseudoconf[k]) << '\n';
    }
}

void write_convergence_csv(const std::string& path, const oracle::ConvergenceStudy& study) {
    auto out = open_out(path);
    stamp(out);
    out << "# level,dx,dt,max_err,l2_err,observed_order\n";
    for (std::size_t i = 0; i < study.levels.size(); ++i) {
        const auto& row = study.levels[i];
        out << i << ',' << num(row.dx) << ',' << num(row.dt) << ',' << num(row.max_err) << ','
            << num(row.l2_err) << ',';
        if (i > 0) out << num(study.observed_orders[i - 1]);
        out << '\n';
    }
}

void write_report_txt(const std::string& path, const verify::VerificationReport& report) {
    auto out = open_out(path);
    stamp(out);
    out << "[run]\n";
    for (const auto& [key, value] : report.metadata) out << key << ": " << value << "\n";
    for (const auto& v : report.verdicts) {
        out << "\n[" << v.theorem_id << "]\n";
        out << "pass: " << (v.pass ? "true" : "false") << "\n";
        out << "threshold: " << num(v.threshold) << "\n";
        for (const auto& [key, value] : v.measured) out << key << ": " << num(value) << "\n";
        if (!v.notes.empty()) out << "notes: " << v.notes << "\n";
    }
}

void write_report_csv(const std::string& path, const verify::VerificationReport& report) {
    auto out = open_out(path);
    stamp(out);
    out << "# theorem_id,name,value\n";
    for (const auto& v : report.verdicts) {
        out << v.theorem_id << ",pass," << (v.pass ? 1 : 0) << '\n';
        out << v.theorem_id << ",threshold," << num(v.threshold) << '\n';
        for (const auto& [key, value] : v.measured) {
            out << v.theorem_id << ',' << key << ',' << num(value) << '\n';
        }
    }
}

void write_failed_marker(const std::string& dir, const std::string& message) {
    std::ofstream out(dir + "/FAILED");
    out << message << "\n";
}

}  // namespace io
}  // namespace dtn
