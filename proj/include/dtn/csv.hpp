#pragma once

#include <string>

#include "dtn/diagnostics.hpp"
#include "dtn/oracle.hpp"
#include "dtn/verify.hpp"

namespace dtn {
namespace io {

/// All writers emit one timestamp comment line (excluded from byte
/// comparisons), one column-documentation comment line, then the data rows.
void write_traces_csv(const std::string& path, const TraceSeries& traces);
void write_norms_csv(const std::string& path, const NormSeries& norms);
void write_residuals_csv(const std::string& path, const IdentityResiduals& residuals);
void write_convergence_csv(const std::string& path, const oracle::ConvergenceStudy& study);

void write_report_txt(const std::string& path, const verify::VerificationReport& report);
void write_report_csv(const std::string& path, const verify::VerificationReport& report);

/// Marker dropped next to partial outputs when a run aborts.
void write_failed_marker(const std::string& dir, const std::string& message);

}  // namespace io
}  // namespace dtn
