#pragma once

#include <string>

#include "dtn/config.hpp"

namespace dtn {
namespace commands {

/// Exit codes shared by every subcommand: 0 all selected checks pass,
/// 1 a check failed, 2 usage/config error, 3 numerical failure.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

int run_command(const RunConfig& config, const std::string& out_dir);
int verify_command(const RunConfig& config, const std::string& out_dir);
int sweep_command(const RunConfig& config, const std::string& out_dir, int workers);
int convergence_command(const RunConfig& config, const std::string& out_dir);

}  // namespace commands

namespace diagnostics {

/// Bundles the four identity residual series and the per-snapshot relative
/// pseudoconformal defect for a completed run.
IdentityResiduals identity_residuals(const RunResult& result, const GridSpec& grid,
                                     double lambda);

}  // namespace diagnostics
}  // namespace dtn
