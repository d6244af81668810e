#pragma once

#include "flagcurv/cli/config.hpp"

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace flagcurv::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitPrecondition = 3,
  kExitNumeric = 4,
};

enum class OutputFormat { Table, Json };

/// Command-line overrides; unset fields fall back to the config's options.
struct RunOptions {
  std::optional<SignConvention> convention;
  std::optional<Method> method;
  std::optional<GySource> gy_source;
  std::optional<double> fd_step;
  std::optional<std::int64_t> samples;
  std::optional<std::uint64_t> seed;
  CurvatureVariant variant = CurvatureVariant::Statement;
  bool force = false;
  OutputFormat output = OutputFormat::Table;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;
  /// Human-readable diagnostics for stderr.
  std::string errors;
};

/// One row of the validation report. Soft checks are informational and do
/// not affect the exit code.
struct CheckRow {
  std::string name;
  bool ok = true;
  bool hard = true;
  bool applicable = true;
  double defect = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckRow> checks;
  std::vector<std::string> notices;

  bool ok() const;
  std::vector<std::string> failures() const;
};

ValidationReport validate_config(const ProblemConfig& config);

int exit_code_for(const std::exception& err);

CommandResult cmd_validate(const ProblemConfig& config, const RunOptions& options = {});
CommandResult cmd_curvature(const ProblemConfig& config, const RunOptions& options = {});
CommandResult cmd_scan(const ProblemConfig& config, const RunOptions& options = {});
CommandResult cmd_berwald(const ProblemConfig& config, const RunOptions& options = {});

/// Parses the config at `path` and runs `command`; every failure is mapped
/// to an exit code and a message instead of escaping.
CommandResult run_command(const std::string& command, const std::string& path,
                          const RunOptions& options = {});

}  // namespace flagcurv::cli
