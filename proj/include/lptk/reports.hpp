#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lptk/harness.hpp"
#include "lptk/solvers.hpp"

namespace lptk {

/// Effective configuration, echoed as "# key=value" lines atop every report.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_config_header(std::ostream& out, const ConfigEcho& config);

/// Columns iter,lambda,objective,grad_norm,gap,primal_err,wall_ns; primal_err
/// is left empty when no ground truth is supplied.
void write_trace_csv(std::ostream& out, const DualState& state,
                     const std::vector<double>& primal_errors = {});

/// Two whitespace-separated columns per line.
void write_series(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y);

/// Iterations to the target precision laid out with one column per p.
void write_rate_table(std::ostream& out, const RateReport& report);
void write_rate_csv(std::ostream& out, const RateReport& report, bool with_timings = true);

void write_kernel_table(std::ostream& out, const KernelTimingReport& report);
void write_kernel_csv(std::ostream& out, const KernelTimingReport& report,
                      bool with_timings = true);

void write_recovery_summary(std::ostream& out, const RecoveryReport& report);
void write_recovery_csv(std::ostream& out, const RecoveryReport& report);

/// Renders a double with round-trip precision.
std::string format_number(double value);

} // namespace lptk
