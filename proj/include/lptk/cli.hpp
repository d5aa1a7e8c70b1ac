#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lptk {

/// Runs the command line tool; `args` excludes the program name.
/// Returns 0 on success, 1 on solver failure, 2 on invalid arguments.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Flat key=value config text to "--key=value" tokens. Blank lines and lines
/// starting with '#' are skipped.
std::vector<std::string> config_tokens(const std::string& text);

/// Accepts a decimal ("1.25") or a fraction ("4/3").
double parse_exponent(const std::string& text);

} // namespace lptk
