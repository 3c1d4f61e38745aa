#pragma once

#include "qmini/verify.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qmini::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSingular = 2;
inline constexpr int kExitInvalid = 3;

enum class OutputFormat { Csv, Markdown };

/// Parses `args` (without the program name) and runs one subcommand.
/// Tables go to `out` (or --out PATH), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// level,n_elem,h1_u,h1_rate,l2_u,l2_rate,l2_p,p_rate (plus the seminorm
/// columns when requested).
std::string format_report(const ErrorReport& report, OutputFormat format, bool with_seminorm = false);

}  // namespace qmini::cli
