#ifndef POLYBOHR_TOOLS_CLI_HPP
#define POLYBOHR_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace polybohr::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

/// Shortest round-trip-safe rendering: 17 significant digits.
std::string format_double(double v);

/// JSON with every float at 17 significant digits; non-finite values become null.
void write_json(std::ostream& out, const nlohmann::ordered_json& j, int indent = 2);

/// Runs one command. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polybohr::cli

#endif  // POLYBOHR_TOOLS_CLI_HPP
