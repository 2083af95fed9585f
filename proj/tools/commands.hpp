#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spr::cli {

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode : int { ok = 0, usage = 2, input_format = 3, numerical = 4 };

/// Runs one spr_lab invocation (args excludes the program name). Reports go
/// to `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// SHA-256 of a string as lowercase hex.
std::string sha256_hex(const std::string& data);

}  // namespace spr::cli
