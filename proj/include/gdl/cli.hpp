#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gdl::cli {

/// Runs one command line (without the program name).  Writes a single JSON
/// document to `out` and diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gdl::cli
