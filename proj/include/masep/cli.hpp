#pragma once

#include <iosfwd>

namespace masep {

/// Command-line entry point. Writes the JSON report to `out` (or --out) and
/// diagnostics to `err`. Returns 0 when every requested check passed, 1
/// when a check failed, 2 on invalid input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace masep
