#pragma once

#include <iosfwd>

namespace lane_emden::cli {

/// Parses argv, runs the command and writes the document to --out (or `out`
/// for "-"). Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lane_emden::cli
