#pragma once

// The periodlab command line: subcommands check-volume, check-stokes, cone,
// subdivide, homology, periods and glue over manifest files.
//
// Exit codes: 0 pass/success, 1 a verdict failed (or did not converge),
// 2 bad input (usage, schema, references, evaluation domain).

#include <iosfwd>
#include <string>
#include <vector>

namespace periodlab::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace periodlab::cli
