#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace irslab::cli {

/// Runs one command line (without the program name). Reports go to `out`
/// unless --report names a file; diagnostics go to `err`.
///
/// Returns 0 iff every check in the report passed, 1 on a failed check,
/// 2 on invalid input or an infeasible construction, and the CLI11 code on
/// argument errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irslab::cli
