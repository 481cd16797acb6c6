#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace orbicover::cli {

/// Runs one command line (without the program name). Reports go to `out`
/// unless --output is given; errors go to `err` as {"error", "detail"}.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbicover::cli
