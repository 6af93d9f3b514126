#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyp::cli {

// Dispatches one command line (without the program name). Exit codes:
// 0 success, 1 domain error (one-line diagnostic on err), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyp::cli
