#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bqke::cli {

// Exit codes: 0 success / all checks pass, 1 verification mismatch,
// 2 usage or parameter error.  Never anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bqke::cli
