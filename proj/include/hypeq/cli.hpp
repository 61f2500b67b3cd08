// Command-line surface; exposed as a function so tests can drive it.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypeq {

// exit codes: 0 pass/success, 1 verified-fail, 2 indeterminate, 3 usage error
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hypeq
