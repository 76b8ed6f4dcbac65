#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace htv::cli {

// Runs one invocation; args excludes the program name. Returns the process
// exit code: 0 ok, 2 parse error, 3 invariant violation, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace htv::cli
