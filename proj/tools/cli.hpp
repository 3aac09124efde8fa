#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seld::cli {

// Runs one command line (without the program name). Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seld::cli
