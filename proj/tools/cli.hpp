#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rslevy::cli {

/// Runs one subcommand. Returns 0 on success, 2 on usage or validation
/// errors, 1 when a computation fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace rslevy::cli
