#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace speiser::cli {

/// Runs one command line. Returns 0 on success, 1 on a domain error, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace speiser::cli
