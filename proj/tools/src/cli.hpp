#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpot::cli {

/// Runs one `graph-potential` command. Returns 0 on success, 1 on domain
/// errors, 2 on input errors and 3 on internal faults.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpot::cli
