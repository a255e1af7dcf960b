#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uq {

/// Entry point of the `uq` tool. args[0] is the program name.
/// Returns the process exit status: 0 iff every requested output was written.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uq
