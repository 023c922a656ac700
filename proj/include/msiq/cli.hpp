#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msiq {

/// Command-line entry point (also used in-process by tests). Returns the
/// process exit status; failures print a machine-readable error JSON to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace msiq
