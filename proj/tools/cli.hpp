#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaussent::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kMalformedInput = 2 };

/// Runs one command line (without the program name). Reports and CSV go to
/// `out`; diagnostics go to `err`, domain errors as "<ErrorName>: message".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaussent::cli
