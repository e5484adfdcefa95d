#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hitch::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kGuardError = 3;

// Runs one command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hitch::cli
