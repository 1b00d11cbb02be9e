#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gtpush::cli {

// Exit codes: 0 pass, 1 verification failure, 2 usage error.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;

// Runs one command line (without the program name).
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gtpush::cli
