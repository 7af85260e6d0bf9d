#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dkg::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

// Runs one subcommand. `args` excludes the program name. Artifacts are
// written to the --out directory only when the command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dkg::cli
