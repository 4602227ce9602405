#ifndef SIMLM_TOOLS_CLI_HPP
#define SIMLM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace simlm::cli {

// Exit codes: 0 success, 1 usage or configuration error, 2 I/O error.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace simlm::cli

#endif  // SIMLM_TOOLS_CLI_HPP
