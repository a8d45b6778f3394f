#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vipclip::cli {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kDiverged = 3;
}  // namespace exit_code

// Entry point of the vipclip tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vipclip::cli
