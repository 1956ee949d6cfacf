#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace webdep {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;
inline constexpr int kPartialScan = 3;
}  // namespace exit_code

// The whole command-line tool; `args` excludes the program name. Reports go
// to files under --out-dir, or to `out` when it is not given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace webdep
