#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace offload {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitRuntime = 4,
};

// Entry point behind the offload_sim binary. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace offload
