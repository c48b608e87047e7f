#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fibscope {

/// Exit codes of `run`.
enum ExitCode { kExitOk = 0, kExitDomain = 1, kExitUsage = 2 };

/// Command-line entry point; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Built-in Broughton mapping document used by `demo broughton`.
extern const char* const kBroughtonSpec;

}  // namespace fibscope
