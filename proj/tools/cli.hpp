#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scriptfocus::cli {

// sysexits-style process exit codes.
enum ExitCode : int {
  kOk = 0,
  kScriptInvalid = 2,
  kUsage = 64,
  kDataError = 65,
  kNoInput = 66,
  kSoftware = 70,
  kIoError = 74,
  kUnavailable = 69,
  kProtocol = 76,
};

// Runs the command line `args` (args[0] is the program name) and returns the
// exit code. Regular output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scriptfocus::cli
