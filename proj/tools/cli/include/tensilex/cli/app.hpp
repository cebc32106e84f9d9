#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tensilex::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kIoError = 1,
  kValidationError = 2,
};

/// Environment variable consulted when --lexicon-dir is omitted.
inline constexpr const char* kLexiconDirEnv = "TENSILEX_LEXICON_DIR";

/// Runs the command line `argv` (argv[0] is the program name) against the
/// given streams and returns the exit code.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace tensilex::cli
