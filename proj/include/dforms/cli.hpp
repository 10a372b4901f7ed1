#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace dforms {

// Parses the argument vector (without the program name), runs the requested
// command and writes the report to `out` and diagnostics to `err`.
// Exit-code contract: 0 every check passed, 1 at least one mathematical
// mismatch, 2 invalid input or a resource cap.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// argv adapter around cli_run for main().
int cli_main(int argc, char** argv);

}  // namespace dforms
