#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace usage_synth {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,        // bad flags, unreadable file, invalid config
    kExitFailed = 2,       // hard criterion failed, seed mismatch, seed unusable
    kExitFatalParse = 3,   // dataset could not be parsed at all
    kExitEndpoint = 4,     // chat endpoint unreachable or returned an error
};

// Entry point behind the usage-synth binary. Subcommands: check,
// generate-baseline, prompt, run, histogram, self-prompt.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Same, with args excluding the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace usage_synth
