#ifndef ENTROPYKIT_COMMANDS_HPP
#define ENTROPYKIT_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace entropykit::cli {

// Documented exit codes, one per error class.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,       // bad arguments, bad config, bad synth spec
    exit_input = 2,       // missing or unreadable input file
    exit_csv = 3,         // malformed CSV or unusable labels
    exit_feature = 4,     // unknown feature name
    exit_window = 5,      // window larger than the data
    exit_divergence = 6,  // training diverged
    exit_invariant = 7,   // internal invariant violation
};

struct CliError : std::runtime_error {
    int code;
    CliError(int exit_code, const std::string& message)
        : std::runtime_error(message), code(exit_code) {}
};

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed; // overrides [run] seed
    std::optional<std::string> out_dir; // overrides [run] out
};

int run_extract(const CommonArgs& args);
int run_select(const CommonArgs& args);
int run_eval(const CommonArgs& args);
int run_neep(const CommonArgs& args);
int run_synth(const CommonArgs& args);

// Thread-pool width: ENTROPY_KIT_THREADS, else [run] threads, else
// hardware concurrency.
std::size_t effective_threads(std::int64_t config_threads);

} // namespace entropykit::cli

#endif
