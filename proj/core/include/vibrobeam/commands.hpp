#pragma once

#include "vibrobeam/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vibrobeam {

enum class Command { eigen, simulate, sweep, spectrum };

std::optional<Command> parse_command(std::string_view name);
const char* to_string(Command cmd) noexcept;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 1;
inline constexpr int runtime_error = 2;
inline constexpr int partial_sweep = 3;
} // namespace exit_code

struct CommandResult {
    int exit_code = exit_code::ok;
    std::vector<std::string> files; // relative to cfg.output_dir, manifest last
};

// Runs one pipeline stage and writes its artifacts plus manifest.json into
// cfg.output_dir:
//   eigen    -> eigen.csv
//   simulate -> timeseries.csv, timeseries.svg
//   sweep    -> sweep.csv, sweep.svg
//   spectrum -> spectrum.csv, spectrum.svg
// `config_text` is the raw configuration the run was built from; its SHA-256
// goes into the manifest. Human-readable progress goes to `out`, warnings to
// `err`. Numerical and I/O failures are reported through the exit code.
CommandResult run_subcommand(Command cmd, const RunConfig& cfg, std::string_view config_text,
                             std::ostream& out, std::ostream& err);

} // namespace vibrobeam
