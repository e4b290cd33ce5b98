#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tasks.hpp"

namespace polsim::runner {

enum ExitCode : int {
    exit_ok = 0,
    exit_io = 1,
    exit_schema = 2,
    exit_numerical = 3,
};

struct RunRequest {
    std::optional<std::string> task;
    std::filesystem::path config_path;
    std::vector<std::string> overrides;
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::string> timestamp;  // fixed stamp for reproducible file names
};

// UTC, millisecond resolution: 20261014T093012.345Z
std::string utc_timestamp();

// Writes every file to a hidden temporary in dir, then renames them into
// place. On failure the temporaries and anything already renamed are removed.
void write_atomically(const std::filesystem::path& dir,
                      const std::vector<std::pair<std::string, std::string>>& files);

// Parse, execute and write. Diagnostics go to log; the return value is one
// of ExitCode.
int run(const RunRequest& request, std::ostream& log);

}  // namespace polsim::runner
