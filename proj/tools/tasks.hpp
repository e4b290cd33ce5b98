#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace polsim::runner {

// One output file. suffix is appended to "<task>_<timestamp>"; the main CSV
// has suffix ".csv".
struct Artifact {
    std::string suffix;
    std::string body;
};

struct TaskOutput {
    std::vector<Artifact> artifacts;
    json results = json::object();
    std::vector<std::string> warnings;
};

// Runs the configured task. Library errors propagate unchanged.
TaskOutput execute(const ExperimentConfig& config);

// Derived scales and the dimensionless medium, for the manifest.
json describe_scales(const ExperimentConfig& config);

// "%.17g"; non-finite values print as nan / inf / -inf.
std::string format_number(double value);

}  // namespace polsim::runner
