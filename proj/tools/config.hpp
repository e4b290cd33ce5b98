#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "polsim/core_model.hpp"
#include "polsim/polariton_spectrum.hpp"

namespace polsim::runner {

using json = nlohmann::json;

enum class Task { spectrum, t0, propagate, cw, spinwave, fidelity, scan };

const char* task_name(Task task);
std::optional<Task> parse_task(const std::string& name);

// Rejected configuration: malformed JSON, unknown or missing keys, wrong
// types, or an inconsistent command line. line is 0 when unknown.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string field, std::string message, int line = 0, int column = 0);
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string field_;
    int line_;
    int column_;
};

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    std::vector<double> values() const;
};

struct PulseParams {
    std::vector<double> durations;  // s, FWHM of the intensity
    int points = 241;
    double span_sigmas = 6.0;
};

struct ExperimentConfig {
    Task task = Task::cw;
    PhysicalConfig physical;
    bool allow_oversized_blockade = false;
    std::string output_dir = "polsim_out";

    // spectrum
    Regime regime = Regime::free;
    Grid k_labs{-2.0, 2.0, 401};
    double shift = default_finite_shift;
    double fit_window = 0.01;

    // t0, propagate (omega in rad/s)
    std::optional<Grid> omega;
    std::optional<double> field_omega;
    std::optional<PulseParams> pulse;

    // cw, fidelity
    std::vector<double> d_b_values;
    bool bulk = false;

    // spinwave, fidelity
    int samples = 256;
    std::optional<double> spin_d_b;

    // scan
    std::string scan_parameter;
    std::vector<double> scan_values;

    // Full configuration with every default filled in.
    json resolved;
};

// Parses config text, applies dotted key=value overrides and validates the
// result against the schema of the selected task. cli_task, when given,
// must agree with the "task" key if that is present.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                              const std::optional<std::string>& cli_task);

}  // namespace polsim::runner
