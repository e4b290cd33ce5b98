#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "polsim/errors.hpp"

namespace polsim::runner {

namespace {

constexpr const char* task_names[] = {"spectrum", "t0", "propagate", "cw", "spinwave", "fidelity", "scan"};

// Physical keys that a scan may vary. d_b rescales G.
const std::set<std::string> scan_parameters = {"G", "d_b", "Omega", "OmegaS", "gamma", "phi", "C6", "L", "x_gate"};

std::pair<int, int> line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

// Shared state for the schema walk: the source text (for line lookups) and
// the paths coming from --set, which have no line.
struct Source {
    const std::string& text;
    std::set<std::string> overridden;

    int line_of(const std::string& path) const {
        if (overridden.count(path)) return 0;
        const std::string key = path.substr(path.rfind('.') + 1);
        const std::string quoted = "\"" + key + "\"";
        const std::size_t first = text.find(quoted);
        if (first == std::string::npos || text.find(quoted, first + 1) != std::string::npos) return 0;
        return line_of_offset(text, first).first;
    }

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        throw SchemaError(path, message, line_of(path));
    }
};

// One JSON object of the schema. Every accessor records the effective value
// in resolved; done() rejects keys nobody asked for.
class Fields {
public:
    Fields(const json& node, std::string path, const Source& source)
        : node_(node), path_(std::move(path)), source_(source) {
        if (!node_.is_object()) source_.fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const json* v = find(key, fallback.has_value());
        double out = fallback.value_or(0.0);
        if (v) {
            if (!v->is_number()) source_.fail(path(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) source_.fail(path(key), "expected a finite number");
        }
        resolved[key] = out;
        return out;
    }

    double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const double v = number(key, fallback);
        if (!(v > 0.0)) source_.fail(path(key), "must be positive");
        return v;
    }

    int integer(const std::string& key, std::optional<int> fallback, int minimum) {
        const json* v = find(key, fallback.has_value());
        int out = fallback.value_or(0);
        if (v) {
            if (!v->is_number_integer()) source_.fail(path(key), "expected an integer");
            const long long raw = v->get<long long>();
            if (raw < minimum || raw > 1000000) {
                source_.fail(path(key), "must lie in [" + std::to_string(minimum) + ", 1000000]");
            }
            out = static_cast<int>(raw);
        }
        resolved[key] = out;
        return out;
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = find(key, true);
        bool out = fallback;
        if (v) {
            if (!v->is_boolean()) source_.fail(path(key), "expected true or false");
            out = v->get<bool>();
        }
        resolved[key] = out;
        return out;
    }

    std::string text(const std::string& key, std::optional<std::string> fallback,
                     const std::vector<std::string>& allowed = {}) {
        const json* v = find(key, fallback.has_value());
        std::string out = fallback.value_or("");
        if (v) {
            if (!v->is_string()) source_.fail(path(key), "expected a string");
            out = v->get<std::string>();
        }
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), out) == allowed.end()) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            source_.fail(path(key), "must be one of: " + list);
        }
        resolved[key] = out;
        return out;
    }

    std::vector<double> numbers(const std::string& key) {
        const json* v = find(key, false);
        if (!v->is_array() || v->empty()) source_.fail(path(key), "expected a non-empty array of numbers");
        std::vector<double> out;
        for (const auto& e : *v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                source_.fail(path(key), "expected a non-empty array of numbers");
            }
            out.push_back(e.get<double>());
        }
        resolved[key] = out;
        return out;
    }

    Fields child(const std::string& key) {
        const json* v = find(key, false);
        used_.insert(key);
        return Fields(*v, path(key), source_);
    }

    void adopt(const std::string& key, const Fields& child) { resolved[key] = child.resolved; }

    void done() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!used_.count(it.key())) source_.fail(path(it.key()), "unknown key");
        }
    }

    json resolved = json::object();

private:
    const json* find(const std::string& key, bool optional) {
        used_.insert(key);
        if (!node_.contains(key)) {
            if (!optional) source_.fail(path(key), "required key is missing");
            return nullptr;
        }
        return &node_.at(key);
    }

    const json& node_;
    std::string path_;
    const Source& source_;
    std::set<std::string> used_;
};

void exclusive(const Fields& f, const std::string& a, const std::string& b, const Source& source, bool required) {
    if (f.has(a) && f.has(b)) source.fail(f.path(b), "conflicts with " + f.path(a));
    if (required && !f.has(a) && !f.has(b)) source.fail(f.path(a), "required key is missing (or " + b + ")");
}

// Physical block in SI units. G may be replaced by d_b, and L / x_gate by
// multiples of the blockade radius.
PhysicalConfig read_physical(Fields& f, const Source& source) {
    exclusive(f, "G", "d_b", source, true);
    exclusive(f, "L", "L_over_zb", source, true);
    exclusive(f, "x_gate", "x_gate_over_zb", source, false);
    PhysicalConfig p;
    p.Omega = f.positive("Omega");
    p.OmegaS = f.positive("OmegaS");
    p.gamma = f.positive("gamma");
    p.C6 = f.positive("C6");
    p.c = f.positive("c", p.c);
    p.phi = f.number("phi", 0.0);
    p.G = 1.0;
    p.L = 1.0;
    const double z_b = derive_scales(p, SizeCheck::allow_oversized).z_b;
    if (f.has("G")) {
        p.G = f.positive("G");
    } else {
        p = with_blockade_depth(p, f.positive("d_b"));
        f.resolved.erase("d_b");
    }
    p.L = f.has("L") ? f.positive("L") : f.positive("L_over_zb") * z_b;
    f.resolved.erase("L_over_zb");
    if (f.has("x_gate")) {
        p.x_gate = f.number("x_gate");
    } else if (f.has("x_gate_over_zb")) {
        p.x_gate = f.number("x_gate_over_zb") * z_b;
        f.resolved.erase("x_gate_over_zb");
    } else {
        p.x_gate = 0.5 * p.L;
    }
    f.resolved["G"] = p.G;
    f.resolved["L"] = p.L;
    f.resolved["x_gate"] = p.x_gate;
    try {
        validate(p);
    } catch (const ConfigError& e) {
        source.fail(f.path("<physical>"), e.what());
    }
    return p;
}

Grid read_grid(Fields& f, const std::string& prefix, const Source& source) {
    Grid g;
    g.lo = f.number(prefix + "_min");
    g.hi = f.number(prefix + "_max");
    g.points = f.integer(prefix + "_points", std::nullopt, 2);
    if (!(g.hi > g.lo)) source.fail(f.path(prefix + "_max"), "must exceed " + prefix + "_min");
    return g;
}

// d_b sweep: either an explicit list or a uniform range.
std::vector<double> read_sweep(Fields& f, const Source& source) {
    std::vector<double> values;
    if (f.has("d_b_values")) {
        for (const char* k : {"d_b_min", "d_b_max", "d_b_points"}) {
            if (f.has(k)) source.fail(f.path(k), "conflicts with " + f.path("d_b_values"));
        }
        values = f.numbers("d_b_values");
    } else {
        values = read_grid(f, "d_b", source).values();
    }
    for (double v : values) {
        if (!(v > 0.0)) source.fail(f.path("d_b_values"), "optical depths must be positive");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

void read_task_params(ExperimentConfig& cfg, Fields& f, const Source& source) {
    switch (cfg.task) {
        case Task::spectrum: {
            const std::string regime = f.text("regime", std::nullopt, {"free", "blockaded", "finite_shift"});
            cfg.regime = regime == "free" ? Regime::free : regime == "blockaded" ? Regime::blockaded
                                                                                 : Regime::finite_shift;
            cfg.k_labs.lo = f.number("k_labs_min", -2.0);
            cfg.k_labs.hi = f.number("k_labs_max", 2.0);
            cfg.k_labs.points = f.integer("k_points", 401, 3);
            if (!(cfg.k_labs.hi > cfg.k_labs.lo)) source.fail(f.path("k_labs_max"), "must exceed k_labs_min");
            cfg.shift = f.positive("shift", default_finite_shift);
            cfg.fit_window = f.positive("fit_window", 0.01);
            break;
        }
        case Task::t0:
            cfg.omega = read_grid(f, "omega", source);
            break;
        case Task::propagate: {
            if (!f.has("omega_min") && !f.has("pulse")) {
                source.fail(f.path("omega_min"), "required key is missing (or pulse)");
            }
            if (f.has("omega_min") || f.has("omega_max") || f.has("omega_points")) {
                cfg.omega = read_grid(f, "omega", source);
            }
            if (f.has("field_omega")) cfg.field_omega = f.number("field_omega");
            if (f.has("pulse")) {
                Fields p = f.child("pulse");
                PulseParams pulse;
                pulse.durations = p.numbers("durations");
                for (double d : pulse.durations) {
                    if (!(d > 0.0)) source.fail(p.path("durations"), "durations must be positive");
                }
                std::sort(pulse.durations.begin(), pulse.durations.end());
                pulse.points = p.integer("points", 241, 5);
                pulse.span_sigmas = p.positive("span_sigmas", 6.0);
                p.done();
                f.adopt("pulse", p);
                cfg.pulse = pulse;
            }
            break;
        }
        case Task::cw:
            cfg.d_b_values = read_sweep(f, source);
            cfg.bulk = f.text("mode", "finite", {"finite", "bulk"}) == "bulk";
            break;
        case Task::spinwave:
            cfg.samples = f.integer("samples", 256, 64);
            if (f.has("d_b")) cfg.spin_d_b = f.positive("d_b");
            break;
        case Task::fidelity:
            cfg.d_b_values = read_sweep(f, source);
            cfg.samples = f.integer("samples", 256, 0);
            if (cfg.samples > 0 && cfg.samples < 64) source.fail(f.path("samples"), "must be 0 or at least 64");
            break;
        case Task::scan:
            cfg.scan_parameter = f.text("parameter", std::nullopt,
                                        std::vector<std::string>(scan_parameters.begin(), scan_parameters.end()));
            cfg.scan_values = f.numbers("values");
            std::sort(cfg.scan_values.begin(), cfg.scan_values.end());
            break;
    }
}

void apply_override(json& root, const std::string& assignment, Source& source) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw SchemaError("--set " + assignment, "expected key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    json* node = &root;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw SchemaError("--set " + key, "empty path component");
        if (!node->is_object()) throw SchemaError("--set " + key, "path runs through a non-object value");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
    source.overridden.insert(key);
}

}  // namespace

const char* task_name(Task task) { return task_names[static_cast<int>(task)]; }

std::optional<Task> parse_task(const std::string& name) {
    for (int i = 0; i < 7; ++i) {
        if (name == task_names[i]) return static_cast<Task>(i);
    }
    return std::nullopt;
}

SchemaError::SchemaError(std::string field, std::string message, int line, int column)
    : std::runtime_error([&] {
          std::string where = line > 0 ? "line " + std::to_string(line) : "";
          if (line > 0 && column > 0) where += ", column " + std::to_string(column);
          if (!field.empty()) where += (where.empty() ? "" : ", ") + field;
          return where.empty() ? message : where + ": " + message;
      }()),
      field_(std::move(field)), line_(line), column_(column) {}

std::vector<double> Grid::values() const { return linspace(lo, hi, points); }

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                              const std::optional<std::string>& cli_task) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string what = e.what();
        const std::size_t cut = what.find("syntax error");
        throw SchemaError("", cut == std::string::npos ? what : what.substr(cut), line, column);
    }
    Source source{text, {}};
    if (!root.is_object()) throw SchemaError("<root>", "expected an object", 1, 1);
    for (const auto& o : overrides) apply_override(root, o, source);

    Fields top(root, "", source);
    ExperimentConfig cfg;
    std::optional<std::string> task_key;
    if (top.has("task")) task_key = top.text("task", std::nullopt);
    if (!task_key && !cli_task) source.fail("task", "no task given on the command line or in the config");
    if (task_key && cli_task && *task_key != *cli_task) {
        source.fail("task", "config task '" + *task_key + "' does not match command line task '" + *cli_task + "'");
    }
    const std::string chosen = task_key ? *task_key : *cli_task;
    const auto task = parse_task(chosen);
    if (!task) source.fail("task", "unknown task '" + chosen + "'");
    cfg.task = *task;
    top.resolved["task"] = chosen;

    Fields physical = top.child("physical");
    cfg.physical = read_physical(physical, source);
    physical.done();
    top.adopt("physical", physical);

    json empty = json::object();
    Fields params = top.has("task_params") ? top.child("task_params") : Fields(empty, "task_params", source);
    read_task_params(cfg, params, source);
    params.done();
    top.adopt("task_params", params);

    cfg.output_dir = top.text("output_dir", cfg.output_dir);
    cfg.allow_oversized_blockade = top.boolean("allow_oversized_blockade", false);
    top.done();
    cfg.resolved = top.resolved;
    return cfg;
}

}  // namespace polsim::runner
