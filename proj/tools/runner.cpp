#include "runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polsim/errors.hpp"
#include "polsim/parallel.hpp"

namespace polsim::runner {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path.string(), "cannot read config file");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// First stem <task>_<stamp>[-n] whose main artifact does not exist yet.
std::string unique_stem(const fs::path& dir, const std::string& base, const std::vector<Artifact>& artifacts) {
    for (int n = 1;; ++n) {
        const std::string stem = n == 1 ? base : base + "-" + std::to_string(n);
        bool taken = false;
        for (const auto& a : artifacts) taken = taken || fs::exists(dir / (stem + a.suffix));
        if (!taken) return stem;
    }
}

}  // namespace

std::string utc_timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const std::time_t t = system_clock::to_time_t(now);
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

void write_atomically(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<fs::path> temps, placed;
    auto cleanup = [&] {
        std::error_code ignore;
        for (const auto& p : temps) fs::remove(p, ignore);
        for (const auto& p : placed) fs::remove(p, ignore);
    };
    for (const auto& [name, body] : files) {
        const fs::path tmp = dir / ("." + name + ".tmp");
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << body;
        out.close();
        if (!out) {
            cleanup();
            throw IoError("cannot write " + tmp.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        const fs::path target = dir / files[i].first;
        fs::rename(temps[i], target, ec);
        if (ec) {
            cleanup();
            throw IoError("cannot rename into " + target.string() + ": " + ec.message());
        }
        placed.push_back(target);
    }
}

int run(const RunRequest& request, std::ostream& log) {
    try {
        const std::string text = read_file(request.config_path);
        ExperimentConfig cfg = parse_config(text, request.overrides, request.task);
        if (request.output_dir) {
            cfg.output_dir = request.output_dir->string();
            cfg.resolved["output_dir"] = cfg.output_dir;
        }
        const json scales = describe_scales(cfg);
        const TaskOutput out = execute(cfg);

        const fs::path dir(cfg.output_dir);
        const std::string stamp = request.timestamp.value_or(utc_timestamp());
        const std::string stem = unique_stem(dir, std::string(task_name(cfg.task)) + "_" + stamp, out.artifacts);
        std::vector<std::pair<std::string, std::string>> files;
        json names = json::array();
        for (const auto& a : out.artifacts) {
            files.emplace_back(stem + a.suffix, a.body);
            names.push_back(stem + a.suffix);
        }
        const json manifest = {
            {"tool", "polsim"},
            {"task", task_name(cfg.task)},
            {"timestamp", stamp},
            {"config_file", request.config_path.string()},
            {"overrides", request.overrides},
            {"config", cfg.resolved},
            {"derived_scales", scales},
            {"results", out.results},
            {"warnings", out.warnings},
            {"artifacts", names},
            {"threads", worker_count()},
        };
        files.emplace_back("manifest.json", manifest.dump(2) + "\n");
        write_atomically(dir, files);
        for (const auto& w : out.warnings) log << "polsim: warning: " << w << '\n';
        for (const auto& n : names) log << (dir / n.get<std::string>()).string() << '\n';
        return exit_ok;
    } catch (const SchemaError& e) {
        log << "polsim: schema error: " << e.what() << '\n';
        return exit_schema;
    } catch (const BlockadeExceedsMedium& e) {
        log << "polsim: configuration error: " << e.what() << " (set allow_oversized_blockade to override)\n";
        return exit_schema;
    } catch (const ConfigError& e) {
        log << "polsim: configuration error: " << e.what() << '\n';
        return exit_schema;
    } catch (const IoError& e) {
        log << "polsim: i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const polsim::Error& e) {
        log << "polsim: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        log << "polsim: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

}  // namespace polsim::runner
