#include <iostream>

#include "CLI11.hpp"

#include "runner.hpp"

int main(int argc, char** argv) {
    using namespace polsim::runner;
    CLI::App app{"polsim: batch runner for the Rydberg polariton simulations"};
    app.usage("polsim <task> --config <file> [--set k=v ...] [--out dir]");

    std::string task;
    std::string config;
    std::vector<std::string> overrides;
    std::string out_dir;
    app.add_option("task", task, "spectrum, t0, propagate, cw, spinwave, fidelity or scan (optional if the config names one)");
    app.add_option("-c,--config", config, "JSON experiment config")->required();
    app.add_option("-s,--set", overrides, "override a config value, e.g. physical.OmegaS=1.2e8 (repeatable)");
    app.add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
    app.footer("Exit codes: 0 success, 1 i/o failure, 2 schema or configuration error, 3 numerical failure.\n"
               "POLSIM_THREADS caps the number of worker threads.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_schema;
    }

    RunRequest request;
    if (!task.empty()) request.task = task;
    request.config_path = config;
    request.overrides = overrides;
    if (!out_dir.empty()) request.output_dir = out_dir;
    return run(request, std::cerr);
}
