#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "qreservoir/experiment.hpp"
#include "qreservoir/version.hpp"

namespace {

void print_warnings(const qrc::ExperimentConfig& cfg) {
    for (const std::string& w : cfg.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum reservoir computing experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int threads = 0;
    CLI::App* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--out", out_dir, "output directory for artifacts (default: out)");
    run->add_option("--threads", threads, "trajectory worker threads (0 = hardware)");

    std::string dump_config_path;
    int steps = 3;
    CLI::App* dump = app.add_subcommand("dump-circuit", "print the circuit a config builds");
    dump->add_option("config", dump_config_path, "experiment config file")->required();
    dump->add_option("--steps", steps, "series prefix length to build (default: 3)");

    CLI::App* version = app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const qrc::ExperimentConfig cfg = qrc::load_config(config_path);
            print_warnings(cfg);
            const qrc::ExperimentResult result = qrc::run_experiment(cfg, out_dir, threads);
            std::printf("%s", result.metrics_text.c_str());
            std::printf("artifacts written to %s\n", out_dir.c_str());
        } else if (dump->parsed()) {
            const qrc::ExperimentConfig cfg = qrc::load_config(dump_config_path);
            print_warnings(cfg);
            std::printf("%s", qrc::dump_circuit(cfg, steps).c_str());
        } else if (version->parsed()) {
            std::printf("qrc %s\n", qrc::kVersion);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
