#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mlvedit/experiment.hpp"
#include "mlvedit/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Segmented flow editing over latent sequences: blended "
                 "overlaps, anchored attention, splice and whole-sequence "
                 "baselines"};
    app.set_version_flag("--version", std::string(mlv::kToolVersion));

    std::string config_path;
    std::string mode;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool trace = false;

    app.add_option("--config", config_path, "run configuration file (key = value)");
    app.add_option("--mode", mode, "mlv | naive | wan (overrides the config)");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--seed", seed, "root seed (overrides the config)");
    app.add_flag("--trace", trace, "also write per-step trace.csv");

    auto* compare =
        app.add_subcommand("compare", "diff metric summaries of two run directories");
    std::string dir_a;
    std::string dir_b;
    compare->add_option("dir_a", dir_a, "first run directory")->required();
    compare->add_option("dir_b", dir_b, "second run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed()) {
            mlv::compare_runs(dir_a, dir_b, std::cout);
            return 0;
        }
        if (config_path.empty()) {
            std::cerr << "error: --config is required (or use the compare "
                         "subcommand)\n";
            return 2;
        }
        mlv::RunConfig config = mlv::parse_config(config_path);
        if (app.count("--mode") > 0) config.mode = mlv::parse_mode(mode);
        if (app.count("--seed") > 0) config.edit.root_seed = seed;
        const mlv::RunArtifacts artifacts =
            mlv::run_experiment(config, out_dir, trace);
        std::cout << "run complete: " << artifacts.edited.string() << "\n";
        std::cout << "metrics: " << artifacts.metrics.string() << "\n";
        if (!artifacts.trace.empty()) {
            std::cout << "trace: " << artifacts.trace.string() << "\n";
        }
        return 0;
    } catch (const mlv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
