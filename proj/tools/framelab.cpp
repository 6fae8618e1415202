#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <framelab/framelab.hpp>

namespace {

framelab::Config build_config(const std::string& config_path,
                              const std::vector<std::string>& sets, long long seed,
                              long long grid, const std::string& window) {
    framelab::Config cfg;
    if (!config_path.empty()) cfg = framelab::load_config(config_path);
    for (const std::string& kv : sets) {
        auto eq = kv.find('=');
        framelab::require(eq != std::string::npos && eq > 0, "ConfigError",
                           "--set expects key=value, got \"" + kv + "\"");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) cfg.set("seed", std::to_string(seed));
    if (grid > 0) cfg.set("grid", std::to_string(grid));
    if (!window.empty()) cfg.set("window", window);
    return cfg;
}

void print_outcome(const framelab::PresetOutcome& outcome) {
    const framelab::Report& rep = outcome.report;
    std::printf("experiment: %s\n", rep.experiment.c_str());
    for (const framelab::CheckResult& c : rep.checks) {
        std::printf("  [%s] %-24s %s (value %s)\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                    c.criterion.c_str(), framelab::format_double(c.value).c_str());
    }
    for (const std::string& f : outcome.files) std::printf("  wrote %s\n", f.c_str());
    std::printf("  wall %.3f s\n", outcome.wall_seconds);
    std::printf("result: %s\n", rep.pass() ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on Fourier frames of compactly supported measures"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string window;
    long long seed = -1;
    long long grid = 0;
    std::vector<std::string> sets;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--seed", seed, "override the random seed");
        sub->add_option("--out", out_dir, "output directory (default: out)");
        sub->add_option("--grid", grid, "override the base grid size");
        sub->add_option("--window", window, "override the frequency window (W or a,b)");
        sub->add_option("--set", sets, "extra key=value overrides")->take_all();
    };

    std::vector<CLI::App*> preset_subs;
    for (const std::string& name : framelab::preset_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " preset");
        add_common(sub);
        preset_subs.push_back(sub);
    }
    CLI::App* run_sub = app.add_subcommand("run", "run a custom pipeline from a config file");
    add_common(run_sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        framelab::Config cfg = build_config(config_path, sets, seed, grid, window);
        framelab::PresetOutcome outcome;
        if (run_sub->parsed()) {
            outcome = framelab::run_pipeline(cfg, out_dir);
        } else {
            std::string name;
            for (std::size_t i = 0; i < preset_subs.size(); ++i) {
                if (preset_subs[i]->parsed()) name = framelab::preset_names()[i];
            }
            outcome = framelab::run_preset(name, cfg, out_dir);
        }
        print_outcome(outcome);
        return outcome.exit_code();
    } catch (const framelab::error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return std::string(e.code()) == "ConfigError" ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
