#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conleyifs/runner.hpp"

using namespace conleyifs;

namespace {

int resolve_threads(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("CONLEY_IFS_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"set-oriented computation of attractors, repellers, chain recurrence and "
                 "coding diagnostics for iterated function systems"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir;
    uint64_t seed = 0;
    bool seed_set = false, out_set = false;
    int threads = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario file");
    run_cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory")->each([&](const std::string&) {
        out_set = true;
    });
    run_cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    run_cmd->add_option("--threads", threads, "worker threads (env CONLEY_IFS_THREADS)");

    CLI::App* presets_cmd = app.add_subcommand("presets", "list bundled presets");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run acceptance assertions for a scenario");
    verify_cmd->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    verify_cmd->add_option("--threads", threads, "worker threads (env CONLEY_IFS_THREADS)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets_cmd->parsed()) {
            for (const auto& p : list_presets())
                std::cout << p.name << "\n    " << p.summary << "\n";
            return 0;
        }
        Scenario sc = load_scenario(scenario_path);
        if (out_set) sc.out_dir = out_dir;
        if (seed_set) sc.seed = seed;
        for (const auto& n : sc.notes) std::cout << "note: " << n << "\n";
        for (const auto& w : sc.warnings) std::cout << "warning: " << w << "\n";

        if (run_cmd->parsed()) {
            RunReport rep = run(sc, resolve_threads(threads));
            for (const auto& t : rep.tasks)
                std::cout << (t.ok ? "[ ok ] " : "[fail] ") << t.task << ": " << t.message
                          << "\n";
            std::cout << "outputs in " << rep.out_dir << "\n";
            return rep.ok ? 0 : 1;
        }
        // verify
        auto checks = verify_scenario(sc, resolve_threads(threads));
        bool all = true;
        for (const auto& c : checks) {
            std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
            all = all && c.pass;
        }
        std::cout << (all ? "verification passed" : "verification FAILED") << "\n";
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
