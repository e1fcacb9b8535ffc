#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "config.hpp"
#include "scenarios.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string output_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
};

int run(nccli::Scenario scenario, const CommonOpts& opts) {
    nccli::RunConfig cfg;
    try {
        cfg = nccli::load_config_file(opts.config_path);
    } catch (const std::ios_base::failure& e) {
        std::cerr << e.what() << "\n";
        return nccli::kExitIo;
    } catch (const nccli::ParseError& e) {
        std::cerr << e.what() << "\n";
        return nccli::kExitConfig;
    } catch (const nccli::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return nccli::kExitConfig;
    }
    if (cfg.scenario != scenario) {
        std::cerr << "config declares scenario '" << nccli::scenario_name(cfg.scenario)
                  << "' but the '" << nccli::scenario_name(scenario)
                  << "' subcommand was invoked\n";
        return nccli::kExitConfig;
    }
    if (!opts.output_override.empty()) cfg.output = opts.output_override;
    if (opts.seed_set) cfg.seed = opts.seed_override;
    return nccli::run_scenario(cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ncmaxwell: lattice canonical dynamics and constraint-algebra checks for "
                 "theta-deformed Maxwell theory"};
    app.require_subcommand(1);

    const struct {
        nccli::Scenario scenario;
        const char* name;
        const char* desc;
    } subs[] = {
        {nccli::Scenario::Simulate, "simulate", "evolve a field state and write diagnostics CSV"},
        {nccli::Scenario::LegendreCheck, "legendre-check",
         "momentum round-trip residual over a theta ladder"},
        {nccli::Scenario::BracketAudit, "bracket-audit",
         "constraint-algebra and Dirac-bracket audit (JSON report)"},
        {nccli::Scenario::Dispersion, "dispersion",
         "fit the propagation frequency of a small plane-wave probe"},
    };

    std::array<CommonOpts, 4> opts;
    std::array<CLI::App*, 4> cmds{};
    for (int i = 0; i < 4; ++i) {
        CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].desc);
        sub->add_option("--config", opts[i].config_path, "config file (key = value lines)")
            ->required();
        sub->add_option("--output", opts[i].output_override, "override the output path");
        sub->add_option("--seed", opts[i].seed_override, "override the seed")
            ->each([&opts, i](const std::string&) { opts[i].seed_set = true; });
        cmds[i] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : nccli::kExitConfig;
    }

    for (int i = 0; i < 4; ++i)
        if (cmds[i]->parsed()) return run(subs[i].scenario, opts[i]);
    return nccli::kExitConfig;
}
