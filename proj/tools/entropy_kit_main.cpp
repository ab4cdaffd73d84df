#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entropykit/commands.hpp"

using entropykit::cli::CommonArgs;

int main(int argc, char** argv) {
    CLI::App app{"entropy-kit: information-theoretic feature extraction for time series"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config;
        std::uint64_t seed = 0;
        bool seed_set = false;
        std::string out;
        bool out_set = false;
    };

    std::map<std::string, SubArgs> sub_args;
    std::map<std::string, int (*)(const CommonArgs&)> handlers = {
        {"extract", &entropykit::cli::run_extract}, {"select", &entropykit::cli::run_select},
        {"eval", &entropykit::cli::run_eval},       {"neep", &entropykit::cli::run_neep},
        {"synth", &entropykit::cli::run_synth},
    };
    std::map<std::string, std::string> descriptions = {
        {"extract", "compute entropy features from an event or signal CSV"},
        {"select", "rank features by mutual information and de-duplicate by correlation"},
        {"eval", "repeated-holdout evaluation of a classifier on a feature CSV"},
        {"neep", "train the neural entropy-production estimator on a trajectory"},
        {"synth", "generate seeded synthetic corpora"},
    };

    for (auto& [name, handler] : handlers) {
        CLI::App* sub = app.add_subcommand(name, descriptions[name]);
        SubArgs& sa = sub_args[name];
        sub->add_option("--config", sa.config, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", sa.seed, "seed override")->each([&sa](const std::string&) {
            sa.seed_set = true;
        });
        sub->add_option("--out", sa.out, "output directory override")
            ->each([&sa](const std::string&) { sa.out_set = true; });
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& [name, handler] : handlers) {
        if (!app.get_subcommand(name)->parsed()) continue;
        const SubArgs& sa = sub_args[name];
        CommonArgs args;
        args.config_path = sa.config;
        if (sa.seed_set) args.seed = sa.seed;
        if (sa.out_set) args.out_dir = sa.out;
        try {
            return handler(args);
        } catch (const entropykit::cli::CliError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return e.code;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return entropykit::cli::exit_invariant;
        }
    }
    return entropykit::cli::exit_usage;
}
