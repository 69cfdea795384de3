#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pseudoscore/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    long long seed = -1;
    int threads = -1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config, "pipeline configuration file (json)");
    sub->add_option("--out", args.out, "output directory (overrides the config)");
    sub->add_option("--seed", args.seed, "seed override")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", args.threads, "worker thread count, 0 = hardware default")
        ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace pseudoscore;

    CLI::App app{"credit scoring over pseudo-social smartphone networks"};
    app.require_subcommand(1);

    CommonArgs args;
    int synth_users = 0;

    CLI::App* run = app.add_subcommand("run", "execute every stage and write the reports");
    CLI::App* synth = app.add_subcommand("synth", "generate the synthetic dataset (data stage)");
    CLI::App* build_net = app.add_subcommand("build-net", "build the bipartite and user networks");
    CLI::App* featurize = app.add_subcommand("featurize", "extract the feature matrix");
    CLI::App* train = app.add_subcommand("train", "fit the configured models on a holdout split");
    CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validated ablation over feature groups");
    CLI::App* report = app.add_subcommand("report", "render reports from the cached stages");
    for (CLI::App* sub : {run, synth, build_net, featurize, train, evaluate, report})
        add_common(sub, args);
    synth->add_option("--users", synth_users, "synthetic population size")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cli::PipelineConfig cfg;
        if (!args.config.empty()) {
            cfg = cli::load_config_file(args.config);
        } else if (synth->parsed()) {
            cfg.synth = data::SynthSpec{};  // bare `synth` runs without a config file
        } else {
            throw cli::ConfigError("--config is required");
        }
        if (!args.out.empty()) cfg.output_dir = args.out;
        if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
        if (args.threads >= 0) cfg.threads = args.threads;
        if (synth->parsed()) {
            if (!cfg.synth)
                throw cli::ConfigError("the synth subcommand needs data.source = \"synth\"");
            if (synth_users > 0) cfg.synth->user_count = synth_users;
        }

        cli::Pipeline pipeline(cfg, /*require_upstream=*/!run->parsed());
        if (run->parsed()) pipeline.run();
        else if (synth->parsed()) std::cout << pipeline.data_stage() << '\n';
        else if (build_net->parsed()) std::cout << pipeline.network_stage() << '\n';
        else if (featurize->parsed()) std::cout << pipeline.features_stage() << '\n';
        else if (train->parsed()) std::cout << pipeline.train_stage() << '\n';
        else if (evaluate->parsed()) std::cout << pipeline.evaluate_stage() << '\n';
        else if (report->parsed()) std::cout << pipeline.report_stage().report_text;
        return 0;
    } catch (const cli::ConfigError& e) {
        std::cerr << "[config] error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "[error] " << e.what() << '\n';
        return 2;
    }
}
