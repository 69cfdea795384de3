#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pseudoscore/ablation.hpp"
#include "pseudoscore/dataset.hpp"
#include "pseudoscore/features.hpp"
#include "pseudoscore/graph.hpp"
#include "pseudoscore/metrics.hpp"
#include "pseudoscore/node2vec.hpp"
#include "pseudoscore/synth.hpp"

namespace pseudoscore::cli {

/// Invalid configuration input; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FilesConfig {
    data::DatasetPaths paths;
    data::LoadOptions options;
};

struct PipelineConfig {
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware default
    std::string output_dir = "out";

    // exactly one of the two data sources
    std::optional<FilesConfig> files;
    std::optional<data::SynthSpec> synth;

    int label_window_days = 60;
    std::optional<Date> label_as_of;  // data horizon when absent

    net::BipartiteOptions bipartite;
    net::ProjectionOptions projection;

    std::set<scoring::FeatureGroup> groups;  // enabled feature groups
    bool include_betweenness = true;
    scoring::InfluenceOptions influence;
    embed::Node2VecConfig node2vec;
    bool embed_bipartite = false;  // embed the bipartite instead of the user network

    std::vector<scoring::ModelKind> model_kinds;
    scoring::ModelConfigs models;

    int folds = 5;
    double train_fraction = 0.8;
    std::vector<std::set<scoring::FeatureGroup>> combinations;  // empty = defaults
    int bootstrap_rounds = 10000;
    int importance_repeats = 5;
    bool export_scores = false;

    eval::ProfitParams profit;
};

/// Strict parse: unknown keys anywhere are rejected, value ranges checked.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config_file(const std::string& path);

/// Canonical JSON echo of the configuration (sorted keys, defaults filled
/// in). Runtime-only knobs (threads, output directory) are left out so the
/// echo is stable across environments.
std::string canonical_config(const PipelineConfig& cfg);

/// Content keys for the cache directories, one per stage, each folding in
/// the upstream key. 16 hex digits. For file-sourced runs pass a digest of
/// the input files so edits to them invalidate every stage.
struct StageKeys {
    std::string data;
    std::string network;
    std::string features;
    std::string train;
    std::string evaluate;
};
StageKeys stage_keys(const PipelineConfig& cfg, const std::string& data_digest = "");

}  // namespace pseudoscore::cli
