#pragma once

#include <map>
#include <string>
#include <vector>

#include "pseudoscore/config.hpp"

namespace pseudoscore::cli {

struct StageResult {
    std::string stage;
    double seconds = 0.0;
    bool cached = false;
};

struct RunReport {
    std::string report_json;   // canonical machine-readable report
    std::string report_text;   // human-readable rendering of the same data
    std::string ablation_tsv;  // flat metric table for spreadsheets
    std::vector<StageResult> stages;
};

/// Stage executor with a content-addressed cache under <output_dir>/cache.
/// Every stage writes into a ".partial" directory that is renamed into place
/// only on success, so an existing stage directory always holds a complete
/// artifact and a failed stage leaves its partial output clearly labeled.
///
/// With require_upstream set (subcommand mode), a stage reached as a
/// dependency must already be cached; a miss raises std::runtime_error
/// naming the subcommand to run first. Without it, missing stages are
/// computed on the fly.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg, bool require_upstream = false);

    // Each returns the directory holding the stage's outputs.
    std::string data_stage();
    std::string network_stage();
    std::string features_stage();
    std::string train_stage();
    std::string evaluate_stage();

    /// Renders report.json, report.txt and ablation.tsv into the output
    /// directory (atomically), plus timings.json for this invocation.
    RunReport report_stage();

    /// All stages in order.
    RunReport run();

    const StageKeys& keys() const { return keys_; }
    const std::vector<StageResult>& stages() const { return stages_; }

private:
    template <class Resolve, class Fill>
    std::string stage_entry(const char* stage, const std::string& key, const char* subcommand,
                            Resolve&& resolve_upstream, Fill&& fill);

    void fill_data(const std::string& dir);
    void fill_network(const std::string& dir, const std::string& data_dir);
    void fill_features(const std::string& dir, const std::string& data_dir,
                       const std::string& network_dir);
    void fill_train(const std::string& dir, const std::string& features_dir);
    void fill_evaluate(const std::string& dir, const std::string& features_dir);

    PipelineConfig cfg_;
    StageKeys keys_;
    int threads_ = 1;
    bool require_upstream_ = false;
    int depth_ = 0;  // >0 while resolving another stage's dependencies
    std::map<std::string, std::string> done_;
    std::vector<StageResult> stages_;
};

}  // namespace pseudoscore::cli
