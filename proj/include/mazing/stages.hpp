#pragma once
// Study stages behind the CLI subcommands. Each stage reads its upstream
// artifacts from the output directory (verified against the manifest), writes
// its own artifacts, and refreshes its manifest entry with content digests.
// Every byte written is a pure function of the configuration, so re-running a
// stage reproduces its outputs bit for bit.
//
// Layout under the output root:
//   manifest.json                  stage -> {relative path -> sha256}
//   study.json                     session index written by simulate
//   telemetry/<P>_s<k>.csv         one telemetry log per session
//   events/<P>_s<k>.jsonl          structured event log per session
//   traces/<P>_s<k>.csv            annotation trace per session
//   channels/<P>_s<k>/<name>.csv   modality channels (synthesized or ingested)
//   dataset.csv                    aligned windowed dataset
//   pairs/pairs_all_{mm,rr}.csv    pairwise preference files, both processings
//   correlate/correlations.{csv,txt}
//   train/report_<set>_<combo>.csv, train/grid_<set>_<combo>.csv,
//   train/summaries.jsonl
//   report/study_report.md

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mazing/config.hpp"
#include "mazing/pipeline.hpp"

namespace mazing::stages {

struct StageContext {
    std::filesystem::path out;
    config::StudySettings settings;
    std::string config_digest;  // sha256 of the config file bytes; "" when defaulted
};

// Ordered key/value lines for the CLI to print.
using Notes = std::vector<std::pair<std::string, std::string>>;

Notes run_simulate(const StageContext& ctx);

struct TraceOptions {
    std::string ingest_traces;    // directory of external annotation traces
    std::string ingest_channels;  // directory of external channel files
};
Notes run_trace(const StageContext& ctx, const TraceOptions& opts = {});

Notes run_pipeline(const StageContext& ctx);
Notes run_correlate(const StageContext& ctx);

struct TrainSelection {
    std::optional<pipeline::FeatureSet> feature_set;      // unset = all three
    std::optional<pipeline::ProcessingCombo> processing;  // unset = all four
    bool grid = false;  // hyperparameter grid search instead of the configured hp
};
Notes run_train(const StageContext& ctx, const TrainSelection& sel = {});

Notes run_report(const StageContext& ctx);

// Relative artifact path conventions shared by the stages and their tests.
std::string session_tag(const std::string& participant, int session);  // "P01_s1"

}  // namespace mazing::stages
