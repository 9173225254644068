#pragma once
// Preprocessing pipeline: reaction-lag shift for annotation/modality streams,
// non-overlapping window features (mean and value range), alignment of
// telemetry + trace + channels into one dataset, and the pairwise preference
// transform that turns ordinal targets into labeled difference vectors.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mazing/stats.hpp"
#include "mazing/telemetry.hpp"
#include "mazing/traces.hpp"

namespace mazing::pipeline {

struct PipelineConfig {
    double w = 3.0;          // window length, seconds
    double l = 1.0;          // reaction lag, seconds
    double tie_epsilon = 0;  // |y_i - y_j| at or below this is a tie
};

// Uniform view over any sampled signal: telemetry column, annotation trace,
// or modality channel. Windows are drawn from [0, duration).
struct SampleSeries {
    std::vector<traces::TraceSample> samples;  // strictly increasing t
    std::vector<traces::GapInterval> gaps;     // sorted, non-overlapping
    double duration = 0;                       // seconds
};

SampleSeries telemetry_series(const std::vector<sim::TelemetryFrame>& frames, int column,
                              double duration);
SampleSeries trace_series(const traces::AnnotationTrace& trace, double duration);
SampleSeries channel_series(const traces::ModalityChannel& channel, double duration);

// Compensate annotator reaction latency: the sample at original time t + l is
// re-timed to t and the first l seconds of content are discarded. Gaps shift
// with their samples. Telemetry is never shifted, only traces and channels.
SampleSeries lag_shift(const SampleSeries& s, double l);

// Per-window mean and value range over [k*w, (k+1)*w) for
// k = 0 .. floor(duration/w)-1; the trailing partial window is discarded.
// A window is missing when it overlaps any gap or holds no samples.
struct WindowStat {
    double mu = 0;   // arithmetic mean of the window's samples
    double rng = 0;  // max - min within the window
    bool missing = false;
};
std::vector<WindowStat> windowize(const SampleSeries& s, double w);

// One session's input streams, borrowed from the caller.
struct SessionStreams {
    std::string participant;
    int session = 0;
    std::string condition;
    const std::vector<sim::TelemetryFrame>* telemetry = nullptr;
    const traces::AnnotationTrace* trace = nullptr;                // required
    const std::vector<traces::ModalityChannel>* channels = nullptr;  // optional
    double duration = 0;
};

struct WindowRow {
    std::string participant;
    int session = 0;
    std::string condition;
    long window = 0;          // aligned window index within the session
    std::vector<double> mu;   // per feature
    std::vector<double> rng;  // per feature
    double y_mu = 0, y_rng = 0;  // annotation target under both processings
};

struct WindowedDataset {
    std::vector<std::string> feature_names;   // telemetry features then channels
    std::vector<std::string> feature_groups;  // display group per feature
    std::vector<WindowRow> rows;
    long dropped_rows = 0;                         // rows removed for missing data
    std::map<std::string, long> dropped_reasons;   // reason -> count
};

// Windows every stream (traces/channels lag-shifted first), joins on window
// index across the indices present in all streams, and drops rows touched by
// a gap or an empty window. Sessions must agree on their channel name lists.
WindowedDataset build_dataset(const std::vector<SessionStreams>& sessions,
                              const PipelineConfig& cfg);

// CSV round trip. Columns: participant,session,condition,window, then the
// mu_<feature> block ending in mu_Annotation, then the matching rng_ block.
void write_dataset_csv(std::ostream& os, const WindowedDataset& ds);
WindowedDataset read_dataset_csv(std::istream& is);
WindowedDataset load_dataset_csv(const std::string& path);

// Column view consumed by the correlation report.
stats::FeatureMatrix to_feature_matrix(const WindowedDataset& ds);

// --- pairwise preference transform ------------------------------------------

enum class FeatureSet { GAME, FACIAL, ALL };
enum class Processing { MU, RNG };

// Input-feature processing and target processing, e.g. "mr" = mean features
// predicting range targets.
struct ProcessingCombo {
    Processing input = Processing::MU;
    Processing target = Processing::MU;
};

const char* feature_set_name(FeatureSet s);
FeatureSet parse_feature_set(const std::string& name);  // throws ConfigError
const char* processing_name(Processing p);
std::string combo_name(const ProcessingCombo& c);               // "mm","rr","rm","mr"
ProcessingCombo parse_combo(const std::string& name);           // throws ConfigError

// Indices into feature_names selected by a feature set.
std::vector<int> feature_subset(const WindowedDataset& ds, FeatureSet set);

struct PreferencePairs {
    std::vector<std::string> feature_names;  // of the difference vectors
    std::vector<std::vector<double>> diffs;  // one difference vector per label
    std::vector<int> labels;                 // +1 or -1
    std::string feature_set, processing, scope;
};

// Within each session, every unordered row pair whose targets differ by more
// than tie_epsilon emits both ordered difference vectors: (x_i - x_j, +1) and
// (x_j - x_i, -1) adjacent, with +1 meaning the first row ranks higher.
PreferencePairs pairwise_transform(const WindowedDataset& ds, FeatureSet set,
                                   const ProcessingCombo& combo, double tie_epsilon = 0);

// Line-delimited records: `#` metadata comments, a `label,<feature...>` CSV
// header, then one `<label>,<d_1>,...,<d_F>` line per comparison.
void write_pairs(std::ostream& os, const PreferencePairs& pairs);
PreferencePairs read_pairs(std::istream& is);
PreferencePairs load_pairs(const std::string& path);

}  // namespace mazing::pipeline
