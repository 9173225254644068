#pragma once
// Continuous annotation traces and side-modality channels: synthesis of
// annotator traces from telemetry (a configurable stand-in for a human
// annotator watching the session), synthesis of uninformative bounded-noise
// channels, and strict ingestion of external trace/channel files.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mazing/common.hpp"
#include "mazing/rng.hpp"
#include "mazing/telemetry.hpp"

namespace mazing::traces {

inline constexpr double kTraceRate = 10.0;  // Hz of synthesized traces/channels

struct TraceSample {
    double t = 0;      // seconds since session start
    double value = 0;  // traces: unbounded; channels: [0, 100]
};

// Unbounded continuous annotation; only relative change carries meaning.
struct AnnotationTrace {
    std::string participant;
    int session = 0;
    std::vector<TraceSample> samples;  // strictly increasing t
};

struct GapInterval {
    double t_begin = 0, t_end = 0;  // [t_begin, t_end), seconds
};

// One side-modality signal (e.g. a facial-expression intensity), bounded to
// [0, 100], with explicit missing intervals.
struct ModalityChannel {
    std::string name;
    std::vector<TraceSample> samples;
    std::vector<GapInterval> gaps;  // sorted, non-overlapping
};

// The scripted annotator: a weighted sum of telemetry cues read `lag`
// seconds late, exponentially smoothed, plus linear drift and Gaussian noise.
struct AnnotatorModel {
    std::map<std::string, double> cue_weights;  // telemetry feature name -> weight
    double lag = 1.0;        // s; reaction latency
    double noise_sd = 0.0;   // value units
    double smoothing = 0.5;  // s; EMA time constant, 0 disables
    double drift = 0.0;      // value units per second
};

// Samples value(t) = ema(sum_i w_i * feature_i(t - lag)) + drift*t + noise at
// 10 Hz over the telemetry's duration; t - lag clamps to session start.
// Throws ConfigError on negative lag/noise/smoothing, DataError on a cue
// name that is not a telemetry feature.
AnnotationTrace synthesize_trace(const std::vector<sim::TelemetryFrame>& telemetry,
                                 const AnnotatorModel& model, Rng& rng);

// The 23 canonical facial-feature channel names (7 basic emotions, 3
// affective dimensions, 13 action units).
const std::vector<std::string>& canonical_channel_names();

// Smoothed bounded noise in [0, 100] per requested name, sampled at 10 Hz.
// gap_rate is the per-second probability of starting a gap; gap lengths draw
// uniformly from 0.5-1.5 s, samples inside gaps are removed and recorded.
std::vector<ModalityChannel> synthesize_noise_channels(const std::vector<std::string>& names,
                                                       double duration, Rng& rng,
                                                       double gap_rate = 0.0);

// File format: UTF-8 CSV body `t_ms,value` with that exact header; channel
// files carry `# name: <channel>` first and one `# gap: <ms> <ms>` comment
// line per missing interval. Numbers are shortest-round-trip decimals.
void write_trace_csv(std::ostream& os, const AnnotationTrace& trace);
void write_channel_csv(std::ostream& os, const ModalityChannel& channel);

// Strict parsers. Violations throw DataError whose message begins with
// MALFORMED_ROW / NON_MONOTONIC_TIME / OUT_OF_RANGE and names the line.
// Empty input is accepted as an empty trace/channel; if `warnings` is given
// a note is appended. Timestamps are normalized to start at zero.
AnnotationTrace ingest_trace(std::istream& is, std::vector<std::string>* warnings = nullptr);
ModalityChannel ingest_channel(std::istream& is, std::vector<std::string>* warnings = nullptr);

AnnotationTrace load_trace(const std::string& path, std::vector<std::string>* warnings = nullptr);
ModalityChannel load_channel(const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace mazing::traces
