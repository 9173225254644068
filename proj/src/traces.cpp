#include "mazing/traces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mazing/csv.hpp"

namespace mazing::traces {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Zero-order hold: the frame value in force at time s.
double hold_at(const std::vector<sim::TelemetryFrame>& frames, int column, double s) {
    auto it = std::upper_bound(frames.begin(), frames.end(), s,
                               [](double t, const sim::TelemetryFrame& f) { return t < f.t; });
    if (it == frames.begin()) return frames.front().v[column];
    return std::prev(it)->v[column];
}

}  // namespace

AnnotationTrace synthesize_trace(const std::vector<sim::TelemetryFrame>& telemetry,
                                 const AnnotatorModel& model, Rng& rng) {
    if (model.lag < 0) throw ConfigError("annotator lag must be non-negative");
    if (model.noise_sd < 0) throw ConfigError("annotator noise_sd must be non-negative");
    if (model.smoothing < 0) throw ConfigError("annotator smoothing must be non-negative");

    // Resolve cue names once; std::map iteration keeps the order deterministic.
    const auto& names = sim::feature_names();
    std::vector<std::pair<int, double>> cues;
    cues.reserve(model.cue_weights.size());
    for (const auto& [name, weight] : model.cue_weights) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw DataError("unknown cue: " + name);
        cues.emplace_back(static_cast<int>(it - names.begin()), weight);
    }

    AnnotationTrace trace;
    if (telemetry.empty()) return trace;

    const double dt = 1.0 / kTraceRate;
    const double alpha = model.smoothing > 0 ? 1.0 - std::exp(-dt / model.smoothing) : 1.0;
    const double t_end = telemetry.back().t + 1e-9;

    double ema = 0.0;
    for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) / kTraceRate;
        if (t > t_end) break;
        const double s = std::max(0.0, t - model.lag);
        double x = 0.0;
        for (const auto& [column, weight] : cues) x += weight * hold_at(telemetry, column, s);
        ema = (k == 0) ? x : ema + alpha * (x - ema);
        // The noise draw happens even at sd == 0 so that toggling noise does
        // not reshuffle every other random stream derived from the same seed.
        const double value = ema + model.drift * t + rng.gaussian(0.0, model.noise_sd);
        trace.samples.push_back({t, value});
    }
    return trace;
}

const std::vector<std::string>& canonical_channel_names() {
    static const std::vector<std::string> kNames = {
        // Basic emotions.
        "Contempt", "Sadness", "Fear", "Surprise", "Joy", "Anger", "Disgust",
        // Affective dimensions.
        "Valence", "Attention", "Engagement",
        // Facial action units.
        "ChinRaise", "BrowRaise", "Smirk", "InnerBrowRaise", "LipSuck", "NoseWrinkle",
        "EyeClosure", "LipPucker", "UpperLipRaise", "LipPress", "BrowFurrow", "Smile",
        "MouthOpen"};
    return kNames;
}

std::vector<ModalityChannel> synthesize_noise_channels(const std::vector<std::string>& names,
                                                       double duration, Rng& rng,
                                                       double gap_rate) {
    if (duration <= 0) throw ConfigError("channel duration must be positive");
    if (gap_rate < 0) throw ConfigError("channel gap_rate must be non-negative");

    const double dt = 1.0 / kTraceRate;
    const double kEmaAlpha = 0.1;

    std::vector<ModalityChannel> channels;
    channels.reserve(names.size());
    for (const auto& name : names) {
        ModalityChannel ch;
        ch.name = name;
        double ema = 0.0;
        double gap_end = -1.0;
        for (long k = 0;; ++k) {
            const double t = static_cast<double>(k) / kTraceRate;
            if (t >= duration - 1e-9) break;
            // The value stream always advances; gaps only hide samples, as a
            // dropped sensor still measures a continuous signal underneath.
            const double x = rng.uniform(0.0, 100.0);
            ema = (k == 0) ? x : ema + kEmaAlpha * (x - ema);
            if (t < gap_end - 1e-12) continue;  // inside a gap
            if (gap_rate > 0 && rng.uniform() < gap_rate * dt) {
                // Gap length 0.5-1.5 s, quantized to whole sample steps: a
                // finer resolution hides the same samples but would leave the
                // recorded interval off the grid that keeps the millisecond
                // serialization bit-exact.
                const long steps = 5 + static_cast<long>(rng.uniform_int(11));
                gap_end = std::min(static_cast<double>(k + steps) / kTraceRate, duration);
                ch.gaps.push_back({t, gap_end});
                continue;  // the sample that starts the gap is lost too
            }
            ch.samples.push_back({t, ema});
        }
        channels.push_back(std::move(ch));
    }
    return channels;
}

namespace {

void write_samples(std::ostream& os, const std::vector<TraceSample>& samples) {
    os << "t_ms,value\n";
    for (const auto& s : samples)
        os << fmt_double_shortest(s.t * 1000.0) << ',' << fmt_double_shortest(s.value) << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& os, const AnnotationTrace& trace) {
    write_samples(os, trace.samples);
}

void write_channel_csv(std::ostream& os, const ModalityChannel& channel) {
    os << "# name: " << channel.name << '\n';
    for (const auto& g : channel.gaps)
        os << "# gap: " << fmt_double_shortest(g.t_begin * 1000.0) << ' '
           << fmt_double_shortest(g.t_end * 1000.0) << '\n';
    write_samples(os, channel.samples);
}

namespace {

struct ParsedBody {
    std::string name;
    std::vector<TraceSample> samples;
    std::vector<GapInterval> gaps;
};

[[noreturn]] void fail(const char* tag, int line, const std::string& detail) {
    throw DataError(std::string(tag) + ": line " + std::to_string(line) + ": " + detail);
}

// Shared reader for trace and channel files. `bounded` enables the [0, 100]
// value check used by modality channels.
ParsedBody parse_body(std::istream& is, bool bounded, std::vector<std::string>* warnings) {
    ParsedBody body;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line[0] == '#') {
            const std::string comment = trim(line.substr(1));
            if (comment.rfind("name:", 0) == 0) {
                body.name = trim(comment.substr(5));
            } else if (comment.rfind("gap:", 0) == 0) {
                std::istringstream ss(comment.substr(4));
                double a_ms = 0, b_ms = 0;
                std::string extra;
                if (!(ss >> a_ms >> b_ms) || (ss >> extra))
                    fail("MALFORMED_ROW", line_no, "expected '# gap: <begin_ms> <end_ms>'");
                GapInterval g{a_ms / 1000.0, b_ms / 1000.0};
                if (!(g.t_end > g.t_begin))
                    fail("MALFORMED_ROW", line_no, "gap end must exceed gap begin");
                if (!body.gaps.empty() && g.t_begin < body.gaps.back().t_end - 1e-12)
                    fail("NON_MONOTONIC_TIME", line_no,
                         "gap intervals must be sorted and non-overlapping");
                body.gaps.push_back(g);
            }
            continue;  // other comments are ignored
        }
        if (!header_seen) {
            if (line != "t_ms,value")
                fail("MALFORMED_ROW", line_no, "expected header 't_ms,value', got '" + line + "'");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> fields = split_csv(line);
        double t_ms = 0, value = 0;
        if (fields.size() != 2 || !parse_double(fields[0], t_ms) ||
            !parse_double(fields[1], value))
            fail("MALFORMED_ROW", line_no, "expected '<t_ms>,<value>', got '" + line + "'");
        if (!std::isfinite(t_ms)) fail("MALFORMED_ROW", line_no, "non-finite timestamp");
        const double t = t_ms / 1000.0;
        if (!body.samples.empty() && t <= body.samples.back().t)
            fail("NON_MONOTONIC_TIME", line_no,
                 "timestamp " + fields[0] + " does not increase");
        if (bounded) {
            if (!(value >= 0.0 && value <= 100.0))
                fail("OUT_OF_RANGE", line_no,
                     "value " + fields[1] + " outside [0, 100]");
        } else if (!std::isfinite(value)) {
            fail("MALFORMED_ROW", line_no, "non-finite value");
        }
        body.samples.push_back({t, value});
    }
    if (body.samples.empty() && warnings)
        warnings->push_back("file contains no samples");

    // Normalize to a zero-based clock. Samples and gaps share one time base,
    // and a gap may legitimately begin before the first surviving sample.
    double offset = 0.0;
    if (!body.samples.empty()) offset = body.samples.front().t;
    if (!body.gaps.empty()) offset = body.samples.empty()
                                         ? body.gaps.front().t_begin
                                         : std::min(offset, body.gaps.front().t_begin);
    if (offset != 0.0) {
        for (auto& s : body.samples) s.t -= offset;
        for (auto& g : body.gaps) {
            g.t_begin -= offset;
            g.t_end -= offset;
        }
    }
    return body;
}

}  // namespace

AnnotationTrace ingest_trace(std::istream& is, std::vector<std::string>* warnings) {
    ParsedBody body = parse_body(is, /*bounded=*/false, warnings);
    AnnotationTrace trace;
    trace.samples = std::move(body.samples);
    return trace;
}

ModalityChannel ingest_channel(std::istream& is, std::vector<std::string>* warnings) {
    ParsedBody body = parse_body(is, /*bounded=*/true, warnings);
    ModalityChannel ch;
    ch.name = std::move(body.name);
    ch.samples = std::move(body.samples);
    ch.gaps = std::move(body.gaps);
    return ch;
}

AnnotationTrace load_trace(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open trace file: " + path);
    return ingest_trace(is, warnings);
}

ModalityChannel load_channel(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open channel file: " + path);
    return ingest_channel(is, warnings);
}

}  // namespace mazing::traces
