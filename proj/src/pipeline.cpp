#include "mazing/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "mazing/csv.hpp"

namespace mazing::pipeline {

namespace {

void validate_config(const PipelineConfig& cfg) {
    if (!(cfg.w > 0)) throw ConfigError("window length w must be positive");
    if (cfg.l < 0) throw ConfigError("lag l must be non-negative");
    if (cfg.tie_epsilon < 0) throw ConfigError("tie_epsilon must be non-negative");
}

// Display group of a telemetry feature, by column index.
std::string telemetry_group(int column) {
    if (column <= sim::feat::kSearchTurns) return "agent internal state";
    if (column <= sim::feat::kAgentRotation) return "agent behaviour";
    if (column <= sim::feat::kBombOnCooldown) return "player behaviour";
    return "gameplay context";
}

}  // namespace

SampleSeries telemetry_series(const std::vector<sim::TelemetryFrame>& frames, int column,
                              double duration) {
    if (column < 0 || column >= sim::kFeatureCount)
        throw ConfigError("telemetry column out of range");
    SampleSeries s;
    s.duration = duration;
    s.samples.reserve(frames.size());
    for (const auto& f : frames) s.samples.push_back({f.t, f.v[column]});
    return s;
}

SampleSeries trace_series(const traces::AnnotationTrace& trace, double duration) {
    return {trace.samples, {}, duration};
}

SampleSeries channel_series(const traces::ModalityChannel& channel, double duration) {
    return {channel.samples, channel.gaps, duration};
}

SampleSeries lag_shift(const SampleSeries& s, double l) {
    if (l < 0) throw ConfigError("lag l must be non-negative");
    if (l == 0) return s;
    SampleSeries out;
    out.duration = s.duration - l;
    if (out.duration <= 0) {
        out.duration = 0;
        return out;  // stream shorter than the lag: nothing survives
    }
    for (const auto& smp : s.samples)
        if (smp.t >= l - 1e-9) out.samples.push_back({std::max(0.0, smp.t - l), smp.value});
    for (const auto& g : s.gaps) {
        traces::GapInterval shifted{std::max(0.0, g.t_begin - l),
                                    std::min(g.t_end - l, out.duration)};
        if (shifted.t_end > shifted.t_begin + 1e-12) out.gaps.push_back(shifted);
    }
    return out;
}

std::vector<WindowStat> windowize(const SampleSeries& s, double w) {
    if (!(w > 0)) throw ConfigError("window length w must be positive");
    const long count = static_cast<long>(std::floor(s.duration / w + 1e-9));
    std::vector<WindowStat> out(std::max<long>(count, 0));
    size_t i = 0, g = 0;
    for (long k = 0; k < count; ++k) {
        const double lo = k * w, hi = (k + 1) * w;
        while (i < s.samples.size() && s.samples[i].t < lo) ++i;
        long n = 0;
        double sum = 0, mn = 0, mx = 0;
        while (i < s.samples.size() && s.samples[i].t < hi) {
            const double v = s.samples[i].value;
            if (n == 0) {
                mn = mx = v;
            } else {
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            sum += v;
            ++n;
            ++i;
        }
        WindowStat& ws = out[k];
        if (n > 0) {
            ws.mu = sum / static_cast<double>(n);
            ws.rng = mx - mn;
        } else {
            ws.missing = true;
        }
        while (g < s.gaps.size() && s.gaps[g].t_end <= lo + 1e-9) ++g;
        if (g < s.gaps.size() && s.gaps[g].t_begin < hi - 1e-9 && s.gaps[g].t_end > lo + 1e-9)
            ws.missing = true;
    }
    return out;
}

WindowedDataset build_dataset(const std::vector<SessionStreams>& sessions,
                              const PipelineConfig& cfg) {
    validate_config(cfg);

    WindowedDataset ds;
    const auto& game_names = sim::feature_names();
    for (int c = 0; c < sim::kFeatureCount; ++c) {
        ds.feature_names.push_back(game_names[c]);
        ds.feature_groups.push_back(telemetry_group(c));
    }
    std::vector<std::string> channel_names;
    if (!sessions.empty() && sessions.front().channels)
        for (const auto& ch : *sessions.front().channels) channel_names.push_back(ch.name);
    for (const auto& name : channel_names) {
        ds.feature_names.push_back(name);
        ds.feature_groups.push_back("facial");
    }

    for (const auto& ss : sessions) {
        if (!ss.telemetry || !ss.trace)
            throw DataError("session " + ss.participant + "/" +
                            std::to_string(ss.session) + " is missing telemetry or trace");
        std::vector<std::string> names;
        if (ss.channels)
            for (const auto& ch : *ss.channels) names.push_back(ch.name);
        if (names != channel_names)
            throw DataError("session " + ss.participant + "/" + std::to_string(ss.session) +
                            " has a different channel list than the first session");

        // Telemetry keeps the session clock; annotation and channels are
        // shifted back by the reaction lag before windowing.
        std::vector<std::vector<WindowStat>> game(sim::kFeatureCount);
        for (int c = 0; c < sim::kFeatureCount; ++c)
            game[c] = windowize(telemetry_series(*ss.telemetry, c, ss.duration), cfg.w);
        const auto trace_w =
            windowize(lag_shift(trace_series(*ss.trace, ss.duration), cfg.l), cfg.w);
        std::vector<std::vector<WindowStat>> chans;
        if (ss.channels)
            for (const auto& ch : *ss.channels)
                chans.push_back(
                    windowize(lag_shift(channel_series(ch, ss.duration), cfg.l), cfg.w));

        size_t aligned = std::min(game[0].size(), trace_w.size());
        for (const auto& cw : chans) aligned = std::min(aligned, cw.size());

        for (size_t k = 0; k < aligned; ++k) {
            bool missing = false;
            if (game[0][k].missing) {  // all telemetry columns share sample times
                ++ds.dropped_reasons["empty telemetry window"];
                missing = true;
            }
            if (trace_w[k].missing) {
                ++ds.dropped_reasons["annotation missing"];
                missing = true;
            }
            for (size_t c = 0; c < chans.size(); ++c)
                if (chans[c][k].missing) {
                    ++ds.dropped_reasons["gap in channel " + channel_names[c]];
                    missing = true;
                }
            if (missing) {
                ++ds.dropped_rows;
                continue;
            }
            WindowRow row;
            row.participant = ss.participant;
            row.session = ss.session;
            row.condition = ss.condition;
            row.window = static_cast<long>(k);
            row.mu.reserve(ds.feature_names.size());
            row.rng.reserve(ds.feature_names.size());
            for (int c = 0; c < sim::kFeatureCount; ++c) {
                row.mu.push_back(game[c][k].mu);
                row.rng.push_back(game[c][k].rng);
            }
            for (const auto& cw : chans) {
                row.mu.push_back(cw[k].mu);
                row.rng.push_back(cw[k].rng);
            }
            row.y_mu = trace_w[k].mu;
            row.y_rng = trace_w[k].rng;
            ds.rows.push_back(std::move(row));
        }
    }
    return ds;
}

void write_dataset_csv(std::ostream& os, const WindowedDataset& ds) {
    os << "participant,session,condition,window";
    for (const auto& n : ds.feature_names) os << ",mu_" << n;
    os << ",mu_Annotation";
    for (const auto& n : ds.feature_names) os << ",rng_" << n;
    os << ",rng_Annotation\n";
    for (const auto& r : ds.rows) {
        os << r.participant << ',' << r.session << ',' << r.condition << ',' << r.window;
        for (double v : r.mu) os << ',' << fmt_double_shortest(v);
        os << ',' << fmt_double_shortest(r.y_mu);
        for (double v : r.rng) os << ',' << fmt_double_shortest(v);
        os << ',' << fmt_double_shortest(r.y_rng) << '\n';
    }
}

namespace {

[[noreturn]] void bad_row(int line, const std::string& detail) {
    throw DataError("MALFORMED_ROW: line " + std::to_string(line) + ": " + detail);
}

}  // namespace

WindowedDataset read_dataset_csv(std::istream& is) {
    WindowedDataset ds;
    std::string line;
    if (!std::getline(is, line)) throw DataError("MALFORMED_ROW: line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    if (header.size() < 6 || header[0] != "participant" || header[1] != "session" ||
        header[2] != "condition" || header[3] != "window")
        bad_row(1, "expected dataset header starting 'participant,session,condition,window'");

    size_t i = 4;
    while (i < header.size() && header[i] != "mu_Annotation") {
        if (header[i].rfind("mu_", 0) != 0) bad_row(1, "expected mu_ column, got " + header[i]);
        ds.feature_names.push_back(header[i].substr(3));
        ++i;
    }
    if (i == header.size()) bad_row(1, "missing mu_Annotation column");
    ++i;  // skip mu_Annotation
    const size_t nf = ds.feature_names.size();
    if (header.size() != 5 + 2 * nf + 1) bad_row(1, "mu_ and rng_ blocks differ in size");
    for (size_t f = 0; f < nf; ++f)
        if (header[i + f] != "rng_" + ds.feature_names[f])
            bad_row(1, "rng_ block does not mirror the mu_ block at " + header[i + f]);
    if (header.back() != "rng_Annotation") bad_row(1, "missing rng_Annotation column");

    for (const auto& name : ds.feature_names) {
        bool game = true;
        int col = -1;
        try {
            col = sim::feature_index(name);
        } catch (const DataError&) {
            game = false;
        }
        ds.feature_groups.push_back(game ? telemetry_group(col) : "facial");
    }

    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size()) bad_row(line_no, "wrong field count");
        WindowRow row;
        row.participant = f[0];
        long session = 0, window = 0;
        if (!parse_long(f[1], session) || !parse_long(f[3], window))
            bad_row(line_no, "session and window must be integers");
        row.session = static_cast<int>(session);
        row.condition = f[2];
        row.window = window;
        row.mu.resize(nf);
        row.rng.resize(nf);
        bool ok = true;
        for (size_t c = 0; c < nf; ++c) ok = ok && parse_double(f[4 + c], row.mu[c]);
        ok = ok && parse_double(f[4 + nf], row.y_mu);
        for (size_t c = 0; c < nf; ++c) ok = ok && parse_double(f[5 + nf + c], row.rng[c]);
        ok = ok && parse_double(f[5 + 2 * nf], row.y_rng);
        if (!ok) bad_row(line_no, "non-numeric value");
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

WindowedDataset load_dataset_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open dataset file: " + path);
    return read_dataset_csv(is);
}

stats::FeatureMatrix to_feature_matrix(const WindowedDataset& ds) {
    stats::FeatureMatrix fm;
    fm.names = ds.feature_names;
    fm.groups = ds.feature_groups;
    const size_t nf = ds.feature_names.size(), nr = ds.rows.size();
    fm.mu.assign(nf, std::vector<double>(nr));
    fm.rng.assign(nf, std::vector<double>(nr));
    fm.y_mu.resize(nr);
    fm.y_rng.resize(nr);
    for (size_t r = 0; r < nr; ++r) {
        for (size_t f = 0; f < nf; ++f) {
            fm.mu[f][r] = ds.rows[r].mu[f];
            fm.rng[f][r] = ds.rows[r].rng[f];
        }
        fm.y_mu[r] = ds.rows[r].y_mu;
        fm.y_rng[r] = ds.rows[r].y_rng;
    }
    return fm;
}

// --- pairwise preference transform ------------------------------------------

const char* feature_set_name(FeatureSet s) {
    switch (s) {
        case FeatureSet::GAME: return "game";
        case FeatureSet::FACIAL: return "facial";
        case FeatureSet::ALL: return "all";
    }
    return "?";
}

FeatureSet parse_feature_set(const std::string& name) {
    if (name == "game") return FeatureSet::GAME;
    if (name == "facial") return FeatureSet::FACIAL;
    if (name == "all") return FeatureSet::ALL;
    throw ConfigError("unknown feature set: " + name + " (expected game|facial|all)");
}

const char* processing_name(Processing p) { return p == Processing::MU ? "mu" : "rng"; }

std::string combo_name(const ProcessingCombo& c) {
    std::string s;
    s += c.input == Processing::MU ? 'm' : 'r';
    s += c.target == Processing::MU ? 'm' : 'r';
    return s;
}

ProcessingCombo parse_combo(const std::string& name) {
    if (name.size() != 2 || (name[0] != 'm' && name[0] != 'r') ||
        (name[1] != 'm' && name[1] != 'r'))
        throw ConfigError("unknown processing combination: " + name +
                          " (expected mm|rr|rm|mr)");
    return {name[0] == 'm' ? Processing::MU : Processing::RNG,
            name[1] == 'm' ? Processing::MU : Processing::RNG};
}

std::vector<int> feature_subset(const WindowedDataset& ds, FeatureSet set) {
    std::vector<int> idx;
    for (size_t f = 0; f < ds.feature_names.size(); ++f) {
        const bool facial = ds.feature_groups[f] == "facial";
        if (set == FeatureSet::ALL || (set == FeatureSet::FACIAL) == facial)
            idx.push_back(static_cast<int>(f));
    }
    return idx;
}

PreferencePairs pairwise_transform(const WindowedDataset& ds, FeatureSet set,
                                   const ProcessingCombo& combo, double tie_epsilon) {
    if (tie_epsilon < 0) throw ConfigError("tie_epsilon must be non-negative");
    const std::vector<int> subset = feature_subset(ds, set);

    PreferencePairs pairs;
    pairs.feature_set = feature_set_name(set);
    pairs.processing = combo_name(combo);
    pairs.scope = "within_session";
    for (int f : subset) pairs.feature_names.push_back(ds.feature_names[f]);

    // Group row indices by session, in first-seen order.
    std::map<std::pair<std::string, int>, size_t> group_of;
    std::vector<std::vector<size_t>> groups;
    for (size_t r = 0; r < ds.rows.size(); ++r) {
        auto key = std::make_pair(ds.rows[r].participant, ds.rows[r].session);
        auto [it, fresh] = group_of.try_emplace(key, groups.size());
        if (fresh) groups.emplace_back();
        groups[it->second].push_back(r);
    }

    auto target_of = [&](const WindowRow& row) {
        return combo.target == Processing::MU ? row.y_mu : row.y_rng;
    };
    auto input_of = [&](const WindowRow& row) -> const std::vector<double>& {
        return combo.input == Processing::MU ? row.mu : row.rng;
    };

    for (const auto& g : groups) {
        for (size_t a = 0; a < g.size(); ++a) {
            for (size_t b = a + 1; b < g.size(); ++b) {
                const WindowRow& ri = ds.rows[g[a]];
                const WindowRow& rj = ds.rows[g[b]];
                const double dy = target_of(ri) - target_of(rj);
                if (std::abs(dy) <= tie_epsilon) continue;
                const int label = dy > 0 ? 1 : -1;
                std::vector<double> d(subset.size());
                const auto& xi = input_of(ri);
                const auto& xj = input_of(rj);
                for (size_t c = 0; c < subset.size(); ++c) d[c] = xi[subset[c]] - xj[subset[c]];
                std::vector<double> nd(subset.size());
                for (size_t c = 0; c < subset.size(); ++c) nd[c] = -d[c];
                pairs.diffs.push_back(std::move(d));
                pairs.labels.push_back(label);
                pairs.diffs.push_back(std::move(nd));
                pairs.labels.push_back(-label);
            }
        }
    }
    return pairs;
}

void write_pairs(std::ostream& os, const PreferencePairs& pairs) {
    os << "# feature_set: " << pairs.feature_set << '\n';
    os << "# processing: " << pairs.processing << '\n';
    os << "# scope: " << pairs.scope << '\n';
    os << "label";
    for (const auto& n : pairs.feature_names) os << ',' << n;
    os << '\n';
    for (size_t i = 0; i < pairs.labels.size(); ++i) {
        os << pairs.labels[i];
        for (double v : pairs.diffs[i]) os << ',' << fmt_double_shortest(v);
        os << '\n';
    }
}

PreferencePairs read_pairs(std::istream& is) {
    PreferencePairs pairs;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto set_if = [&](const char* key, std::string* dst) {
                const std::string prefix = std::string("# ") + key + ": ";
                if (line.rfind(prefix, 0) == 0) *dst = line.substr(prefix.size());
            };
            set_if("feature_set", &pairs.feature_set);
            set_if("processing", &pairs.processing);
            set_if("scope", &pairs.scope);
            continue;
        }
        const auto f = split_csv(line);
        if (!header_seen) {
            if (f.empty() || f[0] != "label")
                bad_row(line_no, "expected pairs header starting 'label'");
            pairs.feature_names.assign(f.begin() + 1, f.end());
            header_seen = true;
            continue;
        }
        if (f.size() != pairs.feature_names.size() + 1) bad_row(line_no, "wrong field count");
        long label = 0;
        if (!parse_long(f[0], label) || (label != 1 && label != -1))
            bad_row(line_no, "label must be 1 or -1");
        std::vector<double> d(pairs.feature_names.size());
        for (size_t c = 0; c < d.size(); ++c)
            if (!parse_double(f[c + 1], d[c])) bad_row(line_no, "non-numeric difference");
        pairs.labels.push_back(static_cast<int>(label));
        pairs.diffs.push_back(std::move(d));
    }
    return pairs;
}

PreferencePairs load_pairs(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open pairs file: " + path);
    return read_pairs(is);
}

}  // namespace mazing::pipeline
