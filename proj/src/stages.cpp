#include "mazing/stages.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mazing/csv.hpp"
#include "mazing/digest.hpp"
#include "mazing/learn.hpp"
#include "mazing/sim.hpp"
#include "mazing/stats.hpp"
#include "mazing/svm.hpp"
#include "mazing/traces.hpp"

namespace mazing::stages {

namespace fs = std::filesystem;
using nlohmann::json;
using FileMap = std::map<std::string, std::string>;  // relative path -> sha256

std::string session_tag(const std::string& participant, int session) {
    return participant + "_s" + std::to_string(session);
}

namespace {

// --- manifest plumbing --------------------------------------------------------

fs::path manifest_path(const fs::path& out) { return out / "manifest.json"; }

json load_manifest_or_empty(const fs::path& out) {
    std::ifstream is(manifest_path(out));
    if (!is) return json::object();
    try {
        json j;
        is >> j;
        return j;
    } catch (const json::exception& e) {
        throw StageError("manifest.json is unreadable: " + std::string(e.what()));
    }
}

json load_manifest_required(const fs::path& out) {
    if (!fs::exists(manifest_path(out)))
        throw StageError("no manifest.json under '" + out.string() + "' (run simulate first)");
    return load_manifest_or_empty(out);
}

// The stage's file map, with every artifact checked to exist and match its
// recorded digest.
FileMap require_stage(const json& manifest, const std::string& stage, const fs::path& out) {
    if (!manifest.contains("stages") || !manifest.at("stages").contains(stage))
        throw StageError("stage '" + stage + "' has not been run under '" + out.string() + "'");
    FileMap files;
    try {
        files = manifest.at("stages").at(stage).at("files").get<FileMap>();
    } catch (const json::exception& e) {
        throw StageError("manifest entry for '" + stage + "' is malformed: " + e.what());
    }
    for (const auto& [rel, digest] : files) {
        const fs::path p = out / rel;
        if (!fs::exists(p))
            throw StageError("missing artifact '" + rel + "' (re-run '" + stage + "')");
        if (sha256_file(p) != digest)
            throw StageError("artifact '" + rel + "' does not match the manifest (re-run '" +
                             stage + "')");
    }
    return files;
}

std::string write_artifact(const fs::path& out, const std::string& rel,
                           const std::string& content) {
    const fs::path p = out / rel;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw StageError("cannot write '" + p.string() + "'");
    os << content;
    os.close();
    if (!os) throw StageError("short write to '" + p.string() + "'");
    return sha256_hex(content);
}

void update_manifest(const StageContext& ctx, const std::string& stage, const FileMap& files) {
    json manifest = load_manifest_or_empty(ctx.out);
    manifest["format"] = 1;
    // The base seed is study provenance: only the stage that generated the
    // study may write it. Later stages run under whatever settings they were
    // given and must not disturb it.
    if (stage == "simulate") manifest["base_seed"] = ctx.settings.study.base_seed;
    if (!manifest.contains("stages")) manifest["stages"] = json::object();
    manifest["stages"][stage] = json{{"config_digest", ctx.config_digest}, {"files", files}};
    const std::string text = manifest.dump(2) + "\n";
    fs::create_directories(ctx.out);
    std::ofstream os(manifest_path(ctx.out), std::ios::binary | std::ios::trunc);
    if (!os) throw StageError("cannot write manifest.json");
    os << text;
}

std::string read_file_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw DataError("cannot open '" + p.string() + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// --- study index ----------------------------------------------------------------

struct SessionEntry {
    std::string participant;
    int session = 1;
    sim::Condition condition = sim::Condition::CONTROL;
    uint64_t seed = 0;
    std::string telemetry_rel, events_rel;
};

struct StudyIndex {
    double duration = 60.0;
    std::vector<SessionEntry> sessions;
};

StudyIndex read_study_index(const fs::path& out) {
    StudyIndex idx;
    try {
        const json j = json::parse(read_file_bytes(out / "study.json"));
        idx.duration = j.at("duration").get<double>();
        for (const auto& s : j.at("sessions")) {
            SessionEntry e;
            e.participant = s.at("participant").get<std::string>();
            e.session = s.at("session").get<int>();
            e.condition = sim::parse_condition(s.at("condition").get<std::string>());
            e.seed = s.at("seed").get<uint64_t>();
            e.telemetry_rel = s.at("telemetry").get<std::string>();
            e.events_rel = s.at("events").get<std::string>();
            idx.sessions.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw StageError("study.json is malformed: " + std::string(e.what()));
    }
    if (idx.sessions.empty()) throw StageError("study.json lists no sessions");
    return idx;
}

// Annotation noise resolved per session: the configured relative level times
// the spread of the weighted cue signal across the session's frames.
double resolve_noise_sd(const std::vector<sim::TelemetryFrame>& frames,
                        const traces::AnnotatorModel& m, double rel) {
    if (rel <= 0 || m.cue_weights.empty() || frames.empty()) return 0.0;
    std::vector<int> idx;
    std::vector<double> w;
    for (const auto& [name, weight] : m.cue_weights) {
        idx.push_back(sim::feature_index(name));
        w.push_back(weight);
    }
    double mean = 0;
    std::vector<double> signal(frames.size());
    for (size_t k = 0; k < frames.size(); ++k) {
        double v = 0;
        for (size_t c = 0; c < idx.size(); ++c)
            v += w[c] * frames[k].v[static_cast<size_t>(idx[c])];
        signal[k] = v;
        mean += v;
    }
    mean /= static_cast<double>(signal.size());
    double ss = 0;
    for (double v : signal) ss += (v - mean) * (v - mean);
    return rel * std::sqrt(ss / static_cast<double>(signal.size()));
}

std::string note_count(size_t n) { return std::to_string(n); }

// Canonical cell order for train artifacts: feature sets game, facial, all;
// combos mm, rr, rm, mr; linear before rbf.
int set_rank(pipeline::FeatureSet s) {
    switch (s) {
        case pipeline::FeatureSet::GAME: return 0;
        case pipeline::FeatureSet::FACIAL: return 1;
        case pipeline::FeatureSet::ALL: return 2;
    }
    return 3;
}

int combo_rank(const pipeline::ProcessingCombo& c) {
    const std::string name = pipeline::combo_name(c);
    if (name == "mm") return 0;
    if (name == "rr") return 1;
    if (name == "rm") return 2;
    return 3;
}

// A model cell is identified by feature set and processing combo; its
// hyperparameters live inside the record, so re-training a cell replaces it.
std::string cell_key(const learn::EvalReport& r) {
    return std::to_string(set_rank(r.feature_set)) + "/" +
           std::to_string(combo_rank(r.processing));
}

}  // namespace

// --- simulate --------------------------------------------------------------------

Notes run_simulate(const StageContext& ctx) {
    const sim::StudyBundle bundle = sim::run_study(ctx.settings.study);

    FileMap files;
    json sessions = json::array();
    for (const auto& rec : bundle.sessions) {
        const std::string tag = session_tag(rec.participant, rec.session);
        const std::string tel_rel = "telemetry/" + tag + ".csv";
        const std::string ev_rel = "events/" + tag + ".jsonl";
        {
            std::ostringstream os;
            sim::write_telemetry_csv(os, rec.result.frames, rec.participant, rec.session,
                                     rec.condition);
            files[tel_rel] = write_artifact(ctx.out, tel_rel, os.str());
        }
        {
            std::ostringstream os;
            sim::write_events_jsonl(os, rec.result.events);
            files[ev_rel] = write_artifact(ctx.out, ev_rel, os.str());
        }
        json s;
        s["participant"] = rec.participant;
        s["session"] = rec.session;
        s["condition"] = sim::condition_name(rec.condition);
        s["seed"] = rec.seed;
        s["policy"] = player::policy_name(rec.policy);
        s["telemetry"] = tel_rel;
        s["events"] = ev_rel;
        sessions.push_back(std::move(s));
    }

    json study;
    study["base_seed"] = ctx.settings.study.base_seed;
    study["participants"] = ctx.settings.study.participants;
    study["sessions_per"] = ctx.settings.study.sessions_per;
    study["duration"] = ctx.settings.study.base.duration;
    study["tick_rate"] = ctx.settings.study.base.tick_rate;
    study["sessions"] = std::move(sessions);
    files["study.json"] = write_artifact(ctx.out, "study.json", study.dump(2) + "\n");

    update_manifest(ctx, "simulate", files);
    return {{"sessions", note_count(bundle.sessions.size())},
            {"telemetry files", note_count(bundle.sessions.size())},
            {"out", ctx.out.string()}};
}

// --- trace -----------------------------------------------------------------------

Notes run_trace(const StageContext& ctx, const TraceOptions& opts) {
    const json manifest = load_manifest_required(ctx.out);
    require_stage(manifest, "simulate", ctx.out);
    const StudyIndex idx = read_study_index(ctx.out);

    FileMap files;
    long channel_files = 0;
    long warnings = 0;
    for (const auto& s : idx.sessions) {
        const std::string tag = session_tag(s.participant, s.session);
        const std::string trace_rel = "traces/" + tag + ".csv";

        if (!opts.ingest_traces.empty()) {
            const fs::path src = fs::path(opts.ingest_traces) / (tag + ".csv");
            std::vector<std::string> warn;
            traces::load_trace(src.string(), &warn);  // validate before adopting
            warnings += static_cast<long>(warn.size());
            files[trace_rel] = write_artifact(ctx.out, trace_rel, read_file_bytes(src));
        } else {
            const sim::TelemetryLog tel =
                sim::load_telemetry_csv((ctx.out / s.telemetry_rel).string());
            traces::AnnotatorModel model = ctx.settings.annotator;
            model.noise_sd = resolve_noise_sd(tel.frames, model, ctx.settings.noise_rel);
            Rng rng(derive_seed(s.seed, 0, 0, 2));
            const traces::AnnotationTrace trace = traces::synthesize_trace(tel.frames, model, rng);
            std::ostringstream os;
            traces::write_trace_csv(os, trace);
            files[trace_rel] = write_artifact(ctx.out, trace_rel, os.str());
        }

        if (!opts.ingest_channels.empty()) {
            const fs::path dir = fs::path(opts.ingest_channels) / tag;
            std::vector<fs::path> paths;
            if (fs::exists(dir))
                for (const auto& entry : fs::directory_iterator(dir))
                    if (entry.is_regular_file() && entry.path().extension() == ".csv")
                        paths.push_back(entry.path());
            if (paths.empty())
                throw DataError("no channel files for session " + tag + " under '" +
                                dir.string() + "'");
            std::sort(paths.begin(), paths.end());
            for (const auto& src : paths) {
                std::vector<std::string> warn;
                traces::load_channel(src.string(), &warn);
                warnings += static_cast<long>(warn.size());
                const std::string rel = "channels/" + tag + "/" + src.filename().string();
                files[rel] = write_artifact(ctx.out, rel, read_file_bytes(src));
                ++channel_files;
            }
        } else if (ctx.settings.channels == "noise23") {
            Rng crng(derive_seed(s.seed, 0, 0, 3));
            const auto chans = traces::synthesize_noise_channels(
                traces::canonical_channel_names(), idx.duration, crng,
                ctx.settings.channel_gap_rate);
            for (const auto& ch : chans) {
                std::ostringstream os;
                traces::write_channel_csv(os, ch);
                const std::string rel = "channels/" + tag + "/" + ch.name + ".csv";
                files[rel] = write_artifact(ctx.out, rel, os.str());
                ++channel_files;
            }
        }
    }

    update_manifest(ctx, "trace", files);
    Notes notes{{"traces", note_count(idx.sessions.size())},
                {"channel files", std::to_string(channel_files)}};
    if (warnings > 0) notes.emplace_back("ingest warnings", std::to_string(warnings));
    return notes;
}

// --- pipeline ----------------------------------------------------------------------

Notes run_pipeline(const StageContext& ctx) {
    const json manifest = load_manifest_required(ctx.out);
    require_stage(manifest, "simulate", ctx.out);
    const FileMap trace_files = require_stage(manifest, "trace", ctx.out);
    const StudyIndex idx = read_study_index(ctx.out);

    const size_t n = idx.sessions.size();
    std::vector<sim::TelemetryLog> tels(n);
    std::vector<traces::AnnotationTrace> trs(n);
    std::vector<std::vector<traces::ModalityChannel>> chans(n);
    std::vector<pipeline::SessionStreams> streams;
    for (size_t k = 0; k < n; ++k) {
        const auto& s = idx.sessions[k];
        const std::string tag = session_tag(s.participant, s.session);
        tels[k] = sim::load_telemetry_csv((ctx.out / s.telemetry_rel).string());
        const std::string trace_rel = "traces/" + tag + ".csv";
        if (!trace_files.count(trace_rel))
            throw StageError("trace stage has no artifact for session " + tag);
        trs[k] = traces::load_trace((ctx.out / trace_rel).string());
        const std::string prefix = "channels/" + tag + "/";
        for (const auto& [rel, digest] : trace_files)
            if (rel.rfind(prefix, 0) == 0)
                chans[k].push_back(traces::load_channel((ctx.out / rel).string()));

        pipeline::SessionStreams ss;
        ss.participant = s.participant;
        ss.session = s.session;
        ss.condition = sim::condition_name(s.condition);
        ss.telemetry = &tels[k].frames;
        ss.trace = &trs[k];
        ss.channels = chans[k].empty() ? nullptr : &chans[k];
        ss.duration = idx.duration;
        streams.push_back(std::move(ss));
    }

    const pipeline::WindowedDataset ds = pipeline::build_dataset(streams, ctx.settings.pipe);

    FileMap files;
    {
        std::ostringstream os;
        pipeline::write_dataset_csv(os, ds);
        files["dataset.csv"] = write_artifact(ctx.out, "dataset.csv", os.str());
    }
    Notes notes{{"rows", note_count(ds.rows.size())},
                {"dropped rows", std::to_string(ds.dropped_rows)}};
    for (const char* combo : {"mm", "rr"}) {
        const pipeline::PreferencePairs pairs = pipeline::pairwise_transform(
            ds, pipeline::FeatureSet::ALL, pipeline::parse_combo(combo),
            ctx.settings.pipe.tie_epsilon);
        std::ostringstream os;
        pipeline::write_pairs(os, pairs);
        const std::string rel = std::string("pairs/pairs_all_") + combo + ".csv";
        files[rel] = write_artifact(ctx.out, rel, os.str());
        notes.emplace_back(std::string("pairs ") + combo, note_count(pairs.diffs.size()));
    }

    update_manifest(ctx, "pipeline", files);
    return notes;
}

// --- correlate ------------------------------------------------------------------------

Notes run_correlate(const StageContext& ctx) {
    const json manifest = load_manifest_required(ctx.out);
    require_stage(manifest, "pipeline", ctx.out);

    const pipeline::WindowedDataset ds =
        pipeline::load_dataset_csv((ctx.out / "dataset.csv").string());
    const stats::CorrelationReport rep =
        stats::correlation_report(pipeline::to_feature_matrix(ds));

    FileMap files;
    files["correlate/correlations.csv"] =
        write_artifact(ctx.out, "correlate/correlations.csv", rep.to_csv());
    files["correlate/correlations.txt"] =
        write_artifact(ctx.out, "correlate/correlations.txt", rep.to_text());
    update_manifest(ctx, "correlate", files);

    long sig05 = 0, sig01 = 0;
    for (const auto& row : rep.rows) {
        sig05 += row.sig_05 ? 1 : 0;
        sig01 += row.sig_01 ? 1 : 0;
    }
    return {{"correlation rows", note_count(rep.rows.size())},
            {"significant (corrected 0.05)", std::to_string(sig05)},
            {"significant (corrected 0.01)", std::to_string(sig01)}};
}

// --- train ---------------------------------------------------------------------------

Notes run_train(const StageContext& ctx, const TrainSelection& sel) {
    const json manifest = load_manifest_required(ctx.out);
    require_stage(manifest, "pipeline", ctx.out);

    const pipeline::WindowedDataset ds =
        pipeline::load_dataset_csv((ctx.out / "dataset.csv").string());

    std::vector<pipeline::FeatureSet> sets;
    if (sel.feature_set)
        sets.push_back(*sel.feature_set);
    else
        sets = {pipeline::FeatureSet::GAME, pipeline::FeatureSet::FACIAL, pipeline::FeatureSet::ALL};
    std::vector<pipeline::ProcessingCombo> combos;
    if (sel.processing)
        combos.push_back(*sel.processing);
    else
        for (const char* c : {"mm", "rr", "rm", "mr"}) combos.push_back(pipeline::parse_combo(c));

    learn::CvOptions cv;
    cv.tie_epsilon = ctx.settings.pipe.tie_epsilon;
    cv.pair_cap_per_session = ctx.settings.pair_cap;
    cv.threads = ctx.settings.threads;

    // Existing summaries are kept so selective runs accumulate cells; a cell
    // with the same feature set and processing is replaced.
    std::map<std::string, learn::EvalReport> cells;
    const fs::path summary_path = ctx.out / "train" / "summaries.jsonl";
    if (fs::exists(summary_path)) {
        std::istringstream is(read_file_bytes(summary_path));
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const learn::EvalReport r = learn::parse_summary_record(line);
            cells[cell_key(r)] = r;
        }
    }

    // Artifacts this run is about to write; anything else retained from an
    // earlier train run must still match its recorded digest.
    std::set<std::string> rewriting{"train/summaries.jsonl"};
    for (const auto set : sets)
        for (const auto& combo : combos) {
            const std::string cell_name = std::string(pipeline::feature_set_name(set)) + "_" +
                                          pipeline::combo_name(combo);
            rewriting.insert("train/report_" + cell_name + ".csv");
            if (sel.grid) rewriting.insert("train/grid_" + cell_name + ".csv");
        }
    FileMap files;
    if (manifest.contains("stages") && manifest.at("stages").contains("train")) {
        FileMap previous = manifest.at("stages").at("train").at("files").get<FileMap>();
        for (const auto& [rel, digest] : previous) {
            if (rewriting.count(rel)) continue;
            if (!fs::exists(ctx.out / rel) || sha256_file(ctx.out / rel) != digest)
                throw StageError("retained artifact '" + rel +
                                 "' does not match the manifest (re-run that cell or remove '" +
                                 (ctx.out / "train").string() + "')");
            files[rel] = digest;
        }
    }

    Notes notes;
    for (const auto set : sets)
        for (const auto& combo : combos) {
            const std::string cell_name = std::string(pipeline::feature_set_name(set)) + "_" +
                                          pipeline::combo_name(combo);
            learn::EvalReport report;
            if (sel.grid) {
                const learn::GridSearchResult gr = learn::grid_search(ds, set, combo, cv);
                report = gr.best_report;
                std::ostringstream os;
                os << "kernel,C,gamma,mean_accuracy,ci95,max_accuracy\n";
                for (const auto& cell : gr.table) {
                    os << svm::kernel_name(cell.hp.kernel) << ',' << fmt_double_shortest(cell.hp.C)
                       << ',';
                    if (cell.hp.kernel == svm::Kernel::RBF) os << fmt_double_shortest(cell.hp.gamma);
                    os << ',' << fmt_double_shortest(cell.report.mean_accuracy) << ','
                       << fmt_double_shortest(cell.report.ci_half_width) << ','
                       << fmt_double_shortest(cell.report.max_accuracy) << "\n";
                }
                const std::string rel = "train/grid_" + cell_name + ".csv";
                files[rel] = write_artifact(ctx.out, rel, os.str());
            } else {
                report = learn::cross_validate(ds, set, combo, ctx.settings.hp, cv);
            }
            {
                std::ostringstream os;
                learn::write_report_csv(os, report);
                const std::string rel = "train/report_" + cell_name + ".csv";
                files[rel] = write_artifact(ctx.out, rel, os.str());
            }
            cells[cell_key(report)] = report;
            notes.emplace_back(cell_name, fmt_double_shortest(report.mean_accuracy));
        }

    std::string summaries;
    for (const auto& [key, report] : cells) summaries += learn::report_summary_record(report) + "\n";
    files["train/summaries.jsonl"] = write_artifact(ctx.out, "train/summaries.jsonl", summaries);

    update_manifest(ctx, "train", files);
    notes.emplace_back("cells", note_count(cells.size()));
    return notes;
}

// --- report ---------------------------------------------------------------------------

Notes run_report(const StageContext& ctx) {
    const json manifest = load_manifest_required(ctx.out);
    // The report validates the whole manifest: every referenced artifact of
    // every stage must exist and match its digest.
    if (manifest.contains("stages"))
        for (const auto& [stage, entry] : manifest.at("stages").items())
            require_stage(manifest, stage, ctx.out);
    require_stage(manifest, "correlate", ctx.out);
    require_stage(manifest, "train", ctx.out);

    // Model cells, in the canonical order they were stored in.
    std::vector<learn::EvalReport> reports;
    {
        std::istringstream is(read_file_bytes(ctx.out / "train" / "summaries.jsonl"));
        std::string line;
        while (std::getline(is, line))
            if (!line.empty()) reports.push_back(learn::parse_summary_record(line));
    }
    if (reports.empty()) throw StageError("train/summaries.jsonl lists no models");

    // Correlation rows, reparsed from the correlate artifact.
    struct CorrRow {
        std::string feature, group, processing;
        double tau = 0, p = 1;
        bool defined = false, sig05 = false, sig01 = false;
    };
    std::vector<CorrRow> corr;
    {
        std::istringstream is(read_file_bytes(ctx.out / "correlate" / "correlations.csv"));
        std::string line;
        std::getline(is, line);  // header
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const auto f = split_csv(line);
            if (f.size() != 9) throw StageError("correlations.csv has a malformed row");
            CorrRow row;
            row.feature = f[0];
            row.group = f[1];
            row.processing = f[2];
            row.defined = !f[4].empty() && parse_double(f[4], row.tau);
            if (row.defined) parse_double(f[5], row.p);
            row.sig05 = f[7] == "1";
            row.sig01 = f[8] == "1";
            corr.push_back(std::move(row));
        }
    }

    std::ostringstream md;
    md << "# Study report\n\n";
    if (manifest.contains("base_seed")) md << "- base seed: " << manifest.at("base_seed").dump() << "\n";
    if (manifest.at("stages").contains("simulate")) {
        const std::string cfg_digest =
            manifest.at("stages").at("simulate").value("config_digest", "");
        md << "- config: "
           << (cfg_digest.empty() ? std::string("built-in defaults") : "sha256 " + cfg_digest)
           << "\n";
        const StudyIndex idx = read_study_index(ctx.out);
        md << "- sessions: " << idx.sessions.size() << "\n";
    }
    md << "- models: " << reports.size() << "\n\n";

    md << "## Model accuracies\n\n";
    md << "| # | features | processing | kernel | C | gamma | mean | 95% CI | max | pair cap |\n";
    md << "|---|----------|------------|--------|---|-------|------|--------|-----|----------|\n";
    for (size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        md << "| M" << (i + 1) << " | " << pipeline::feature_set_name(r.feature_set) << " | "
           << pipeline::combo_name(r.processing) << " | " << svm::kernel_name(r.hp.kernel) << " | "
           << fmt_double_shortest(r.hp.C) << " | "
           << (r.hp.kernel == svm::Kernel::RBF ? fmt_double_shortest(r.hp.gamma) : std::string("-"))
           << " | " << fmt_double_shortest(r.mean_accuracy) << " | ±"
           << fmt_double_shortest(r.ci_half_width) << " | " << fmt_double_shortest(r.max_accuracy)
           << " | " << (r.subsampled ? std::to_string(r.pair_cap) : std::string("-")) << " |\n";
    }
    md << "\n";

    if (reports.size() >= 2) {
        const learn::ComparisonMatrix cmp = learn::model_comparison(reports);
        md << "## Pairwise significance\n\n";
        md << "Threshold: alpha 0.05 / " << (reports.size() - 1) << " = "
           << fmt_double_shortest(cmp.threshold) << " (t-test / Mann-Whitney)\n\n";
        md << "| pair | t p-value | MW p-value | significant |\n";
        md << "|------|-----------|------------|-------------|\n";
        for (const auto& cell : cmp.cells) {
            const bool sig = cell.significant_t && cell.significant_u;
            md << "| M" << (cell.i + 1) << " vs M" << (cell.j + 1) << " | "
               << fmt_double_shortest(cell.t_p) << " | " << fmt_double_shortest(cell.u_p) << " | "
               << (sig ? "both" : (cell.significant_t || cell.significant_u ? "one" : "no"))
               << " |\n";
        }
        md << "\n";
    } else {
        md << "## Pairwise significance\n\nskipped: only one model cell available\n\n";
    }

    long sig05 = 0, sig01 = 0;
    for (const auto& row : corr) {
        sig05 += row.sig05 ? 1 : 0;
        sig01 += row.sig01 ? 1 : 0;
    }
    md << "## Correlations\n\n";
    md << corr.size() << " feature/processing rows; " << sig05
       << " significant at the corrected 0.05 level, " << sig01 << " at 0.01.\n\n";

    std::vector<const CorrRow*> ranked;
    for (const auto& row : corr)
        if (row.defined) ranked.push_back(&row);
    std::sort(ranked.begin(), ranked.end(), [](const CorrRow* a, const CorrRow* b) {
        const double ma = std::fabs(a->tau), mb = std::fabs(b->tau);
        if (ma != mb) return ma > mb;
        if (a->feature != b->feature) return a->feature < b->feature;
        return a->processing < b->processing;
    });
    md << "| feature | group | processing | tau | p |\n";
    md << "|---------|-------|------------|-----|---|\n";
    for (size_t i = 0; i < ranked.size() && i < 10; ++i)
        md << "| " << ranked[i]->feature << " | " << ranked[i]->group << " | "
           << ranked[i]->processing << " | " << fmt_double_shortest(ranked[i]->tau) << " | "
           << fmt_double_shortest(ranked[i]->p) << " |\n";

    FileMap files;
    files["report/study_report.md"] =
        write_artifact(ctx.out, "report/study_report.md", md.str());
    update_manifest(ctx, "report", files);
    return {{"models", note_count(reports.size())},
            {"report", (ctx.out / "report/study_report.md").string()}};
}

}  // namespace mazing::stages
