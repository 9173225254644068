// Command-line front end: six stages over one output directory, each reading
// its inputs through the manifest written by the stage before it.
//
// Exit codes: 0 success, 2 configuration problem (including usage errors),
// 3 malformed data, 4 missing or stale stage artifacts.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mazing/config.hpp"
#include "mazing/digest.hpp"
#include "mazing/pipeline.hpp"
#include "mazing/stages.hpp"
#include "mazing/svm.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "mazing — deterministic player-vs-agent study runner\n"
        "stages: simulate -> trace -> pipeline -> correlate/train -> report"};
    app.require_subcommand(1);

    std::string config_path;
    const char* env_out = std::getenv("MAZING_OUT");
    std::string out_dir = (env_out && *env_out) ? env_out : "out";

    uint64_t seed = 0;
    int participants = 0, sessions = 0, threads = 0;
    double w = 0, l = 0, C = 0, gamma = 0;
    long pair_cap = 0;
    std::string features, processing, kernel, ingest_traces, ingest_channels;
    bool grid = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI config file layered over the defaults");
        sub->add_option("--out", out_dir, "output root (default: $MAZING_OUT or ./out)");
        return sub;
    };

    CLI::App* c_sim = add_common(
        app.add_subcommand("simulate", "run the study sessions, write telemetry and event logs"));
    CLI::Option* o_seed = c_sim->add_option("--seed", seed, "study base seed");
    CLI::Option* o_part = c_sim->add_option("--participants", participants, "participant count");
    CLI::Option* o_sess = c_sim->add_option("--sessions", sessions, "sessions per participant");

    CLI::App* c_trace = add_common(app.add_subcommand(
        "trace", "synthesize (or ingest) annotation traces and modality channels"));
    c_trace->add_option("--ingest-traces", ingest_traces,
                        "directory holding <participant>_s<n>.csv annotation traces to adopt");
    c_trace->add_option("--ingest-channels", ingest_channels,
                        "directory holding <participant>_s<n>/<channel>.csv files to adopt");

    CLI::App* c_pipe = add_common(
        app.add_subcommand("pipeline", "window and align all streams, emit dataset and pairs"));
    CLI::Option* o_w = c_pipe->add_option("--w", w, "window length in seconds");
    CLI::Option* o_l = c_pipe->add_option("--l", l, "annotator reaction lag in seconds");

    CLI::App* c_corr = add_common(app.add_subcommand(
        "correlate", "rank-correlation report with multiple-comparison control"));

    CLI::App* c_train =
        add_common(app.add_subcommand("train", "cross-validated preference learning"));
    CLI::Option* o_feat =
        c_train->add_option("--features", features, "feature set: game | facial | all");
    CLI::Option* o_proc = c_train->add_option("--processing", processing,
                                              "input/target processing: mm | rr | rm | mr");
    c_train->add_flag("--grid", grid, "grid-search C (and gamma) instead of the configured point");
    CLI::Option* o_kernel = c_train->add_option("--kernel", kernel, "kernel: linear | rbf");
    CLI::Option* o_c = c_train->add_option("--C", C, "soft-margin penalty");
    CLI::Option* o_gamma = c_train->add_option("--gamma", gamma, "RBF kernel width");
    CLI::Option* o_cap = c_train->add_option(
        "--pair-cap", pair_cap, "canonical training comparisons kept per session (0 = all)");
    CLI::Option* o_threads =
        c_train->add_option("--threads", threads, "1 = sequential folds, 0 = parallel");

    CLI::App* c_rep = add_common(
        app.add_subcommand("report", "verify every artifact and write the study report"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        mazing::config::StudySettings settings =
            config_path.empty() ? mazing::config::defaults() : mazing::config::load(config_path);
        const std::string digest =
            config_path.empty() ? std::string() : mazing::sha256_file(config_path);

        if (o_seed->count()) settings.study.base_seed = seed;
        if (o_part->count()) settings.study.participants = participants;
        if (o_sess->count()) settings.study.sessions_per = sessions;
        if (o_w->count()) settings.pipe.w = w;
        if (o_l->count()) settings.pipe.l = l;
        if (o_kernel->count()) settings.hp.kernel = mazing::svm::parse_kernel(kernel);
        if (o_c->count()) settings.hp.C = C;
        if (o_gamma->count()) settings.hp.gamma = gamma;
        if (o_cap->count()) settings.pair_cap = pair_cap;
        if (o_threads->count()) settings.threads = threads;

        if (settings.study.participants <= 0)
            throw mazing::ConfigError("participants must be positive");
        if (settings.study.sessions_per <= 0)
            throw mazing::ConfigError("sessions must be positive");
        if (settings.pipe.w <= 0) throw mazing::ConfigError("window length must be positive");
        if (settings.pipe.l < 0) throw mazing::ConfigError("lag must be non-negative");
        if (settings.pair_cap < 0) throw mazing::ConfigError("pair cap must be non-negative");
        if (settings.threads < 0) throw mazing::ConfigError("threads must be non-negative");

        mazing::stages::StageContext ctx{out_dir, settings, digest};
        mazing::stages::Notes notes;
        if (c_sim->parsed()) {
            notes = mazing::stages::run_simulate(ctx);
        } else if (c_trace->parsed()) {
            notes = mazing::stages::run_trace(ctx, {ingest_traces, ingest_channels});
        } else if (c_pipe->parsed()) {
            notes = mazing::stages::run_pipeline(ctx);
        } else if (c_corr->parsed()) {
            notes = mazing::stages::run_correlate(ctx);
        } else if (c_train->parsed()) {
            mazing::stages::TrainSelection sel;
            if (o_feat->count()) sel.feature_set = mazing::pipeline::parse_feature_set(features);
            if (o_proc->count()) sel.processing = mazing::pipeline::parse_combo(processing);
            sel.grid = grid;
            notes = mazing::stages::run_train(ctx, sel);
        } else if (c_rep->parsed()) {
            notes = mazing::stages::run_report(ctx);
        }
        for (const auto& [key, value] : notes) std::cout << key << ": " << value << "\n";
        return 0;
    } catch (const mazing::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
