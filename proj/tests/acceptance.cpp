// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line with its measured values and pinned tolerances; the process exits
// nonzero if any criterion fails. Later criteria reuse artifacts built by
// earlier ones where noted, so the suite runs as a single sequential program.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mazing/agent.hpp"
#include "mazing/config.hpp"
#include "mazing/learn.hpp"
#include "mazing/maze.hpp"
#include "mazing/pipeline.hpp"
#include "mazing/rng.hpp"
#include "mazing/sim.hpp"
#include "mazing/stages.hpp"
#include "mazing/stats.hpp"
#include "mazing/svm.hpp"
#include "qp_oracle.hpp"

using namespace mazing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mazing_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Artifacts shared between criteria 1 and 5: the default study, built once.
struct DefaultStudy {
    bool built = false;
    fs::path out;
    double build_seconds = 0;
    pipeline::WindowedDataset dataset;
    size_t pair_count = 0;
    long sessions = 0;
};

DefaultStudy g_default_study;

// --- C1: structure of the default study -----------------------------------------

Outcome criterion_structure() {
    constexpr long kSessions = 80;
    constexpr long kRows = 1520;  // 19 aligned windows per clean session
    constexpr size_t kPairsLo = 27000, kPairsHi = 29000;
    constexpr double kTimeLimit = 60.0;  // seconds

    g_default_study.out = fresh_dir("default_study");
    const stages::StageContext ctx{g_default_study.out, config::defaults(), ""};
    const auto t0 = std::chrono::steady_clock::now();
    stages::run_simulate(ctx);
    stages::run_trace(ctx);
    stages::run_pipeline(ctx);
    g_default_study.build_seconds = seconds_since(t0);

    const nlohmann::json study = nlohmann::json::parse(slurp(g_default_study.out / "study.json"));
    g_default_study.sessions = static_cast<long>(study.at("sessions").size());
    g_default_study.dataset =
        pipeline::load_dataset_csv((g_default_study.out / "dataset.csv").string());
    const pipeline::PreferencePairs pairs =
        pipeline::load_pairs((g_default_study.out / "pairs" / "pairs_all_mm.csv").string());
    g_default_study.pair_count = pairs.diffs.size();
    g_default_study.built = true;

    const bool pass = g_default_study.sessions == kSessions &&
                      static_cast<long>(g_default_study.dataset.rows.size()) == kRows &&
                      g_default_study.pair_count >= kPairsLo &&
                      g_default_study.pair_count <= kPairsHi &&
                      g_default_study.build_seconds < kTimeLimit;
    return {pass, std::to_string(g_default_study.sessions) + " sessions, " +
                      std::to_string(g_default_study.dataset.rows.size()) + " rows (need " +
                      std::to_string(kRows) + "), " + std::to_string(g_default_study.pair_count) +
                      " ordered comparisons (need " + std::to_string(kPairsLo) + ".." +
                      std::to_string(kPairsHi) + "), built in " +
                      fmt(g_default_study.build_seconds, 3) + " s (limit " + fmt(kTimeLimit, 3) +
                      " s)"};
}

// --- C2: frustration stays inside its condition band ------------------------------

Outcome criterion_condition_bands() {
    constexpr int kSeeds = 1000;
    long violations = 0;
    long frames_checked = 0;
    for (int k = 0; k < kSeeds; ++k) {
        sim::SessionConfig cfg;
        cfg.seed = static_cast<uint64_t>(1000 + k);
        cfg.condition = sim::kAllConditions[static_cast<size_t>(k % 4)];
        cfg.policy = static_cast<player::PolicyKind>(k % 3);
        const agent::FrustrationBand band = sim::band_for(cfg.condition);
        const sim::SessionResult res = sim::run_session(cfg);
        for (const auto& frame : res.frames) {
            const double f = frame.v[sim::feat::kFrustration];
            ++frames_checked;
            if (cfg.condition == sim::Condition::CONTROL) {
                if (f != 0.0) ++violations;
            } else if (f < band.f_min || f > band.f_max) {
                ++violations;
            }
        }
    }
    return {violations == 0, std::to_string(kSeeds) + " fuzzed seeds, " +
                                 std::to_string(frames_checked) + " frames, " +
                                 std::to_string(violations) + " band violations (need 0)"};
}

// --- C3: rank correlation against brute force + permutation null -------------------

int sgn(double d) { return d > 0 ? 1 : (d < 0 ? -1 : 0); }

struct BruteTau {
    long long c = 0, d = 0, n1 = 0, n2 = 0, n0 = 0, s = 0;
    bool defined = false;
    double tau = 0;
};

BruteTau brute_tau(const std::vector<double>& x, const std::vector<double>& y) {
    BruteTau b;
    const size_t n = x.size();
    b.n0 = static_cast<long long>(n) * (n - 1) / 2;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const int dx = sgn(x[j] - x[i]), dy = sgn(y[j] - y[i]);
            if (dx == 0) ++b.n1;
            if (dy == 0) ++b.n2;
            if (dx * dy > 0) ++b.c;
            if (dx * dy < 0) ++b.d;
        }
    b.s = b.c - b.d;
    b.defined = b.n0 != b.n1 && b.n0 != b.n2 && n >= 2;
    if (b.defined)
        b.tau = static_cast<double>(b.s) /
                std::sqrt(static_cast<double>(b.n0 - b.n1) * static_cast<double>(b.n0 - b.n2));
    return b;
}

long long s_statistic(const std::vector<double>& x, const std::vector<double>& y) {
    long long s = 0;
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j) s += sgn(x[j] - x[i]) * sgn(y[j] - y[i]);
    return s;
}

double perm_p_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const long long s_obs = s_statistic(x, y);
    std::vector<size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> yy(y.size());
    long long total = 0, extreme = 0;
    do {
        for (size_t k = 0; k < idx.size(); ++k) yy[k] = y[idx[k]];
        ++total;
        if (std::llabs(s_statistic(x, yy)) >= std::llabs(s_obs)) ++extreme;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

Outcome criterion_tau_oracle() {
    constexpr int kReps = 1000;
    constexpr double kExactPTol = 1e-12;  // identical enumeration up to rounding
    Rng rng(0xACCE97);
    long tau_mismatches = 0, p_checked = 0, p_mismatches = 0;
    for (int rep = 0; rep < kReps; ++rep) {
        const size_t n = static_cast<size_t>(2 + rng.uniform_int(49));  // 2..50
        const bool ties = rng.uniform() < 0.5;
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = ties ? static_cast<double>(rng.uniform_int(5)) : rng.uniform(-10, 10);
        for (auto& v : y) v = ties ? static_cast<double>(rng.uniform_int(5)) : rng.uniform(-10, 10);
        const stats::TauResult r = stats::kendall_tau(x, y);
        const BruteTau o = brute_tau(x, y);
        if (r.defined != o.defined || (o.defined && (r.s != o.s || r.tau != o.tau)))
            ++tau_mismatches;
        if (o.defined && n <= 8) {
            if (r.regime != stats::TauResult::EXACT ||
                std::fabs(r.p - perm_p_oracle(x, y)) > kExactPTol)
                ++p_mismatches;
            ++p_checked;
        }
    }
    const bool pass = tau_mismatches == 0 && p_mismatches == 0 && p_checked >= 50;
    return {pass, std::to_string(kReps) + " random pairs (n<=50, ties): " +
                      std::to_string(tau_mismatches) + " tau mismatches (need 0); " +
                      std::to_string(p_checked) + " exact-p enumerations (n<=8): " +
                      std::to_string(p_mismatches) + " mismatches (need 0)"};
}

// --- C4: solver correctness ---------------------------------------------------------

Outcome criterion_solver() {
    constexpr double kAnalyticTol = 1e-4;
    constexpr double kOracleTol = 1e-4;
    constexpr double kKktLimit = 1e-3;
    constexpr double kOddTol = 1e-9;
    std::string fail;

    // (a) two symmetric points: maximum margin at w = (0.5, 0.5), b = 0.
    {
        svm::SvmHyperparams hp;
        hp.C = 10.0;
        svm::TrainOptions opts;
        opts.kkt_tol = 1e-8;
        const svm::SvmModel m = svm::train_biased_svm({{1.0, 1.0}, {-1.0, -1.0}}, {1, -1}, hp, opts);
        const std::vector<double> w = m.linear_weights();
        if (std::fabs(w[0] - 0.5) > kAnalyticTol || std::fabs(w[1] - 0.5) > kAnalyticTol ||
            std::fabs(m.bias) > kAnalyticTol)
            fail += " analytic case w=(" + fmt(w[0]) + "," + fmt(w[1]) + ") b=" + fmt(m.bias) + ";";
    }

    // (b)+(c) random small ranking problems against the exhaustive QP oracle.
    double max_gap = 0, max_kkt = 0;
    {
        Rng r2(0xACC401);
        constexpr int kProblems = 50;
        for (int rep = 0; rep < kProblems; ++rep) {
            const int m = 2 + static_cast<int>(r2.uniform_int(11));  // 2..12 canonical pairs
            const int dim = 2 + static_cast<int>(r2.uniform_int(3));
            std::vector<std::vector<double>> diffs;
            std::vector<int> labels;
            std::vector<std::vector<double>> canon;
            for (int p = 0; p < m; ++p) {
                std::vector<double> d(static_cast<size_t>(dim));
                for (auto& v : d) v = r2.gaussian();
                canon.push_back(d);
                diffs.push_back(d);
                labels.push_back(1);
                std::vector<double> neg(d.size());
                for (size_t c = 0; c < d.size(); ++c) neg[c] = -d[c];
                diffs.push_back(neg);
                labels.push_back(-1);
            }
            svm::SvmHyperparams hp;
            const double cs[3] = {0.1, 1.0, 10.0};
            hp.C = cs[rep % 3];
            hp.kernel = (rep % 2 == 0) ? svm::Kernel::LINEAR : svm::Kernel::RBF;
            hp.gamma = 0.8;
            svm::TrainOptions opts;
            opts.kkt_tol = 1e-9;
            const svm::SvmModel model = svm::train_rank_svm(diffs, labels, hp, opts);
            const auto G = hp.kernel == svm::Kernel::RBF ? qp_oracle::anti_gram_rbf(canon, hp.gamma)
                                                         : qp_oracle::anti_gram_linear(canon);
            const double oracle = 2.0 * qp_oracle::box_qp_max(G, hp.C);
            max_gap = std::max(max_gap, std::fabs(model.dual_objective - oracle));
            if (!model.converged)
                fail += " problem " + std::to_string(rep) + " did not converge;";
            max_kkt = std::max(max_kkt, model.kkt_residual);
        }
        if (max_gap > kOracleTol) fail += " dual gap " + fmt(max_gap) + " > " + fmt(kOracleTol) + ";";
        if (max_kkt > kKktLimit) fail += " kkt " + fmt(max_kkt) + " > " + fmt(kKktLimit) + ";";
    }

    // (d) decision oddness on both kernels.
    double max_odd = 0;
    {
        Rng r3(0xACC402);
        for (const svm::Kernel kernel : {svm::Kernel::LINEAR, svm::Kernel::RBF}) {
            std::vector<std::vector<double>> diffs;
            std::vector<int> labels;
            for (int p = 0; p < 8; ++p) {
                std::vector<double> d(3);
                for (auto& v : d) v = r3.gaussian();
                diffs.push_back(d);
                labels.push_back(1);
                std::vector<double> neg{-d[0], -d[1], -d[2]};
                diffs.push_back(neg);
                labels.push_back(-1);
            }
            svm::SvmHyperparams hp;
            hp.kernel = kernel;
            hp.gamma = 0.7;
            const svm::SvmModel model = svm::train_rank_svm(diffs, labels, hp);
            for (int k = 0; k < 1000; ++k) {
                std::vector<double> v{r3.gaussian(), r3.gaussian(), r3.gaussian()};
                std::vector<double> neg{-v[0], -v[1], -v[2]};
                max_odd = std::max(max_odd, std::fabs(model.decision(v) + model.decision(neg)));
            }
        }
        if (max_odd > kOddTol) fail += " oddness " + fmt(max_odd) + " > " + fmt(kOddTol) + ";";
    }

    return {fail.empty(), fail.empty()
                              ? "analytic case within " + fmt(kAnalyticTol) +
                                    "; 50 QP-oracle problems, max dual gap " + fmt(max_gap) +
                                    " (tol " + fmt(kOracleTol) + "), max KKT residual " +
                                    fmt(max_kkt) + " (limit " + fmt(kKktLimit) +
                                    "); decision oddness max " + fmt(max_odd) + " (tol " +
                                    fmt(kOddTol) + ") on 2x1000 vectors"
                              : fail};
}

// --- C5: end-to-end learnability ----------------------------------------------------

Outcome criterion_learnability() {
    constexpr double kGameFloor = 0.65;
    constexpr double kNoiseLo = 0.45, kNoiseHi = 0.55;
    constexpr double kAlpha = 0.05 / 11.0;  // model-table family of 12 cells
    constexpr long kPairCap = 50;
    constexpr double kTimeLimit = 900.0;  // seconds
    if (!g_default_study.built) return {false, "prerequisite default study failed to build"};

    const auto t0 = std::chrono::steady_clock::now();
    learn::CvOptions opts;
    opts.pair_cap_per_session = kPairCap;
    const pipeline::ProcessingCombo mm = pipeline::parse_combo("mm");
    const svm::SvmHyperparams hp;  // linear, C = 1
    const learn::EvalReport game =
        learn::cross_validate(g_default_study.dataset, pipeline::FeatureSet::GAME, mm, hp, opts);
    const learn::EvalReport facial =
        learn::cross_validate(g_default_study.dataset, pipeline::FeatureSet::FACIAL, mm, hp, opts);
    const double elapsed = seconds_since(t0);

    const stats::TTestResult tt = stats::t_test_two_sample(game.fold_accuracy, facial.fold_accuracy);
    const stats::MwuResult mw = stats::mann_whitney_u(game.fold_accuracy, facial.fold_accuracy);

    const bool pass = game.mean_accuracy >= kGameFloor && facial.mean_accuracy >= kNoiseLo &&
                      facial.mean_accuracy <= kNoiseHi && tt.p < kAlpha && mw.p < kAlpha &&
                      elapsed < kTimeLimit;
    return {pass,
            "game mean " + fmt(game.mean_accuracy) + " (floor " + fmt(kGameFloor) +
                "), noise-channel mean " + fmt(facial.mean_accuracy) + " (band " + fmt(kNoiseLo) +
                ".." + fmt(kNoiseHi) + "), t p=" + fmt(tt.p, 3) + " and MW p=" + fmt(mw.p, 3) +
                " vs alpha " + fmt(kAlpha, 3) + "; pair cap " + std::to_string(kPairCap) +
                "/session (subsampled: " + (game.subsampled ? "yes" : "no") + "), " +
                fmt(elapsed, 3) + " s (limit " + fmt(kTimeLimit, 3) + " s)"};
}

// --- C6: ordinal invariance ----------------------------------------------------------

Outcome criterion_ordinal_invariance() {
    // Annotation cues are scaled down so every value stays far inside the
    // range where exp() is finite and strictly increasing in doubles.
    config::StudySettings s = config::defaults();
    s.study.participants = 10;
    s.study.sessions_per = 2;
    s.study.base_seed = 31;
    s.annotator.cue_weights = {{"Score", 0.002}, {"Chasing Player", 0.001}};
    const fs::path out = fresh_dir("ordinal");
    const stages::StageContext ctx{out, s, ""};
    stages::run_simulate(ctx);
    stages::run_trace(ctx);
    stages::run_pipeline(ctx);

    const pipeline::WindowedDataset ds = pipeline::load_dataset_csv((out / "dataset.csv").string());
    double max_abs_y = 0;
    pipeline::WindowedDataset exp_ds = ds;
    for (auto& row : exp_ds.rows) {
        max_abs_y = std::max({max_abs_y, std::fabs(row.y_mu), std::fabs(row.y_rng)});
        row.y_mu = std::exp(row.y_mu);
        row.y_rng = std::exp(row.y_rng);
    }
    if (max_abs_y > 700.0)
        return {false, "annotation magnitude " + fmt(max_abs_y) + " would overflow exp()"};

    std::string fail;
    for (const char* combo : {"mm", "rr"}) {
        std::ostringstream a, b;
        pipeline::write_pairs(
            a, pipeline::pairwise_transform(ds, pipeline::FeatureSet::ALL,
                                            pipeline::parse_combo(combo), 0));
        pipeline::write_pairs(
            b, pipeline::pairwise_transform(exp_ds, pipeline::FeatureSet::ALL,
                                            pipeline::parse_combo(combo), 0));
        if (a.str() != b.str()) fail += std::string(" pair file '") + combo + "' changed;";
    }

    const std::string tau_a = stats::correlation_report(pipeline::to_feature_matrix(ds)).to_csv();
    const std::string tau_b =
        stats::correlation_report(pipeline::to_feature_matrix(exp_ds)).to_csv();
    if (tau_a != tau_b) fail += " correlation table changed;";

    learn::CvOptions opts;
    opts.pair_cap_per_session = 20;
    const pipeline::ProcessingCombo mm = pipeline::parse_combo("mm");
    const svm::SvmHyperparams hp;
    const learn::EvalReport r_a = learn::cross_validate(ds, pipeline::FeatureSet::GAME, mm, hp, opts);
    const learn::EvalReport r_b =
        learn::cross_validate(exp_ds, pipeline::FeatureSet::GAME, mm, hp, opts);
    if (r_a.fold_accuracy != r_b.fold_accuracy) fail += " fold accuracies changed;";

    return {fail.empty(), fail.empty()
                              ? "exp() on all annotation values (|y| <= " + fmt(max_abs_y, 3) +
                                    "): pair files byte-identical (mm, rr), correlation table "
                                    "identical, 10 fold accuracies identical"
                              : fail};
}

// --- C7: determinism -------------------------------------------------------------------

Outcome criterion_determinism() {
    config::StudySettings s = config::defaults();
    s.study.participants = 10;
    s.study.sessions_per = 2;
    s.study.base_seed = 31;
    s.pair_cap = 20;
    stages::TrainSelection sel;
    sel.processing = pipeline::parse_combo("mm");  // one combo across all three feature sets

    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    for (const fs::path& out : {a, b}) {
        const stages::StageContext ctx{out, s, ""};
        stages::run_simulate(ctx);
        stages::run_trace(ctx);
        stages::run_pipeline(ctx);
        stages::run_correlate(ctx);
        stages::run_train(ctx, sel);
        stages::run_report(ctx);
    }
    const bool manifests = slurp(a / "manifest.json") == slurp(b / "manifest.json");
    const bool reports = slurp(a / "report" / "study_report.md") ==
                         slurp(b / "report" / "study_report.md");
    std::string detail = "two full six-stage runs, same base seed: manifest ";
    detail += manifests ? "byte-identical" : "DIFFERS";
    detail += ", report ";
    detail += reports ? "byte-identical" : "DIFFERS";
    return {manifests && reports, detail};
}

// --- C8: auditory halving behind one wall -----------------------------------------------

Outcome criterion_hearing() {
    constexpr int kTrials = 100000;
    constexpr double kTol = 0.01;
    // Same geometry twice: agent six cells from the player, facing away, with
    // either an open sight line or a single wall cell between them.
    std::string text;
    for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 11; ++x) {
            const bool border = x == 0 || y == 0 || x == 10 || y == 8;
            if (border)
                text += '#';
            else if (x == 2 && y == 4)
                text += 'P';
            else if (x == 8 && y == 4)
                text += 'A';
            else if (x == 5 && y == 4)
                text += '#';
            else
                text += '.';
        }
        text += '\n';
    }
    const world::MazeMap walled = world::parse_maze(text);
    std::string open_text = text;
    open_text[text.find('#', text.find('P'))] = '.';
    const world::MazeMap open = world::parse_maze(open_text);

    const agent::AgentConfig cfg;
    const Pose player{cell_center({2, 4}), 0};
    auto frequency = [&](const world::MazeMap& m, uint64_t seed) {
        Rng rng(seed);
        int heard = 0;
        for (int i = 0; i < kTrials; ++i) {
            agent::AgentState st = agent::make_agent(cfg, {cell_center({8, 4}), 0});
            st.pose.heading = 0.0;
            st.hear_charge = 0.4;
            st.hear_timer = 0.0;
            if (agent::sense_player(st, player, m, rng, 1.0) == agent::SenseResult::HEARD) ++heard;
        }
        return static_cast<double>(heard) / kTrials;
    };
    const double p_open = frequency(open, 0xACC801);
    const double p_wall = frequency(walled, 0xACC802);
    const double gap = std::fabs(p_wall - p_open / 2.0);
    return {gap <= kTol && p_open > 0.3,
            "open-field frequency " + fmt(p_open) + ", one-wall frequency " + fmt(p_wall) +
                ", |wall - open/2| = " + fmt(gap, 3) + " (tol " + fmt(kTol, 3) + ") over " +
                std::to_string(kTrials) + " checks"};
}

// --- C9: manifestation monotonicity and endpoints ----------------------------------------

Outcome criterion_manifestations() {
    const agent::ManifestationCurves curves;
    std::string fail;
    const agent::ManifestationParams at0 = agent::derive_manifestations(0.0, curves);
    if (at0.fov_angle != 135.0) fail += " fov angle at f=0 is " + fmt(at0.fov_angle) + " not 135;";
    if (at0.hear_radius != 10.0)
        fail += " hearing radius at f=0 is " + fmt(at0.hear_radius) + " not 10;";

    agent::ManifestationParams prev = at0;
    for (int f = 1; f <= 100; ++f) {
        const agent::ManifestationParams cur =
            agent::derive_manifestations(static_cast<double>(f), curves);
        if (cur.fov_angle > prev.fov_angle) fail += " fov angle rose at f=" + std::to_string(f) + ";";
        if (cur.fov_radius < prev.fov_radius)
            fail += " fov radius fell at f=" + std::to_string(f) + ";";
        if (cur.hear_radius > prev.hear_radius)
            fail += " hearing radius rose at f=" + std::to_string(f) + ";";
        if (cur.hear_prob_base < prev.hear_prob_base)
            fail += " hearing probability fell at f=" + std::to_string(f) + ";";
        if (cur.move_speed < prev.move_speed)
            fail += " movement speed fell at f=" + std::to_string(f) + ";";
        if (cur.rot_speed < prev.rot_speed)
            fail += " rotation speed fell at f=" + std::to_string(f) + ";";
        if (cur.search_turns > prev.search_turns)
            fail += " search turns rose at f=" + std::to_string(f) + ";";
        if (cur.risk_factor < prev.risk_factor)
            fail += " risk factor fell at f=" + std::to_string(f) + ";";
        if (cur.jitter < prev.jitter) fail += " jitter fell at f=" + std::to_string(f) + ";";
        prev = cur;
    }
    return {fail.empty(),
            fail.empty() ? "f = 0..100: nine behaviour curves monotone, endpoints 135 deg / 10 m "
                           "exact at f=0"
                         : fail};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"C1 structure", criterion_structure},
        {"C2 condition bands", criterion_condition_bands},
        {"C3 rank-correlation oracle", criterion_tau_oracle},
        {"C4 solver correctness", criterion_solver},
        {"C5 end-to-end learnability", criterion_learnability},
        {"C6 ordinal invariance", criterion_ordinal_invariance},
        {"C7 determinism", criterion_determinism},
        {"C8 auditory halving", criterion_hearing},
        {"C9 manifestation monotonicity", criterion_manifestations},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("%-30s %s — %s\n", e.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures > 0) std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
