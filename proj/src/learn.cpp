#include "mazing/learn.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mazing/common.hpp"
#include "mazing/csv.hpp"
#include "mazing/stats.hpp"

namespace mazing::learn {

using pipeline::FeatureSet;
using pipeline::PreferencePairs;
using pipeline::Processing;
using pipeline::ProcessingCombo;
using pipeline::WindowedDataset;
using pipeline::WindowRow;

// --- standardization ----------------------------------------------------------

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DataError("standardizer: no rows to fit");
    const size_t dim = rows.front().size();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.sd.assign(dim, 0.0);
    for (const auto& r : rows) {
        if (r.size() != dim) throw DataError("standardizer: inconsistent row widths");
        for (size_t c = 0; c < dim; ++c) s.mean[c] += r[c];
    }
    const double n = static_cast<double>(rows.size());
    for (size_t c = 0; c < dim; ++c) s.mean[c] /= n;
    for (const auto& r : rows)
        for (size_t c = 0; c < dim; ++c) {
            const double d = r[c] - s.mean[c];
            s.sd[c] += d * d;
        }
    for (size_t c = 0; c < dim; ++c) {
        s.sd[c] = std::sqrt(s.sd[c] / n);
        if (s.sd[c] == 0.0) s.sd[c] = 1.0;  // constant column: freeze at 0, don't blow up
    }
    return s;
}

std::vector<double> Standardizer::transform(std::span<const double> row) const {
    if (row.size() != mean.size()) throw DataError("standardizer: row width mismatch");
    std::vector<double> out(row.size());
    for (size_t c = 0; c < row.size(); ++c) out[c] = (row[c] - mean[c]) / sd[c];
    return out;
}

void Standardizer::scale_diff(std::vector<double>& diff) const {
    if (diff.size() != sd.size()) throw DataError("standardizer: diff width mismatch");
    for (size_t c = 0; c < diff.size(); ++c) diff[c] /= sd[c];
}

// --- pair construction helpers -------------------------------------------------

svm::SvmModel train_svm(const PreferencePairs& pairs, const svm::SvmHyperparams& hp,
                        const svm::TrainOptions& opts) {
    return svm::train_rank_svm(pairs.diffs, pairs.labels, hp, opts);
}

double pair_accuracy(const svm::SvmModel& model, const PreferencePairs& pairs) {
    if (pairs.diffs.empty()) throw DataError("pair accuracy: no pairs to score");
    long correct = 0;
    for (size_t i = 0; i < pairs.diffs.size(); ++i) {
        const double f = model.decision(pairs.diffs[i]);
        const int predicted = f > 0 ? 1 : f < 0 ? -1 : 1;  // zero falls back to "+1"
        if (predicted == pairs.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(pairs.diffs.size());
}

std::vector<std::vector<std::string>> fold_partitions(std::vector<std::string> participants) {
    std::sort(participants.begin(), participants.end());
    participants.erase(std::unique(participants.begin(), participants.end()), participants.end());
    const size_t n = participants.size();
    if (n == 0 || n % kFolds != 0)
        throw DataError("cross-validation: participant count " + std::to_string(n) +
                        " does not divide into " + std::to_string(kFolds) + " groups");
    const size_t g = n / kFolds;
    std::vector<std::vector<std::string>> parts(kFolds);
    for (size_t k = 0; k < static_cast<size_t>(kFolds); ++k)
        parts[k].assign(participants.begin() + static_cast<long>(k * g),
                        participants.begin() + static_cast<long>((k + 1) * g));
    return parts;
}

namespace {

// Session-by-session pair construction for the rows of the kept participants,
// optionally capping the canonical comparisons per session with an even
// stride. Mirror entries always travel with their canonical partner, so the
// result stays antisymmetric.
PreferencePairs gather_pairs(const WindowedDataset& ds, const std::set<std::string>& keep,
                             FeatureSet set, const ProcessingCombo& combo, double tie_epsilon,
                             long cap, bool* capped) {
    std::map<std::pair<std::string, int>, size_t> group_of;
    std::vector<std::vector<const WindowRow*>> groups;
    for (const auto& row : ds.rows) {
        if (!keep.count(row.participant)) continue;
        const auto key = std::make_pair(row.participant, row.session);
        auto [it, inserted] = group_of.try_emplace(key, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(&row);
    }

    WindowedDataset sub;
    sub.feature_names = ds.feature_names;
    sub.feature_groups = ds.feature_groups;

    PreferencePairs out;
    bool meta_set = false;
    for (const auto& group : groups) {
        sub.rows.clear();
        for (const WindowRow* r : group) sub.rows.push_back(*r);
        PreferencePairs p = pipeline::pairwise_transform(sub, set, combo, tie_epsilon);
        if (!meta_set) {
            out.feature_names = p.feature_names;
            out.feature_set = p.feature_set;
            out.processing = p.processing;
            out.scope = p.scope;
            meta_set = true;
        }
        const long canon = static_cast<long>(p.diffs.size()) / 2;
        if (cap > 0 && canon > cap) {
            if (capped) *capped = true;
            for (long i = 0; i < cap; ++i) {
                const long c = i * canon / cap;  // strictly increasing while cap < canon
                out.diffs.push_back(std::move(p.diffs[2 * c]));
                out.labels.push_back(p.labels[2 * c]);
                out.diffs.push_back(std::move(p.diffs[2 * c + 1]));
                out.labels.push_back(p.labels[2 * c + 1]);
            }
        } else {
            for (size_t i = 0; i < p.diffs.size(); ++i) {
                out.diffs.push_back(std::move(p.diffs[i]));
                out.labels.push_back(p.labels[i]);
            }
        }
    }
    return out;
}

// Input-feature rows (selected columns, selected processing) for the kept
// participants; this is what the fold standardizer is fitted on.
std::vector<std::vector<double>> input_rows(const WindowedDataset& ds,
                                            const std::set<std::string>& keep,
                                            const std::vector<int>& subset, Processing input) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : ds.rows) {
        if (!keep.count(row.participant)) continue;
        const std::vector<double>& src = input == Processing::MU ? row.mu : row.rng;
        std::vector<double> x(subset.size());
        for (size_t c = 0; c < subset.size(); ++c) x[c] = src[static_cast<size_t>(subset[c])];
        rows.push_back(std::move(x));
    }
    return rows;
}

struct FoldOutcome {
    double accuracy = 0;
    long train_pairs = 0;
    long test_pairs = 0;
    bool subsampled = false;
};

}  // namespace

EvalReport cross_validate(const WindowedDataset& ds, FeatureSet set, const ProcessingCombo& combo,
                          const svm::SvmHyperparams& hp, const CvOptions& opts) {
    std::vector<std::string> participants;
    participants.reserve(ds.rows.size());
    for (const auto& row : ds.rows) participants.push_back(row.participant);
    const auto partitions = fold_partitions(std::move(participants));

    std::set<std::string> everyone;
    for (const auto& part : partitions) everyone.insert(part.begin(), part.end());
    const std::vector<int> subset = pipeline::feature_subset(ds, set);

    auto run_fold = [&](int k) -> FoldOutcome {
        std::set<std::string> test(partitions[static_cast<size_t>(k)].begin(),
                                   partitions[static_cast<size_t>(k)].end());
        std::set<std::string> train;
        for (const auto& p : everyone)
            if (!test.count(p)) train.insert(p);

        FoldOutcome fo;
        PreferencePairs train_pairs = gather_pairs(ds, train, set, combo, opts.tie_epsilon,
                                                   opts.pair_cap_per_session, &fo.subsampled);
        PreferencePairs test_pairs =
            gather_pairs(ds, test, set, combo, opts.tie_epsilon, 0, nullptr);
        if (train_pairs.diffs.empty())
            throw DataError("cross-validation: fold " + std::to_string(k) + " has no training pairs");
        if (test_pairs.diffs.empty())
            throw DataError("cross-validation: fold " + std::to_string(k) + " has no test pairs");

        const Standardizer std_fit = Standardizer::fit(input_rows(ds, train, subset, combo.input));
        for (auto& d : train_pairs.diffs) std_fit.scale_diff(d);
        for (auto& d : test_pairs.diffs) std_fit.scale_diff(d);

        const svm::SvmModel model =
            svm::train_rank_svm(train_pairs.diffs, train_pairs.labels, hp, opts.train);
        fo.accuracy = pair_accuracy(model, test_pairs);
        fo.train_pairs = static_cast<long>(train_pairs.diffs.size());
        fo.test_pairs = static_cast<long>(test_pairs.diffs.size());
        return fo;
    };

    std::vector<FoldOutcome> outcomes(kFolds);
    if (opts.threads == 1) {
        for (int k = 0; k < kFolds; ++k) outcomes[static_cast<size_t>(k)] = run_fold(k);
    } else {
        std::vector<std::future<FoldOutcome>> jobs;
        jobs.reserve(kFolds);
        for (int k = 0; k < kFolds; ++k)
            jobs.push_back(std::async(std::launch::async, run_fold, k));
        for (int k = 0; k < kFolds; ++k) outcomes[static_cast<size_t>(k)] = jobs[static_cast<size_t>(k)].get();
    }

    EvalReport r;
    r.feature_set = set;
    r.processing = combo;
    r.hp = hp;
    r.pair_cap = opts.pair_cap_per_session;
    for (const auto& fo : outcomes) {
        r.fold_accuracy.push_back(fo.accuracy);
        r.fold_train_pairs.push_back(fo.train_pairs);
        r.fold_test_pairs.push_back(fo.test_pairs);
        r.subsampled = r.subsampled || fo.subsampled;
    }
    double sum = 0;
    r.max_accuracy = r.fold_accuracy.front();
    for (double a : r.fold_accuracy) {
        sum += a;
        r.max_accuracy = std::max(r.max_accuracy, a);
    }
    r.mean_accuracy = sum / static_cast<double>(kFolds);
    double ss = 0;
    for (double a : r.fold_accuracy) ss += (a - r.mean_accuracy) * (a - r.mean_accuracy);
    const double sd = std::sqrt(ss / static_cast<double>(kFolds - 1));
    r.ci_half_width = stats::student_t_quantile(0.975, static_cast<double>(kFolds - 1)) * sd /
                      std::sqrt(static_cast<double>(kFolds));
    return r;
}

GridSearchResult grid_search(const WindowedDataset& ds, FeatureSet set,
                             const ProcessingCombo& combo, const CvOptions& opts) {
    static constexpr double kGrid[] = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};

    GridSearchResult result;
    for (double c : kGrid) {
        svm::SvmHyperparams hp;
        hp.C = c;
        hp.kernel = svm::Kernel::LINEAR;
        result.table.push_back({hp, {}});
    }
    for (double c : kGrid)
        for (double g : kGrid) {
            svm::SvmHyperparams hp;
            hp.C = c;
            hp.kernel = svm::Kernel::RBF;
            hp.gamma = g;
            result.table.push_back({hp, {}});
        }

    size_t best = 0;
    for (size_t i = 0; i < result.table.size(); ++i) {
        result.table[i].report = cross_validate(ds, set, combo, result.table[i].hp, opts);
        if (result.table[i].report.mean_accuracy > result.table[best].report.mean_accuracy)
            best = i;  // strict > keeps the earliest cell on ties
    }
    result.best = result.table[best].hp;
    result.best_report = result.table[best].report;
    return result;
}

ComparisonMatrix model_comparison(const std::vector<EvalReport>& reports, double alpha) {
    const size_t k = reports.size();
    if (k < 2) throw DataError("model comparison: need at least 2 reports");
    for (const auto& r : reports)
        if (r.fold_accuracy.size() != reports.front().fold_accuracy.size())
            throw DataError("model comparison: fold counts differ between reports");

    ComparisonMatrix m;
    m.alpha = alpha;
    m.threshold = alpha / static_cast<double>(k - 1);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) {
            ComparisonCell cell;
            cell.i = i;
            cell.j = j;
            const auto t = stats::t_test_two_sample(reports[i].fold_accuracy, reports[j].fold_accuracy);
            const auto u = stats::mann_whitney_u(reports[i].fold_accuracy, reports[j].fold_accuracy);
            cell.t_stat = t.t;
            cell.t_p = t.p;
            cell.u_stat = u.u;
            cell.u_p = u.p;
            cell.significant_t = t.p < m.threshold;
            cell.significant_u = u.p < m.threshold;
            m.cells.push_back(cell);
        }
    return m;
}

// --- serialization --------------------------------------------------------------

void write_report_csv(std::ostream& os, const EvalReport& r) {
    os << "# feature_set: " << pipeline::feature_set_name(r.feature_set) << "\n";
    os << "# processing: " << pipeline::combo_name(r.processing) << "\n";
    os << "# kernel: " << svm::kernel_name(r.hp.kernel) << "\n";
    os << "# C: " << fmt_double_shortest(r.hp.C) << "\n";
    if (r.hp.kernel == svm::Kernel::RBF) os << "# gamma: " << fmt_double_shortest(r.hp.gamma) << "\n";
    os << "# pair_cap: " << r.pair_cap << "\n";
    os << "# subsampled: " << (r.subsampled ? 1 : 0) << "\n";
    os << "fold,train_pairs,test_pairs,accuracy\n";
    for (size_t k = 0; k < r.fold_accuracy.size(); ++k)
        os << k << ',' << r.fold_train_pairs[k] << ',' << r.fold_test_pairs[k] << ','
           << fmt_double_shortest(r.fold_accuracy[k]) << "\n";
}

std::string report_summary_record(const EvalReport& r) {
    nlohmann::json j;
    j["feature_set"] = pipeline::feature_set_name(r.feature_set);
    j["processing"] = pipeline::combo_name(r.processing);
    j["kernel"] = svm::kernel_name(r.hp.kernel);
    j["C"] = r.hp.C;
    j["gamma"] = r.hp.gamma;
    j["folds"] = r.fold_accuracy.size();
    j["fold_accuracy"] = r.fold_accuracy;
    j["fold_train_pairs"] = r.fold_train_pairs;
    j["fold_test_pairs"] = r.fold_test_pairs;
    j["mean"] = r.mean_accuracy;
    j["max"] = r.max_accuracy;
    j["ci95"] = r.ci_half_width;
    j["pair_cap"] = r.pair_cap;
    j["subsampled"] = r.subsampled;
    return j.dump();
}

EvalReport parse_summary_record(const std::string& line) {
    try {
        const nlohmann::json j = nlohmann::json::parse(line);
        EvalReport r;
        r.feature_set = pipeline::parse_feature_set(j.at("feature_set").get<std::string>());
        r.processing = pipeline::parse_combo(j.at("processing").get<std::string>());
        r.hp.kernel = svm::parse_kernel(j.at("kernel").get<std::string>());
        r.hp.C = j.at("C").get<double>();
        r.hp.gamma = j.at("gamma").get<double>();
        r.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
        r.fold_train_pairs = j.at("fold_train_pairs").get<std::vector<long>>();
        r.fold_test_pairs = j.at("fold_test_pairs").get<std::vector<long>>();
        r.mean_accuracy = j.at("mean").get<double>();
        r.max_accuracy = j.at("max").get<double>();
        r.ci_half_width = j.at("ci95").get<double>();
        r.pair_cap = j.at("pair_cap").get<long>();
        r.subsampled = j.at("subsampled").get<bool>();
        if (r.fold_accuracy.size() != j.at("folds").get<size_t>() ||
            r.fold_accuracy.size() != r.fold_train_pairs.size() ||
            r.fold_accuracy.size() != r.fold_test_pairs.size())
            throw DataError("report summary: inconsistent fold counts");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report summary: ") + e.what());
    }
}

}  // namespace mazing::learn
