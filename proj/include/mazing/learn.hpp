#pragma once
// Preference-learning harness on top of the rank SVM: per-fold feature
// standardization, cross-participant 10-fold validation, hyperparameter grid
// search over powers of ten, and pairwise model comparison with a corrected
// significance threshold.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mazing/pipeline.hpp"
#include "mazing/svm.hpp"

namespace mazing::learn {

inline constexpr int kFolds = 10;

// Reference operating point (C, then RBF gamma) reported for the
// game-features mu->mu model in the original human-participant study; kept
// for regression context only, never asserted against synthetic data.
inline constexpr double kReferenceBestC = 0.1;
inline constexpr double kReferenceBestGamma = 0.5;

// Column statistics fitted on training rows only; test rows reuse them.
// Differences cancel the means, so scaling a difference vector by 1/sd equals
// differencing standardized rows.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> sd;  // exact-zero spread maps to 1 (column freezes at 0)

    static Standardizer fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> transform(std::span<const double> row) const;
    void scale_diff(std::vector<double>& diff) const;  // divide by sd, in place
};

struct CvOptions {
    double tie_epsilon = 0.0;
    long pair_cap_per_session = 0;  // 0 = keep every comparison; >0 caps the
                                    // canonical training comparisons per session
    svm::TrainOptions train;
    int threads = 0;  // 0 = folds in parallel; 1 = strictly sequential
};

struct EvalReport {
    pipeline::FeatureSet feature_set = pipeline::FeatureSet::GAME;
    pipeline::ProcessingCombo processing;
    svm::SvmHyperparams hp;
    std::vector<double> fold_accuracy;  // kFolds entries, fold order
    std::vector<long> fold_train_pairs;
    std::vector<long> fold_test_pairs;
    double mean_accuracy = 0;
    double max_accuracy = 0;
    double ci_half_width = 0;  // 95% Student-t interval on the fold accuracies
    long pair_cap = 0;         // 0 = off
    bool subsampled = false;   // true when the cap actually dropped comparisons
};

// Thin adapter: trains the bias-free rank SVM on labeled difference vectors.
// Callers are responsible for feature scaling (cross_validate standardizes
// per training fold).
svm::SvmModel train_svm(const pipeline::PreferencePairs& pairs, const svm::SvmHyperparams& hp,
                        const svm::TrainOptions& opts = {});

// Fraction of pairs whose label matches the model's predicted order; a zero
// decision value counts as the deterministic "+1" fallback, so the constant
// model scores exactly 0.5 on any antisymmetric pair set.
double pair_accuracy(const svm::SvmModel& model, const pipeline::PreferencePairs& pairs);

// Sorted participants split into kFolds contiguous test groups of equal size.
// Throws DataError when the count does not divide evenly.
std::vector<std::vector<std::string>> fold_partitions(std::vector<std::string> participants);

// Cross-participant validation: for each fold, the group's participants are
// held out, features are standardized from the remaining rows, pairs are
// built within train and within test separately, and fold accuracy is the
// fraction of correctly ordered test pairs.
EvalReport cross_validate(const pipeline::WindowedDataset& ds, pipeline::FeatureSet set,
                          const pipeline::ProcessingCombo& combo, const svm::SvmHyperparams& hp,
                          const CvOptions& opts = {});

struct GridCell {
    svm::SvmHyperparams hp;
    EvalReport report;
};
struct GridSearchResult {
    svm::SvmHyperparams best;
    EvalReport best_report;
    std::vector<GridCell> table;  // 7 linear cells (C ascending), then the
                                  // 7x7 RBF block (C major, gamma minor)
};

// Exhaustive search over C in {1e-3..1e3} for the linear kernel and the full
// C x gamma grid for RBF; ties go to the earliest cell in table order (linear
// first, then smaller C, then smaller gamma).
GridSearchResult grid_search(const pipeline::WindowedDataset& ds, pipeline::FeatureSet set,
                             const pipeline::ProcessingCombo& combo, const CvOptions& opts = {});

struct ComparisonCell {
    std::size_t i = 0, j = 0;  // report indices, i < j
    double t_stat = 0, t_p = 1;
    double u_stat = 0, u_p = 1;
    bool significant_t = false, significant_u = false;
};
struct ComparisonMatrix {
    double alpha = 0.05;
    double threshold = 0;  // alpha / (k - 1)
    std::vector<ComparisonCell> cells;  // all i < j, row-major
};

// Pairwise t-test + Mann-Whitney over fold accuracies, flagged at
// alpha / (k - 1) where k = number of reports.
ComparisonMatrix model_comparison(const std::vector<EvalReport>& reports, double alpha = 0.05);

// Fold rows as CSV with `#` metadata comments; the one-line JSON summary
// record round-trips through parse_summary_record.
void write_report_csv(std::ostream& os, const EvalReport& r);
std::string report_summary_record(const EvalReport& r);
EvalReport parse_summary_record(const std::string& line);

}  // namespace mazing::learn
