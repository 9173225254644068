#pragma once
// Ordinal statistics core: tie-adjusted Kendall correlation with a three-way
// p-value policy, Bonferroni thresholds, a pooled two-sample t-test and the
// Mann-Whitney U test (exact for small samples), plus the correlation report
// emitted by the analysis CLI.

#include <span>
#include <string>
#include <vector>

namespace mazing::stats {

// --- special functions ------------------------------------------------------

double normal_cdf(double z);
// Regularized incomplete beta I_x(a, b) via continued fraction.
double reg_inc_beta(double a, double b, double x);
// Two-tailed p for Student's t with df degrees of freedom.
double student_t_two_tailed_p(double t, double df);
// Upper quantile: t such that P(T <= t) = prob (prob in (0.5, 1)).
double student_t_quantile(double prob, double df);

// --- Kendall tau-b ----------------------------------------------------------

struct TauResult {
    double tau = 0;
    double p = 1;
    long n = 0;
    long long s = 0;  // concordant minus discordant
    enum Regime { UNDEFINED, EXACT, NORMAL_CC, NORMAL } regime = UNDEFINED;
    bool defined = false;
};

// Tie-adjusted tau-b. p-value policy:
//   n <= 10       -> exact permutation null (inversion-count DP when tie-free,
//                    multiset permutation enumeration under ties)
//   11 <= n <= 30 -> normal approximation with continuity correction
//   n  > 30       -> plain normal approximation (tie-corrected variance)
// Constant input (all x or all y tied) leaves the result flagged undefined.
TauResult kendall_tau(std::span<const double> x, std::span<const double> y);

inline double bonferroni_threshold(double alpha, long m) { return alpha / static_cast<double>(m); }

// --- two-sample tests -------------------------------------------------------

struct TTestResult {
    double t = 0, p = 1, df = 0;
    bool degenerate = false;  // pooled variance was exactly zero
};
TTestResult t_test_two_sample(std::span<const double> a, std::span<const double> b);

struct MwuResult {
    double u = 0;  // U statistic of the first sample
    double p = 1;
    bool exact = false;  // exact enumeration used (combined n <= 12)
};
MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

// --- correlation report -----------------------------------------------------

// Column view of an aligned windowed dataset: per feature, the window means
// and window value ranges, plus the same two processings of the annotation.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<std::string> groups;             // display grouping per feature
    std::vector<std::vector<double>> mu;         // [feature][row]
    std::vector<std::vector<double>> rng;        // [feature][row]
    std::vector<double> y_mu, y_rng;             // annotation columns
};

struct CorrelationRow {
    std::string feature, group;
    std::string processing;  // "mu" or "rng"
    TauResult tau;
    bool sig_05 = false, sig_01 = false;
};

struct CorrelationReport {
    std::vector<CorrelationRow> rows;
    long m = 0;  // number of features (correction family size)
    double alpha = 0.05, thr_05 = 0, thr_01 = 0;
    std::string to_csv() const;
    std::string to_text() const;
};

// One mu row and one rng row per feature, Bonferroni thresholds alpha/m and
// (alpha/5)/m with m = number of features.
CorrelationReport correlation_report(const FeatureMatrix& fm, double alpha = 0.05);

}  // namespace mazing::stats
