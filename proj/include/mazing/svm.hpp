#pragma once
// From-scratch soft-margin kernel SVM, in two flavors:
//
//  * train_rank_svm — the ranking core. Input is an antisymmetric set of
//    difference vectors (every (d, +1) paired with (-d, -1)). The bias is
//    fixed at zero and mirror duals are tied, which makes the decision
//    function exactly odd and reduces the dual to a box-constrained QP over
//    one representative per mirror pair, solved by exact coordinate descent.
//
//  * train_biased_svm — a general binary SVM with a free bias, solved by
//    SMO-style maximal-violating-pair updates under the equality constraint.
//
// Both stop when the largest KKT violation drops to kkt_tol or the pass cap
// is hit (converged=false then; callers decide how loud to complain).

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mazing::svm {

enum class Kernel { LINEAR, RBF };

const char* kernel_name(Kernel k);
Kernel parse_kernel(const std::string& name);  // throws ConfigError

struct SvmHyperparams {
    double C = 1.0;
    Kernel kernel = Kernel::LINEAR;
    double gamma = 0.5;  // RBF width, ignored for LINEAR
};

struct TrainOptions {
    double kkt_tol = 1e-3;
    long max_passes = 100000;
    std::vector<double>* objective_trace = nullptr;  // dual objective per pass
};

struct SvmModel {
    Kernel kernel = Kernel::LINEAR;
    double gamma = 0.5;
    bool pairwise = false;  // true: antisymmetrized ranking model, bias == 0

    // pairwise: one canonical difference vector per mirror pair with tied
    // dual coefficient; plain: support vectors with alpha_i * lambda_i.
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coeffs;
    double bias = 0;

    // Diagnostics from training.
    long iterations = 0;         // passes (rank) or working-set updates (biased)
    double kkt_residual = 0;     // largest violation at stop
    bool converged = false;
    double dual_objective = 0;   // value of the full dual at stop
    double sum_alpha_lambda = 0; // equality-constraint residual (0 exactly for rank)

    size_t dimension() const;
    double decision(std::span<const double> x) const;
    // LINEAR models only: the explicit primal weight vector.
    std::vector<double> linear_weights() const;
};

// Ranking trainer. `diffs`/`labels` hold the full antisymmetric set; the
// canonical representative of each mirror pair is the +1-labeled entry.
// Throws DataError on fewer than 2 rows, a single-class set, or labels
// outside {-1, +1}; ConfigError on bad hyperparameters.
SvmModel train_rank_svm(const std::vector<std::vector<double>>& diffs,
                        const std::vector<int>& labels, const SvmHyperparams& hp,
                        const TrainOptions& opts = {});

// General biased trainer on labeled points.
SvmModel train_biased_svm(const std::vector<std::vector<double>>& points,
                          const std::vector<int>& labels, const SvmHyperparams& hp,
                          const TrainOptions& opts = {});

struct OrderPrediction {
    bool i_over_j = true;  // deterministic fallback on a tie
    bool tie = false;
    double decision = 0;   // f(x_i - x_j)
};

// Ranks x_i against x_j through the model's decision value at x_i - x_j.
OrderPrediction predict_order(const SvmModel& model, std::span<const double> xi,
                              std::span<const double> xj);

// Versioned flat-file round trip.
void save_model(std::ostream& os, const SvmModel& model);
SvmModel load_model(std::istream& is);
void save_model_file(const std::string& path, const SvmModel& model);
SvmModel load_model_file(const std::string& path);

}  // namespace mazing::svm
