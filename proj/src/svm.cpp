#include "mazing/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mazing/common.hpp"
#include "mazing/csv.hpp"

namespace mazing::svm {

namespace {

constexpr size_t kGramCap = 4096;  // precompute the Gram matrix up to this many rows

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sq_dist_neg(std::span<const double> a, std::span<const double> b) {
    // |a - (-b)|^2
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] + b[i];
        s += d * d;
    }
    return s;
}

double k_plain(Kernel k, double gamma, std::span<const double> a, std::span<const double> b) {
    return k == Kernel::LINEAR ? dot(a, b) : std::exp(-gamma * sq_dist(a, b));
}

// Antisymmetrized kernel K(a,b) - K(a,-b): the effective kernel once mirror
// duals are tied. Odd in each argument.
double k_anti(Kernel k, double gamma, std::span<const double> a, std::span<const double> b) {
    if (k == Kernel::LINEAR) return 2.0 * dot(a, b);
    return std::exp(-gamma * sq_dist(a, b)) - std::exp(-gamma * sq_dist_neg(a, b));
}

void validate_inputs(const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
                     const SvmHyperparams& hp) {
    if (!(hp.C > 0)) throw ConfigError("C must be positive");
    if (hp.kernel == Kernel::RBF && !(hp.gamma > 0)) throw ConfigError("gamma must be positive");
    if (x.size() != labels.size()) throw DataError("row/label count mismatch");
    if (x.size() < 2) throw DataError("training needs at least 2 comparisons");
    bool pos = false, neg = false;
    for (int l : labels) {
        if (l == 1)
            pos = true;
        else if (l == -1)
            neg = true;
        else
            throw DataError("labels must be +1 or -1");
    }
    if (!pos || !neg) throw DataError("degenerate single-class training set");
    for (const auto& row : x)
        if (row.size() != x.front().size()) throw DataError("inconsistent feature dimensions");
}

}  // namespace

const char* kernel_name(Kernel k) { return k == Kernel::LINEAR ? "linear" : "rbf"; }

Kernel parse_kernel(const std::string& name) {
    std::string s;
    for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "linear") return Kernel::LINEAR;
    if (s == "rbf") return Kernel::RBF;
    throw ConfigError("unknown kernel: " + name + " (expected linear|rbf)");
}

size_t SvmModel::dimension() const {
    return support_vectors.empty() ? 0 : support_vectors.front().size();
}

double SvmModel::decision(std::span<const double> x) const {
    double f = bias;
    for (size_t i = 0; i < support_vectors.size(); ++i) {
        const auto& sv = support_vectors[i];
        f += coeffs[i] * (pairwise ? k_anti(kernel, gamma, sv, x)
                                   : k_plain(kernel, gamma, sv, x));
    }
    return f;
}

std::vector<double> SvmModel::linear_weights() const {
    if (kernel != Kernel::LINEAR)
        throw ConfigError("linear_weights is only defined for LINEAR kernels");
    std::vector<double> w(dimension(), 0.0);
    for (size_t i = 0; i < support_vectors.size(); ++i) {
        const double scale = pairwise ? 2.0 * coeffs[i] : coeffs[i];
        for (size_t c = 0; c < w.size(); ++c) w[c] += scale * support_vectors[i][c];
    }
    return w;
}

SvmModel train_rank_svm(const std::vector<std::vector<double>>& diffs,
                        const std::vector<int>& labels, const SvmHyperparams& hp,
                        const TrainOptions& opts) {
    validate_inputs(diffs, labels, hp);

    // Canonical representative of each mirror pair: the +1-labeled entry.
    std::vector<std::vector<double>> d;
    for (size_t i = 0; i < diffs.size(); ++i)
        if (labels[i] == 1) d.push_back(diffs[i]);
    const size_t m = d.size();
    const size_t dim = d.front().size();
    const double C = hp.C;

    // Reduced dual: maximize sum(beta) - 1/2 beta' G beta over [0,C]^m with
    // G_pq = K(d_p,d_q) - K(d_p,-d_q); the full dual value is twice this.
    std::vector<std::vector<double>> G;
    const bool use_gram = hp.kernel == Kernel::RBF && m <= kGramCap;
    if (use_gram) {
        G.assign(m, std::vector<double>(m));
        for (size_t p = 0; p < m; ++p)
            for (size_t q = p; q < m; ++q) G[p][q] = G[q][p] = k_anti(hp.kernel, hp.gamma, d[p], d[q]);
    }
    std::vector<double> diag(m);
    for (size_t p = 0; p < m; ++p)
        diag[p] = use_gram ? G[p][p] : k_anti(hp.kernel, hp.gamma, d[p], d[p]);

    std::vector<double> beta(m, 0.0);
    std::vector<double> f(m, 0.0);  // f_p = (G beta)_p, maintained incrementally
    std::vector<double> w;          // LINEAR fast path: f(x) = w . x
    if (hp.kernel == Kernel::LINEAR) w.assign(dim, 0.0);

    auto f_at = [&](size_t p) {
        return hp.kernel == Kernel::LINEAR ? dot(w, d[p]) : f[p];
    };
    auto apply_delta = [&](size_t p, double delta) {
        beta[p] += delta;
        if (hp.kernel == Kernel::LINEAR) {
            for (size_t c = 0; c < dim; ++c) w[c] += 2.0 * delta * d[p][c];
        } else if (use_gram) {
            for (size_t q = 0; q < m; ++q) f[q] += delta * G[p][q];
        } else {
            for (size_t q = 0; q < m; ++q) f[q] += delta * k_anti(hp.kernel, hp.gamma, d[p], d[q]);
        }
    };

    long pass = 0;
    double viol = std::numeric_limits<double>::infinity();
    for (; pass < opts.max_passes; ) {
        for (size_t p = 0; p < m; ++p) {
            const double grad = 1.0 - f_at(p);
            if (diag[p] <= 1e-12) {
                // Zero difference vector: the kernel column vanishes, the dual
                // is linear in this coordinate, so it pegs to the box.
                if (grad > 0 && beta[p] != C) beta[p] = C;
                continue;
            }
            const double target = std::clamp(beta[p] + grad / diag[p], 0.0, C);
            const double delta = target - beta[p];
            if (delta != 0.0) apply_delta(p, delta);
        }
        ++pass;

        viol = 0.0;
        double reduced = 0.0;
        for (size_t p = 0; p < m; ++p) {
            const double fp = f_at(p);
            const double grad = 1.0 - fp;
            if (diag[p] > 1e-12) {
                if (beta[p] < C - 1e-12) viol = std::max(viol, grad);
                if (beta[p] > 1e-12) viol = std::max(viol, -grad);
            }
            reduced += beta[p] - 0.5 * beta[p] * fp;
        }
        if (opts.objective_trace) opts.objective_trace->push_back(2.0 * reduced);
        if (viol <= opts.kkt_tol) break;
    }

    SvmModel model;
    model.kernel = hp.kernel;
    model.gamma = hp.gamma;
    model.pairwise = true;
    model.bias = 0.0;
    model.iterations = pass;
    model.kkt_residual = viol;
    model.converged = viol <= opts.kkt_tol;
    model.sum_alpha_lambda = 0.0;  // mirror duals are tied by construction

    // Rebuild the linear weights from scratch so the reported objective is
    // free of incremental drift.
    if (hp.kernel == Kernel::LINEAR) {
        std::fill(w.begin(), w.end(), 0.0);
        for (size_t p = 0; p < m; ++p)
            for (size_t c = 0; c < dim; ++c) w[c] += 2.0 * beta[p] * d[p][c];
    }
    double reduced = 0.0;
    for (size_t p = 0; p < m; ++p) reduced += beta[p] - 0.5 * beta[p] * f_at(p);
    model.dual_objective = 2.0 * reduced;

    for (size_t p = 0; p < m; ++p)
        if (beta[p] > 0.0) {
            model.support_vectors.push_back(d[p]);
            model.coeffs.push_back(beta[p]);
        }
    return model;
}

SvmModel train_biased_svm(const std::vector<std::vector<double>>& points,
                          const std::vector<int>& labels, const SvmHyperparams& hp,
                          const TrainOptions& opts) {
    validate_inputs(points, labels, hp);
    const size_t n = points.size();
    if (n > kGramCap) throw DataError("biased SVM training set too large");
    const double C = hp.C;

    std::vector<std::vector<double>> K(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            K[i][j] = K[j][i] = k_plain(hp.kernel, hp.gamma, points[i], points[j]);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> g(n, -1.0);  // gradient of 1/2 a'Qa - sum(a)
    auto Q = [&](size_t i, size_t j) { return labels[i] * labels[j] * K[i][j]; };

    long iter = 0;
    double mM = std::numeric_limits<double>::infinity();
    double m_val = 0, M_val = 0;
    for (; iter < opts.max_passes; ++iter) {
        // Maximal violating pair over I_up / I_low.
        long i_sel = -1, j_sel = -1;
        m_val = -std::numeric_limits<double>::infinity();
        M_val = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) {
            const double v = -labels[i] * g[i];
            const bool in_up = (labels[i] == 1 && alpha[i] < C - 1e-12) ||
                               (labels[i] == -1 && alpha[i] > 1e-12);
            const bool in_low = (labels[i] == -1 && alpha[i] < C - 1e-12) ||
                                (labels[i] == 1 && alpha[i] > 1e-12);
            if (in_up && v > m_val) {
                m_val = v;
                i_sel = static_cast<long>(i);
            }
            if (in_low && v < M_val) {
                M_val = v;
                j_sel = static_cast<long>(i);
            }
        }
        mM = m_val - M_val;
        if (i_sel < 0 || j_sel < 0 || mM <= opts.kkt_tol) break;

        const size_t i = static_cast<size_t>(i_sel), j = static_cast<size_t>(j_sel);
        // Along the feasible direction (d_i, d_j) = (lambda_i, -lambda_j) the
        // curvature is K_ii - 2 K_ij + K_jj, floored for safety.
        const double quad = std::max(K[i][i] - 2.0 * K[i][j] + K[j][j], 1e-12);
        double t = mM / quad;
        // Box limits along the feasible direction.
        t = std::min(t, labels[i] == 1 ? C - alpha[i] : alpha[i]);
        t = std::min(t, labels[j] == 1 ? alpha[j] : C - alpha[j]);
        if (t <= 0) break;  // numerically stuck at the box edge

        const double da_i = labels[i] * t;
        const double da_j = -labels[j] * t;
        alpha[i] += da_i;
        alpha[j] += da_j;
        for (size_t k = 0; k < n; ++k) g[k] += Q(k, i) * da_i + Q(k, j) * da_j;

        if (opts.objective_trace) {
            double obj = 0;
            for (size_t k = 0; k < n; ++k) obj += alpha[k] - 0.5 * alpha[k] * (g[k] + 1.0);
            opts.objective_trace->push_back(obj);
        }
    }

    SvmModel model;
    model.kernel = hp.kernel;
    model.gamma = hp.gamma;
    model.pairwise = false;
    model.iterations = iter;
    model.kkt_residual = std::max(mM, 0.0);
    model.converged = mM <= opts.kkt_tol;
    model.bias = (m_val + M_val) / 2.0;

    double obj = 0, sum_al = 0;
    for (size_t k = 0; k < n; ++k) {
        obj += alpha[k] - 0.5 * alpha[k] * (g[k] + 1.0);
        sum_al += alpha[k] * labels[k];
    }
    model.dual_objective = obj;
    model.sum_alpha_lambda = sum_al;

    for (size_t k = 0; k < n; ++k)
        if (alpha[k] > 1e-12) {
            model.support_vectors.push_back(points[k]);
            model.coeffs.push_back(alpha[k] * labels[k]);
        }
    return model;
}

OrderPrediction predict_order(const SvmModel& model, std::span<const double> xi,
                              std::span<const double> xj) {
    std::vector<double> d(xi.size());
    for (size_t c = 0; c < d.size(); ++c) d[c] = xi[c] - xj[c];
    OrderPrediction out;
    out.decision = model.decision(d);
    if (out.decision > 0) {
        out.i_over_j = true;
    } else if (out.decision < 0) {
        out.i_over_j = false;
    } else {
        out.i_over_j = true;
        out.tie = true;
    }
    return out;
}

void save_model(std::ostream& os, const SvmModel& model) {
    os << "svmmodel v1\n";
    os << "kernel " << kernel_name(model.kernel) << '\n';
    os << "gamma " << fmt_double_shortest(model.gamma) << '\n';
    os << "bias " << fmt_double_shortest(model.bias) << '\n';
    os << "pairwise " << (model.pairwise ? 1 : 0) << '\n';
    os << "dim " << model.dimension() << '\n';
    os << "nsv " << model.support_vectors.size() << '\n';
    for (size_t i = 0; i < model.support_vectors.size(); ++i) {
        os << fmt_double_shortest(model.coeffs[i]);
        for (double v : model.support_vectors[i]) os << ' ' << fmt_double_shortest(v);
        os << '\n';
    }
}

SvmModel load_model(std::istream& is) {
    auto next_line = [&](const char* what) {
        std::string line;
        if (!std::getline(is, line)) throw DataError(std::string("model file: missing ") + what);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next_line("magic") != "svmmodel v1")
        throw DataError("model file: unsupported format or version");

    auto field = [&](const char* key) {
        const std::string line = next_line(key);
        const std::string prefix = std::string(key) + " ";
        if (line.rfind(prefix, 0) != 0)
            throw DataError(std::string("model file: expected '") + key + "', got '" + line + "'");
        return line.substr(prefix.size());
    };

    SvmModel model;
    try {
        model.kernel = parse_kernel(field("kernel"));
    } catch (const ConfigError& e) {  // bad token in a file is a data problem
        throw DataError(std::string("model file: ") + e.what());
    }
    double gamma = 0, bias = 0;
    long pairwise = 0, dim = 0, nsv = 0;
    if (!parse_double(field("gamma"), gamma) || !parse_double(field("bias"), bias) ||
        !parse_long(field("pairwise"), pairwise) || !parse_long(field("dim"), dim) ||
        !parse_long(field("nsv"), nsv) || dim < 0 || nsv < 0 ||
        (pairwise != 0 && pairwise != 1))
        throw DataError("model file: malformed header field");
    model.gamma = gamma;
    model.bias = bias;
    model.pairwise = pairwise == 1;
    model.converged = true;  // persisted models are presumed final

    for (long i = 0; i < nsv; ++i) {
        std::istringstream row(next_line("support vector"));
        double coeff;
        if (!(row >> coeff)) throw DataError("model file: malformed support vector row");
        std::vector<double> sv(static_cast<size_t>(dim));
        for (long c = 0; c < dim; ++c)
            if (!(row >> sv[c])) throw DataError("model file: truncated support vector row");
        double extra;
        if (row >> extra) throw DataError("model file: overlong support vector row");
        model.coeffs.push_back(coeff);
        model.support_vectors.push_back(std::move(sv));
    }
    return model;
}

void save_model_file(const std::string& path, const SvmModel& model) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write model file: " + path);
    save_model(os, model);
}

SvmModel load_model_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open model file: " + path);
    return load_model(is);
}

}  // namespace mazing::svm
