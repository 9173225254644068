#include "mazing/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

namespace mazing::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Continued-fraction core for the incomplete beta (modified Lentz).
static double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16, kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                   b * std::log1p(-x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
    if (df <= 0) return 1.0;
    if (!std::isfinite(t)) return 0.0;
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
}

double student_t_quantile(double prob, double df) {
    if (prob <= 0.5 || prob >= 1.0) throw std::invalid_argument("t quantile needs prob in (0.5,1)");
    double target = 2.0 * (1.0 - prob);  // two-tailed p at the quantile
    double lo = 0.0, hi = 1.0;
    while (student_t_two_tailed_p(hi, df) > target) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_two_tailed_p(mid, df) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// --- Kendall tau-b ----------------------------------------------------------

// Merge-sort count of strict inversions (left > right).
static long long count_inversions(std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<double> tmp(n);
    long long inv = 0;
    for (size_t width = 1; width < n; width *= 2) {
        for (size_t lo = 0; lo + width < n; lo += 2 * width) {
            size_t mid = lo + width, hi = std::min(lo + 2 * width, n);
            size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {  // strict: ties are not inversions
                    inv += static_cast<long long>(mid - i);
                    tmp[k++] = v[j++];
                } else {
                    tmp[k++] = v[i++];
                }
            }
            while (i < mid) tmp[k++] = v[i++];
            while (j < hi) tmp[k++] = v[j++];
            std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
        }
    }
    return inv;
}

// Exact two-sided p for the tie-free null: distribution of the inversion
// count over all n! orderings via the classic DP.
static double exact_tau_p(long n, long long s_obs) {
    const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
    std::vector<double> ways{1.0};  // inversion-count distribution, m = 1
    for (long m = 2; m <= n; ++m) {
        const size_t old_max = ways.size();
        std::vector<double> next(old_max + static_cast<size_t>(m) - 1, 0.0);
        double window = 0.0;
        for (size_t k = 0; k < next.size(); ++k) {
            if (k < old_max) window += ways[k];
            if (k >= static_cast<size_t>(m) && k - m < old_max) window -= ways[k - m];
            next[k] = window;
        }
        ways.swap(next);
    }
    double total = 0, extreme = 0;
    for (size_t k = 0; k < ways.size(); ++k) {
        total += ways[k];
        long long s = n0 - 2 * static_cast<long long>(k);
        if (std::llabs(s) >= std::llabs(s_obs)) extreme += ways[k];
    }
    return extreme / total;
}

// Exact permutation p under ties: enumerate every distinct arrangement of the
// sequence with the larger tie groups (each is equally likely under a uniform
// permutation of entries) and tally |S| at least as extreme as observed.
static double exact_tau_p_ties(std::span<const double> x, std::span<const double> y,
                               long long s_obs) {
    const size_t n = x.size();
    auto distinct_arrangements = [&](std::span<const double> v) {
        std::vector<double> s(v.begin(), v.end());
        std::sort(s.begin(), s.end());
        double perms = 1, run = 1;
        for (size_t i = 1; i <= s.size(); ++i) {
            perms *= static_cast<double>(i);
            if (i < s.size() && s[i] == s[i - 1]) {
                run += 1;
                perms /= run;
            } else {
                run = 1;
            }
        }
        return perms;
    };
    // Permute whichever side yields fewer distinct arrangements; S is
    // symmetric in its arguments.
    std::span<const double> fixed = x, moved = y;
    if (distinct_arrangements(x) < distinct_arrangements(y)) std::swap(fixed, moved);

    std::vector<int> sgn_fixed(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            sgn_fixed[i * n + j] = fixed[j] > fixed[i] ? 1 : (fixed[j] < fixed[i] ? -1 : 0);

    std::vector<double> perm(moved.begin(), moved.end());
    std::sort(perm.begin(), perm.end());
    long long total = 0, extreme = 0;
    const long long target = std::llabs(s_obs);
    do {
        long long s = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                const int sy = perm[j] > perm[i] ? 1 : (perm[j] < perm[i] ? -1 : 0);
                s += sgn_fixed[i * n + j] * sy;
            }
        ++total;
        if (std::llabs(s) >= target) ++extreme;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

TauResult kendall_tau(std::span<const double> x, std::span<const double> y) {
    TauResult r;
    const long n = static_cast<long>(x.size());
    r.n = n;
    if (n != static_cast<long>(y.size())) throw std::invalid_argument("kendall: size mismatch");
    if (n < 2) return r;

    std::vector<size_t> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // Tie bookkeeping: n1 over x runs, n2 over y runs, n3 over joint runs.
    long long n1 = 0, n3 = 0;
    long long sum_t = 0, sum_t2 = 0, sum_t3 = 0;  // sums of t, t(t-1)(2t+5), t(t-1)(t-2)
    {
        size_t i = 0;
        while (i < idx.size()) {
            size_t j = i;
            while (j < idx.size() && x[idx[j]] == x[idx[i]]) ++j;
            const long long t = static_cast<long long>(j - i);
            n1 += t * (t - 1) / 2;
            sum_t += t * (t - 1) / 2;
            sum_t2 += t * (t - 1) * (2 * t + 5);
            sum_t3 += t * (t - 1) * (t - 2);
            // joint ties within this x run
            size_t a = i;
            while (a < j) {
                size_t b = a;
                while (b < j && y[idx[b]] == y[idx[a]]) ++b;
                const long long u = static_cast<long long>(b - a);
                n3 += u * (u - 1) / 2;
                a = b;
            }
            i = j;
        }
    }
    long long n2 = 0, sum_u = 0, sum_u2 = 0, sum_u3 = 0;
    {
        std::vector<double> ys(y.begin(), y.end());
        std::sort(ys.begin(), ys.end());
        size_t i = 0;
        while (i < ys.size()) {
            size_t j = i;
            while (j < ys.size() && ys[j] == ys[i]) ++j;
            const long long u = static_cast<long long>(j - i);
            n2 += u * (u - 1) / 2;
            sum_u += u * (u - 1) / 2;
            sum_u2 += u * (u - 1) * (2 * u + 5);
            sum_u3 += u * (u - 1) * (u - 2);
            i = j;
        }
    }

    const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
    if (n0 == n1 || n0 == n2) return r;  // constant sequence: undefined

    std::vector<double> yseq(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) yseq[i] = y[idx[i]];
    const long long discordant = count_inversions(yseq);
    const long long usable = n0 - n1 - n2 + n3;
    const long long concordant = usable - discordant;
    const long long s = concordant - discordant;

    r.defined = true;
    r.s = s;
    r.tau = static_cast<double>(s) /
            std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));

    if (n <= 10) {
        r.regime = TauResult::EXACT;
        const bool tie_free = (n1 == 0 && n2 == 0);
        r.p = tie_free ? exact_tau_p(n, s) : exact_tau_p_ties(x, y, s);
        return r;
    }

    // Normal approximation with tie-corrected variance of S.
    const double nn = static_cast<double>(n);
    double var = (nn * (nn - 1) * (2 * nn + 5) - static_cast<double>(sum_t2) -
                  static_cast<double>(sum_u2)) /
                 18.0;
    if (n > 2)
        var += static_cast<double>(sum_t3) * static_cast<double>(sum_u3) /
               (9.0 * nn * (nn - 1) * (nn - 2));
    var += 2.0 * static_cast<double>(sum_t) * static_cast<double>(sum_u) / (nn * (nn - 1));
    if (var <= 0) {
        r.p = 1.0;
        r.regime = n <= 30 ? TauResult::NORMAL_CC : TauResult::NORMAL;
        return r;
    }
    double num = std::fabs(static_cast<double>(s));
    if (n <= 30) {
        r.regime = TauResult::NORMAL_CC;
        num = std::max(0.0, num - 1.0);  // continuity correction
    } else {
        r.regime = TauResult::NORMAL;
    }
    const double z = num / std::sqrt(var);
    r.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return r;
}

// --- two-sample tests -------------------------------------------------------

static double mean_of(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

TTestResult t_test_two_sample(std::span<const double> a, std::span<const double> b) {
    TTestResult r;
    const double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("t-test: need >= 2 per sample");
    const double ma = mean_of(a), mb = mean_of(b);
    double ssa = 0, ssb = 0;
    for (double x : a) ssa += (x - ma) * (x - ma);
    for (double x : b) ssb += (x - mb) * (x - mb);
    r.df = n1 + n2 - 2;
    const double sp2 = (ssa + ssb) / r.df;
    if (sp2 == 0.0) {
        r.degenerate = true;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = ma > mb ? INFINITY : -INFINITY;
            r.p = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
    r.p = student_t_two_tailed_p(r.t, r.df);
    return r;
}

// Midranks of the pooled sample.
static std::vector<double> midranks(const std::vector<double>& pooled_sorted) {
    const size_t n = pooled_sorted.size();
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && pooled_sorted[j] == pooled_sorted[i]) ++j;
        const double r = 0.5 * static_cast<double>(i + 1 + j);  // average rank, 1-based
        for (size_t k = i; k < j; ++k) rank[k] = r;
        i = j;
    }
    return rank;
}

MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    MwuResult r;
    const size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("mann-whitney: empty sample");

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> sorted(n);
    for (size_t i = 0; i < n; ++i) sorted[i] = pooled[order[i]];
    const std::vector<double> rank_sorted = midranks(sorted);
    std::vector<double> rank(n);
    for (size_t i = 0; i < n; ++i) rank[order[i]] = rank_sorted[i];

    double ra = 0;
    for (size_t i = 0; i < n1; ++i) ra += rank[i];
    const double u_obs = ra - static_cast<double>(n1) * (n1 + 1) / 2.0;
    r.u = u_obs;

    if (n <= 12) {
        // Exact permutation null: every assignment of n1 pooled slots to the
        // first sample is equally likely.
        r.exact = true;
        std::vector<size_t> comb(n1);
        std::iota(comb.begin(), comb.end(), 0);
        long total = 0, le = 0, ge = 0;
        const double eps = 1e-9;
        while (true) {
            double rs = 0;
            for (size_t i : comb) rs += rank_sorted[i];
            const double u = rs - static_cast<double>(n1) * (n1 + 1) / 2.0;
            ++total;
            if (u <= u_obs + eps) ++le;
            if (u >= u_obs - eps) ++ge;
            // next combination
            size_t k = n1;
            while (k > 0) {
                --k;
                if (comb[k] != k + n - n1) {
                    ++comb[k];
                    for (size_t j = k + 1; j < n1; ++j) comb[j] = comb[j - 1] + 1;
                    break;
                }
                if (k == 0) {
                    k = SIZE_MAX;
                    break;
                }
            }
            if (k == SIZE_MAX || n1 == 0) break;
        }
        const double p_le = static_cast<double>(le) / total, p_ge = static_cast<double>(ge) / total;
        r.p = std::min(1.0, 2.0 * std::min(p_le, p_ge));
        return r;
    }

    // Normal approximation with tie correction and continuity correction.
    const double mu = static_cast<double>(n1) * n2 / 2.0;
    double tie_sum = 0;
    {
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            tie_sum += t * t * t - t;
            i = j;
        }
    }
    const double nn = static_cast<double>(n);
    const double var = (static_cast<double>(n1) * n2 / 12.0) *
                       ((nn + 1.0) - tie_sum / (nn * (nn - 1.0)));
    if (var <= 0) {
        r.p = 1.0;
        return r;
    }
    const double cc = u_obs > mu ? -0.5 : (u_obs < mu ? 0.5 : 0.0);
    const double z = (u_obs - mu + cc) / std::sqrt(var);
    r.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::fabs(z))));
    return r;
}

// --- correlation report -----------------------------------------------------

CorrelationReport correlation_report(const FeatureMatrix& fm, double alpha) {
    CorrelationReport rep;
    rep.alpha = alpha;
    rep.m = static_cast<long>(fm.names.size());
    rep.thr_05 = bonferroni_threshold(alpha, rep.m);
    rep.thr_01 = bonferroni_threshold(alpha / 5.0, rep.m);
    for (size_t f = 0; f < fm.names.size(); ++f) {
        for (int proc = 0; proc < 2; ++proc) {
            CorrelationRow row;
            row.feature = fm.names[f];
            row.group = f < fm.groups.size() ? fm.groups[f] : "";
            row.processing = proc == 0 ? "mu" : "rng";
            const auto& xs = proc == 0 ? fm.mu[f] : fm.rng[f];
            const auto& ys = proc == 0 ? fm.y_mu : fm.y_rng;
            row.tau = kendall_tau(xs, ys);
            if (row.tau.defined) {
                row.sig_05 = row.tau.p < rep.thr_05;
                row.sig_01 = row.tau.p < rep.thr_01;
            }
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

std::string CorrelationReport::to_csv() const {
    std::string out = "feature,group,processing,n,tau,p,regime,sig_05,sig_01\n";
    char buf[256];
    for (const auto& row : rows) {
        const char* regime = "undefined";
        switch (row.tau.regime) {
            case TauResult::EXACT: regime = "exact"; break;
            case TauResult::NORMAL_CC: regime = "normal_cc"; break;
            case TauResult::NORMAL: regime = "normal"; break;
            default: break;
        }
        if (row.tau.defined)
            std::snprintf(buf, sizeof(buf), "%s,%s,%s,%ld,%.10g,%.10g,%s,%d,%d\n",
                          row.feature.c_str(), row.group.c_str(), row.processing.c_str(),
                          row.tau.n, row.tau.tau, row.tau.p, regime, row.sig_05 ? 1 : 0,
                          row.sig_01 ? 1 : 0);
        else
            std::snprintf(buf, sizeof(buf), "%s,%s,%s,%ld,,,%s,0,0\n", row.feature.c_str(),
                          row.group.c_str(), row.processing.c_str(), row.tau.n, regime);
        out += buf;
    }
    return out;
}

std::string CorrelationReport::to_text() const {
    // Two columns per feature (window mean and window range), grouped.
    auto cell = [](const CorrelationRow& row) {
        char buf[64];
        if (!row.tau.defined) return std::string("   n/a   ");
        const char* mark = row.sig_01 ? "**" : (row.sig_05 ? "* " : "  ");
        std::snprintf(buf, sizeof(buf), "%+.3f %s", row.tau.tau, mark);
        return std::string(buf);
    };
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "Kendall tau against annotation windows (n features = %ld)\n"
                  "significance: * p < %.4g, ** p < %.4g (Bonferroni-corrected)\n\n",
                  m, thr_05, thr_01);
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-24s %-28s %-10s %-10s\n", "group", "feature",
                  "tau(mean)", "tau(range)");
    out += buf;
    out += std::string(76, '-') + "\n";
    std::string last_group;
    for (size_t i = 0; i + 1 < rows.size(); i += 2) {
        const auto& mu_row = rows[i];
        const auto& rng_row = rows[i + 1];
        std::string group = mu_row.group == last_group ? "" : mu_row.group;
        last_group = mu_row.group;
        std::snprintf(buf, sizeof(buf), "%-24s %-28s %-10s %-10s\n", group.c_str(),
                      mu_row.feature.c_str(), cell(mu_row).c_str(), cell(rng_row).c_str());
        out += buf;
    }
    return out;
}

}  // namespace mazing::stats
