#pragma once

// Reference implementations written directly from the defining formulas.
// They share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

struct Cm {
    double tp, fn, fp, tn;
    double p() const { return tp + fn; }
    double n() const { return tn + fp; }
    double total() const { return p() + n(); }
};

inline std::optional<double> div(double a, double b) {
    if (b == 0.0) return std::nullopt;
    return a / b;
}

inline std::optional<double> metric(const std::string& name, const Cm& m, double cfn = 1.0, double cfp = 1.0,
                                    double beta = 1.0, double tcc_min = 0.0) {
    const double tp = m.tp, fn = m.fn, fp = m.fp, tn = m.tn, p = m.p(), n = m.n();
    const double w = cfn / (cfn + cfp);
    const double tcc = cfn * fn + cfp * fp + tcc_min;
    const double tcc_max = cfn * p + cfp * n + tcc_min;
    if (name == "accuracy") return (tp + tn) / m.total();
    if (name == "recall") return div(tp, p);
    if (name == "precision") return div(tp, tp + fp);
    if (name == "specificity") return div(tn, n);
    if (name == "npv") return div(tn, tn + fn);
    if (name == "f_beta") return div((1 + beta * beta) * tp, tp + beta * beta * p + fp);
    if (name == "informedness") {
        if (p == 0 || n == 0) return std::nullopt;
        return tp / p - fp / n;
    }
    if (name == "markedness") {
        if (tp + fp == 0 || tn + fn == 0) return std::nullopt;
        return tp / (tp + fp) - fn / (tn + fn);
    }
    if (name == "mcc") {
        const double d = (tp + fp) * p * n * (tn + fn);
        if (d == 0) return std::nullopt;
        return (tp * tn - fp * fn) / std::sqrt(d);
    }
    if (name == "kappa") return div(2 * (tp * tn - fn * fp), (tp + fp) * n + p * (fn + tn));
    if (name == "g_mean") {
        if (p == 0 || n == 0) return std::nullopt;
        return std::sqrt(tp * tn / (p * n));
    }
    if (name == "roc_auc_single") {
        if (p == 0 || n == 0) return std::nullopt;
        return (tp / p + tn / n) / 2;
    }
    if (name == "cba") {
        const double a = std::max(p, tp + fp), b = std::max(n, tn + fn);
        if (a == 0 || b == 0) return std::nullopt;
        return (tp / a + tn / b) / 2;
    }
    if (name == "iam") {
        const double a = std::max(p, tp + fp), b = std::max(n, tn + fn);
        if (a == 0 || b == 0) return std::nullopt;
        const double mx = std::max(fp, fn);
        return (tp - mx) / (2 * a) + (tn - mx) / (2 * b);
    }
    if (name == "p4") return div(4 * tp * tn, 4 * tp * tn + (tp + tn) * (fp + fn));
    if (name == "b_roc_single") {
        if (p == 0 || tp + fp == 0) return std::nullopt;
        return (tp / p + tp / (fp + tp)) / 2;
    }
    if (name == "wca") {
        if (p == 0 || n == 0) return std::nullopt;
        return w * tp / p + (1 - w) * tn / n;
    }
    if (name == "wra") {
        if (p == 0 || n == 0) return std::nullopt;
        const double k = n * cfp / (p * cfn);
        return 4 * (tp / p - fp / n) * k / ((1 + k) * (1 + k));
    }
    if (name == "acd") {
        const double a = (tp + tn) / m.total();
        const double t = (cfn * fn + cfp * fp) / (cfn * p + cfp * n);
        return std::sqrt((1 - a) * (1 - a) + t * t);
    }
    if (name == "c_score") return div(tcc, p * cfp);
    if (name == "msu") return 1 - (tcc - tcc_min) / tcc_max;
    if (name == "wa") return div(w * tp + (1 - w) * tn, w * p + (1 - w) * n);
    return std::nullopt;
}

inline double wa(const Cm& m, double w) { return (w * m.tp + (1 - w) * m.tn) / (w * m.p() + (1 - w) * m.n()); }

/// Midpoint rule with `n` cells on [a, b].
inline double riemann(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
    return s * h;
}

inline double beta_pdf(double x, double a, double b) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double log_b = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return std::exp((a - 1) * std::log(x) + (b - 1) * std::log1p(-x) - log_b);
}

/// Average ranks by explicit counting, 1 = largest value.
inline std::vector<double> ranks_desc(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double greater = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] > v[i]) greater += 1;
            if (v[j] == v[i]) equal += 1;
        }
        out[i] = greater + (equal + 1) / 2;
    }
    return out;
}

inline double weighted_pearson(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& u) {
    double su = 0, mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        su += u[i];
        mx += u[i] * x[i];
        my += u[i] * y[i];
    }
    mx /= su;
    my /= su;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += u[i] * (x[i] - mx) * (y[i] - my);
        sxx += u[i] * (x[i] - mx) * (x[i] - mx);
        syy += u[i] * (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    return weighted_pearson(x, y, std::vector<double>(x.size(), 1.0));
}

inline double weighted_spearman(const std::vector<double>& r, const std::vector<double>& s, double n0) {
    std::vector<double> u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) u[i] = 1 / (r[i] + n0 - 1) + 1 / (s[i] + n0 - 1);
    return weighted_pearson(r, s, u);
}

}  // namespace oracle
