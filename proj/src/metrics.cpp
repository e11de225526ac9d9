#include "costsense/metrics.hpp"

#include <array>
#include <cmath>

#include "costsense/error.hpp"
#include "costsense/format.hpp"

namespace costsense {

namespace {

struct KindInfo {
    MetricKind kind;
    std::string_view name;
    Orientation orientation;
    bool needs_costs;
    bool needs_distribution;
};

constexpr auto hi = Orientation::higher_is_better;
constexpr auto lo = Orientation::lower_is_better;

constexpr std::array<KindInfo, 24> kKinds{{
    {MetricKind::accuracy, "accuracy", hi, false, false},
    {MetricKind::recall, "recall", hi, false, false},
    {MetricKind::precision, "precision", hi, false, false},
    {MetricKind::specificity, "specificity", hi, false, false},
    {MetricKind::npv, "npv", hi, false, false},
    {MetricKind::f_beta, "f_beta", hi, false, false},
    {MetricKind::informedness, "informedness", hi, false, false},
    {MetricKind::markedness, "markedness", hi, false, false},
    {MetricKind::mcc, "mcc", hi, false, false},
    {MetricKind::kappa, "kappa", hi, false, false},
    {MetricKind::g_mean, "g_mean", hi, false, false},
    {MetricKind::roc_auc_single, "roc_auc_single", hi, false, false},
    {MetricKind::cba, "cba", hi, false, false},
    {MetricKind::iam, "iam", hi, false, false},
    {MetricKind::p4, "p4", hi, false, false},
    {MetricKind::b_roc_single, "b_roc_single", hi, false, false},
    {MetricKind::wca, "wca", hi, true, false},
    {MetricKind::wra, "wra", hi, true, false},
    {MetricKind::acd, "acd", lo, true, false},
    {MetricKind::c_score, "c_score", lo, true, false},
    {MetricKind::msu, "msu", hi, true, false},
    {MetricKind::h_measure, "h_measure", hi, true, false},
    {MetricKind::wa, "wa", hi, true, false},
    {MetricKind::ewa, "ewa", hi, false, true},
}};

const KindInfo& info(MetricKind kind) {
    return kKinds[static_cast<std::size_t>(kind)];
}

MetricValue ratio(double num, double den) {
    if (den == 0.0) return std::nullopt;
    return num / den;
}

const CostContext& require_costs(const MetricId& id, const std::optional<CostContext>& ctx) {
    if (!ctx) throw Error(ErrorKind::context, "metric '" + id.name() + "' needs a cost context");
    return *ctx;
}

const Distribution& require_distribution(const MetricId& id, const std::optional<Distribution>& dist) {
    if (!dist) throw Error(ErrorKind::context, "metric '" + id.name() + "' needs a cost-ratio distribution");
    return *dist;
}

const Distribution& default_h_distribution() {
    static const Distribution law = Distribution::beta(BetaParams(2.0, 2.0));
    return law;
}

// H from the first moment of c: both integrands are linear in c, so each
// integral is b times the matrix quantity evaluated at E[c].
MetricValue h_from_mean(const ConfusionMatrix& cm, const ShiftedCosts& costs, double mean_c) {
    const double b = costs.c_fp() + costs.c_fn();
    const double num = b * (mean_c * static_cast<double>(cm.fp) + (1.0 - mean_c) * static_cast<double>(cm.fn));
    const double den =
        b * (mean_c * static_cast<double>(cm.negatives()) + (1.0 - mean_c) * static_cast<double>(cm.positives()));
    if (den == 0.0) return std::nullopt;
    return 1.0 - num / den;
}

}  // namespace

MetricId MetricId::parse(std::string_view text) {
    std::string_view head = text;
    std::string_view arg;
    if (auto open = text.find('('); open != std::string_view::npos) {
        if (text.back() != ')') throw Error(ErrorKind::invalid_argument, "malformed metric id '" + std::string(text) + "'");
        head = text.substr(0, open);
        arg = text.substr(open + 1, text.size() - open - 2);
    }
    for (const auto& k : kKinds) {
        if (k.name != head) continue;
        MetricId id;
        id.kind = k.kind;
        if (text.size() == head.size()) return id;
        switch (k.kind) {
            case MetricKind::f_beta:
                id.beta = parse_double(arg, "metric parameter");
                if (!(id.beta > 0.0)) throw Error(ErrorKind::domain, "F-measure beta must be positive");
                return id;
            case MetricKind::wa:
                id.weight = parse_double(arg, "metric parameter");
                WeightSpec{*id.weight};
                return id;
            case MetricKind::h_measure:
                if (arg != "informed") break;
                id.informed = true;
                return id;
            default:
                break;
        }
        throw Error(ErrorKind::invalid_argument, "metric '" + std::string(head) + "' takes no parameter '" +
                                                     std::string(arg) + "'");
    }
    throw Error(ErrorKind::invalid_argument, "unknown metric '" + std::string(text) + "'");
}

std::string MetricId::name() const {
    std::string out(info(kind).name);
    if (kind == MetricKind::f_beta && beta != 1.0) out += "(" + shortest_decimal(beta) + ")";
    if (kind == MetricKind::wa && weight) out += "(" + shortest_decimal(*weight) + ")";
    if (kind == MetricKind::h_measure && informed) out += "(informed)";
    return out;
}

const std::vector<MetricDescriptor>& metric_registry() {
    static const std::vector<MetricDescriptor> registry = [] {
        std::vector<MetricDescriptor> out;
        for (const auto& k : kKinds) {
            out.push_back(MetricDescriptor{MetricId{k.kind, 1.0, std::nullopt, false}, k.orientation, k.needs_costs, k.needs_distribution});
        }
        return out;
    }();
    return registry;
}

MetricDescriptor describe(const MetricId& id) {
    const auto& k = info(id.kind);
    MetricDescriptor d{id, k.orientation, k.needs_costs, k.needs_distribution};
    if (id.kind == MetricKind::wa && id.weight) d.needs_costs = false;
    if (id.kind == MetricKind::h_measure && id.informed) d.needs_distribution = true;
    return d;
}

MetricValue h_measure(const ConfusionMatrix& cm, const ShiftedCosts& costs, const Distribution& cost_ratio,
                      const QuadratureConfig& quad) {
    const double b = costs.c_fp() + costs.c_fn();
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);
    const double n = static_cast<double>(cm.negatives());
    const double p = static_cast<double>(cm.positives());
    const double expected_tcc = cost_ratio.expect([=](double c) { return b * (c * fp + (1.0 - c) * fn); }, quad);
    const double expected_max = cost_ratio.expect([=](double c) { return b * (c * n + (1.0 - c) * p); }, quad);
    if (expected_max == 0.0) return std::nullopt;
    return 1.0 - expected_tcc / expected_max;
}

MetricValue evaluate(const MetricId& id, const ConfusionMatrix& cm, const std::optional<CostContext>& cost_ctx,
                     const std::optional<Distribution>& cost_ratio, const QuadratureConfig& quad) {
    if (cm.total() == 0) throw Error(ErrorKind::domain, "metrics need a non-empty confusion matrix");

    const double tp = static_cast<double>(cm.tp);
    const double fn = static_cast<double>(cm.fn);
    const double fp = static_cast<double>(cm.fp);
    const double tn = static_cast<double>(cm.tn);
    const double p = tp + fn;
    const double n = tn + fp;
    const double total = p + n;

    switch (id.kind) {
        case MetricKind::accuracy:
            return (tp + tn) / total;
        case MetricKind::recall:
            return ratio(tp, p);
        case MetricKind::precision:
            return ratio(tp, tp + fp);
        case MetricKind::specificity:
            return ratio(tn, n);
        case MetricKind::npv:
            return ratio(tn, tn + fn);
        case MetricKind::f_beta: {
            const double b2 = id.beta * id.beta;
            return ratio((1.0 + b2) * tp, tp + b2 * p + fp);
        }
        case MetricKind::informedness: {
            if (p == 0.0 || n == 0.0) return std::nullopt;
            return tp / p - fp / n;
        }
        case MetricKind::markedness: {
            if (tp + fp == 0.0 || tn + fn == 0.0) return std::nullopt;
            return tp / (tp + fp) - fn / (tn + fn);
        }
        case MetricKind::mcc: {
            const double den = (tp + fp) * p * n * (tn + fn);
            if (den == 0.0) return std::nullopt;
            return (tp * tn - fp * fn) / std::sqrt(den);
        }
        case MetricKind::kappa:
            return ratio(2.0 * (tp * tn - fn * fp), (tp + fp) * n + p * (fn + tn));
        case MetricKind::g_mean: {
            if (p == 0.0 || n == 0.0) return std::nullopt;
            return std::sqrt(tp * tn / (p * n));
        }
        case MetricKind::roc_auc_single: {
            if (p == 0.0 || n == 0.0) return std::nullopt;
            return (tp / p + tn / n) / 2.0;
        }
        case MetricKind::cba: {
            const double pos_den = std::max(p, tp + fp);
            const double neg_den = std::max(n, tn + fn);
            if (pos_den == 0.0 || neg_den == 0.0) return std::nullopt;
            return (tp / pos_den + tn / neg_den) / 2.0;
        }
        case MetricKind::iam: {
            const double pos_den = std::max(p, tp + fp);
            const double neg_den = std::max(n, tn + fn);
            if (pos_den == 0.0 || neg_den == 0.0) return std::nullopt;
            const double worst = std::max(fp, fn);
            return (tp - worst) / (2.0 * pos_den) + (tn - worst) / (2.0 * neg_den);
        }
        case MetricKind::p4:
            return ratio(4.0 * tp * tn, 4.0 * tp * tn + (tp + tn) * (fp + fn));
        case MetricKind::b_roc_single: {
            if (p == 0.0 || tp + fp == 0.0) return std::nullopt;
            return (tp / p + tp / (fp + tp)) / 2.0;
        }
        case MetricKind::wca: {
            const auto& ctx = require_costs(id, cost_ctx);
            if (p == 0.0 || n == 0.0) return std::nullopt;
            const double w = ctx.costs.r_c();
            return w * tp / p + (1.0 - w) * tn / n;
        }
        case MetricKind::wra: {
            const auto& ctx = require_costs(id, cost_ctx);
            if (p == 0.0 || n == 0.0) return std::nullopt;
            const double k = n * ctx.costs.c_fp() / (p * ctx.costs.c_fn());
            return 4.0 * (tp / p - fp / n) * k / ((1.0 + k) * (1.0 + k));
        }
        case MetricKind::acd: {
            const auto& ctx = require_costs(id, cost_ctx);
            const double worst = tcc_max(cm, ctx.costs);
            const double normalized = tcc_example_independent(cm, ctx.costs) / worst;
            const double error = 1.0 - (tp + tn) / total;
            return std::sqrt(error * error + normalized * normalized);
        }
        case MetricKind::c_score: {
            const auto& ctx = require_costs(id, cost_ctx);
            return ratio(tcc_example_independent(cm, ctx.costs, ctx.tcc_min), p * ctx.costs.c_fp());
        }
        case MetricKind::msu: {
            const auto& ctx = require_costs(id, cost_ctx);
            const double tcc = tcc_example_independent(cm, ctx.costs, ctx.tcc_min);
            const double worst = tcc_max(cm, ctx.costs, ctx.tcc_min);
            if (worst == 0.0) return std::nullopt;
            return 1.0 - (tcc - ctx.tcc_min) / worst;
        }
        case MetricKind::h_measure: {
            const auto& ctx = require_costs(id, cost_ctx);
            const Distribution& law = id.informed ? require_distribution(id, cost_ratio) : default_h_distribution();
            return h_measure(cm, ctx.costs, law, quad);
        }
        case MetricKind::wa: {
            if (id.weight) return weighted_accuracy(cm, WeightSpec(*id.weight));
            const auto& ctx = require_costs(id, cost_ctx);
            return weighted_accuracy(cm, weight_from_costs(ctx.costs));
        }
        case MetricKind::ewa: {
            const auto& law = require_distribution(id, cost_ratio);
            if (p == 0.0 || n == 0.0) return std::nullopt;
            return expected_weighted_accuracy(cm, law.reflected(), quad);
        }
    }
    throw Error(ErrorKind::invalid_argument, "unhandled metric kind");
}

MetricEvaluator::MetricEvaluator(MetricId id, Count positives, Count negatives, std::optional<CostContext> cost_ctx,
                                 std::optional<Distribution> cost_ratio, const QuadratureConfig& quad)
    : descriptor_(describe(id)), cost_ctx_(std::move(cost_ctx)), cost_ratio_(std::move(cost_ratio)), quad_(quad) {
    if (descriptor_.needs_costs) require_costs(id, cost_ctx_);
    if (descriptor_.needs_distribution) require_distribution(id, cost_ratio_);
    if (positives == 0 || negatives == 0) return;
    if (id.kind == MetricKind::ewa) {
        ewa_.emplace(positives, negatives, cost_ratio_->reflected(), quad_);
    } else if (id.kind == MetricKind::h_measure) {
        const Distribution& law = id.informed ? *cost_ratio_ : default_h_distribution();
        h_mean_c_ = law.expect([](double c) { return c; }, quad_);
        h_ready_ = true;
    }
}

MetricValue MetricEvaluator::operator()(const ConfusionMatrix& cm) const {
    if (ewa_) return (*ewa_)(cm);
    if (h_ready_) {
        if (cm.total() == 0) throw Error(ErrorKind::domain, "metrics need a non-empty confusion matrix");
        return h_from_mean(cm, cost_ctx_->costs, h_mean_c_);
    }
    return evaluate(descriptor_.id, cm, cost_ctx_, cost_ratio_, quad_);
}

}  // namespace costsense
