#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "costsense/core.hpp"
#include "costsense/costs.hpp"
#include "costsense/weighting.hpp"

namespace costsense {

enum class MetricKind {
    accuracy,
    recall,
    precision,
    specificity,
    npv,
    f_beta,
    informedness,
    markedness,
    mcc,
    kappa,
    g_mean,
    roc_auc_single,
    cba,
    iam,
    p4,
    b_roc_single,
    wca,
    wra,
    acd,
    c_score,
    msu,
    h_measure,
    wa,
    ewa,
};

/// A metric plus its parameter, if any. String forms:
///   "f_beta" (beta = 1) or "f_beta(2)";
///   "wa" (w = r_C of the cost context) or "wa(0.7)";
///   "h_measure" (Beta(2, 2) over c) or "h_measure(informed)" (the
///   distribution context over c);
///   "ewa" (the distribution context, reflected onto w = 1 - c).
struct MetricId {
    MetricKind kind{MetricKind::accuracy};
    double beta{1.0};
    std::optional<double> weight;
    bool informed{false};

    static MetricId parse(std::string_view text);
    std::string name() const;

    friend bool operator==(const MetricId&, const MetricId&) = default;
};

struct MetricDescriptor {
    MetricId id;
    Orientation orientation{Orientation::higher_is_better};
    bool needs_costs{false};
    bool needs_distribution{false};
};

/// Average shifted costs of the evaluation context.
struct CostContext {
    ShiftedCosts costs;
    double tcc_min{0.0};
};

/// One descriptor per metric kind, in declaration order (24 entries).
const std::vector<MetricDescriptor>& metric_registry();

MetricDescriptor describe(const MetricId& id);

/// Evaluates a metric on a confusion matrix. `cost_ratio` is the law of
/// c = C_FP / (C_FP + C_FN); EWA integrates over w = 1 - c.
/// Returns an empty value when a denominator vanishes. Throws
/// Error(context) when a required context is missing and Error(domain) when
/// the matrix is empty.
MetricValue evaluate(const MetricId& id, const ConfusionMatrix& cm, const std::optional<CostContext>& cost_ctx = {},
                     const std::optional<Distribution>& cost_ratio = {}, const QuadratureConfig& quad = {});

/// H = 1 - E_u[TCC(c)] / E_u[TCC_max(c)] with TCC(c) = b (c FP + (1-c) FN),
/// TCC_max(c) = b (c N + (1-c) P), b = C_FP + C_FN.
MetricValue h_measure(const ConfusionMatrix& cm, const ShiftedCosts& costs, const Distribution& cost_ratio,
                      const QuadratureConfig& quad = {});

/// Evaluates one metric over many confusion matrices sharing the same class
/// totals. Integrals that depend only on the totals (EWA, H) are computed once.
class MetricEvaluator {
public:
    MetricEvaluator(MetricId id, Count positives, Count negatives, std::optional<CostContext> cost_ctx,
                    std::optional<Distribution> cost_ratio, const QuadratureConfig& quad = {});

    const MetricDescriptor& descriptor() const noexcept { return descriptor_; }
    MetricValue operator()(const ConfusionMatrix& cm) const;

private:
    MetricDescriptor descriptor_;
    std::optional<CostContext> cost_ctx_;
    std::optional<Distribution> cost_ratio_;
    QuadratureConfig quad_;
    std::optional<EwaKernel> ewa_;
    double h_mean_c_{0.0};
    bool h_ready_{false};
};

}  // namespace costsense
