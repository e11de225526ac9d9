#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "costsense/core.hpp"
#include "costsense/costs.hpp"
#include "costsense/quadrature.hpp"

namespace costsense {

/// Weight of actual positives in WA; actual negatives get 1 - w.
class WeightSpec {
public:
    explicit WeightSpec(double w);
    double value() const noexcept { return w_; }

private:
    double w_;
};

/// Positive-class ratios of the development and target datasets, both in (0, 1).
struct TargetProfile {
    double r_plus_dev;
    double r_plus_target;

    TargetProfile(double dev, double target);
};

class BetaParams {
public:
    BetaParams(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double mean() const noexcept { return alpha_ / (alpha_ + beta_); }
    double variance() const noexcept;

private:
    double alpha_;
    double beta_;
};

/// A probability law on [0, 1]: Beta, uniform on a sub-interval, a tabulated
/// piecewise-linear density (normalized on construction) or a point mass.
class Distribution {
public:
    struct Beta {
        BetaParams params;
        double log_norm;  // log B(alpha, beta)
    };
    struct Uniform {
        double lo;
        double hi;
    };
    struct Tabulated {
        std::vector<double> xs;
        std::vector<double> density;
    };
    struct Point {
        double x;
    };

    static Distribution beta(BetaParams params);
    static Distribution uniform(double lo, double hi);
    static Distribution tabulated(std::vector<double> xs, std::vector<double> density);
    static Distribution point(double x);

    double pdf(double x) const;
    double mean() const;
    double variance() const;
    /// Law of 1 - X.
    Distribution reflected() const;
    bool is_point() const noexcept { return std::holds_alternative<Point>(law_); }

    /// E[f(X)].
    double expect(const Integrand& f, const QuadratureConfig& config = {}) const;

    const std::variant<Beta, Uniform, Tabulated, Point>& law() const noexcept { return law_; }

private:
    explicit Distribution(std::variant<Beta, Uniform, Tabulated, Point> law) : law_(std::move(law)) {}

    std::variant<Beta, Uniform, Tabulated, Point> law_;
};

/// WA = (w*tp + (1-w)*tn) / (w*P + (1-w)*N); empty when the denominator is 0.
MetricValue weighted_accuracy(const ConfusionMatrix& cm, WeightSpec w);

/// w = r_C = C_FN / (C_FN + C_FP).
WeightSpec weight_from_costs(const ShiftedCosts& costs);

struct WaTccRelation {
    double wa;
    double tcc;
    double tcc_min;
    double tcc_max;
};

/// WA at w = r_C alongside the example-independent TCC and its extremes.
/// WA equals 1 - (tcc - tcc_min) / (tcc_max - tcc_min). Requires P, N > 0.
WaTccRelation wa_tcc_affine(const ConfusionMatrix& cm, const ShiftedCosts& costs, double tcc_min = 0.0);

/// Weight that evaluates WA as if both classes had equal size:
/// r_C * N / (r_C * N + (1 - r_C) * P).
WeightSpec balanced_weight(const ShiftedCosts& costs, Count positives, Count negatives);
WeightSpec balanced_weight(double r_c, Count positives, Count negatives);

/// Rescales per-example weights so the dataset behaves like one whose
/// positive ratio is `r_plus_target`: positives scale by r_t / P, negatives by
/// (1 - r_t) / N, and the result sums to 1.
std::vector<double> rescale_example_weights(const CostedDataset& dataset, std::span<const double> base_weights,
                                            double r_plus_target);

/// Per-class averages (mean positive weight, mean negative weight) of a
/// per-example weight vector.
std::pair<double, double> class_average_weights(const CostedDataset& dataset, std::span<const double> weights);

/// WA weight for evaluating on the development set while targeting a
/// population with a different positive ratio.
WeightSpec target_weight(const ShiftedCosts& costs, const TargetProfile& profile);
WeightSpec target_weight(double r_c, const TargetProfile& profile);

/// Development positive ratio at which plain accuracy ranks like TCC on the
/// target: r_C * r_t / (1 - r_t - r_C + 2 r_C r_t).
double accuracy_equivalence_rplus(double r_c, double r_plus_target);

/// EWA = integral over [0, 1] of WA(w) u(w) dw. Requires P, N > 0.
double expected_weighted_accuracy(const ConfusionMatrix& cm, const Distribution& over_w,
                                  const QuadratureConfig& config = {});

/// For fixed class totals WA is linear in (tp, tn) once the denominator is
/// fixed, so EWA = tp * E[w / D(w)] + tn * E[(1-w) / D(w)] with
/// D(w) = w P + (1 - w) N. Precomputes the two expectations.
class EwaKernel {
public:
    EwaKernel(Count positives, Count negatives, const Distribution& over_w, const QuadratureConfig& config = {});

    /// cm must have the totals the kernel was built for.
    double operator()(const ConfusionMatrix& cm) const;

private:
    Count positives_;
    Count negatives_;
    double tp_coef_;
    double tn_coef_;
};

/// Beta with the requested mean and variance:
///   alpha = m (m(1-m)/v - 1), beta = (1-m) (m(1-m)/v - 1).
BetaParams beta_from_moments(double mean, double variance);

}  // namespace costsense
