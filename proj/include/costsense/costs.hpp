#pragma once

#include <vector>

#include "costsense/core.hpp"

namespace costsense {

/// Example-independent unit classification costs, in abstract money units.
struct CostMatrix {
    double c_tp{0.0};
    double c_fn{0.0};
    double c_fp{0.0};
    double c_tn{0.0};
};

/// Shifted unit costs C_FN = c_fn - c_tp and C_FP = c_fp - c_tn, both > 0.
class ShiftedCosts {
public:
    ShiftedCosts(double c_fn, double c_fp);

    double c_fn() const noexcept { return c_fn_; }
    double c_fp() const noexcept { return c_fp_; }
    /// r_C = C_FN / (C_FN + C_FP), in (0, 1).
    double r_c() const noexcept { return c_fn_ / (c_fn_ + c_fp_); }
    /// v = C_FN / C_FP, how many false positives one false negative is worth.
    double ratio() const noexcept { return c_fn_ / c_fp_; }

private:
    double c_fn_;
    double c_fp_;
};

ShiftedCosts shifted_from_matrix(const CostMatrix& matrix);

/// TCC_min = c_tp * P + c_tn * N for an example-independent cost matrix.
double tcc_min_of(const CostMatrix& matrix, const ConfusionMatrix& cm);

/// C_FN * fn + C_FP * fp + tcc_min.
double tcc_example_independent(const ConfusionMatrix& cm, const ShiftedCosts& costs, double tcc_min = 0.0);

/// Cost of the worst classifier (every example misclassified), tcc_min included.
double tcc_max(const ConfusionMatrix& cm, const ShiftedCosts& costs, double tcc_min = 0.0);

/// Sum of every example's own cost given the classifier's decisions.
double tcc_example_dependent(const CostedDataset& dataset, const ClassificationOutcome& outcome);

/// Cost of perfect classification: sum of correct-classification costs.
double tcc_min_of(const CostedDataset& dataset);

struct TccDecomposition {
    double mean_term{0.0};    // C_FN * FN + C_FP * FP
    double baseline{0.0};     // TCC_min
    double fluctuation{0.0};  // sum of per-example deviations over misclassified examples
    double total{0.0};
};

/// Splits the example-dependent TCC into the confusion-matrix term computed
/// with caller-supplied average costs, the baseline, and the deviation of the
/// misclassified examples from those averages.
TccDecomposition decompose_tcc(const CostedDataset& dataset, const ClassificationOutcome& outcome,
                               const ShiftedCosts& costs);

/// Churn model: predicted positives receive a retention action of cost M that
/// succeeds with probability P_eff; a missed churner forfeits R_a * P_eff.
class ChurnScenario {
public:
    ChurnScenario(double retention_cost, double effectiveness, std::vector<double> revenues);

    double retention_cost() const noexcept { return retention_cost_; }
    double effectiveness() const noexcept { return effectiveness_; }
    const std::vector<double>& revenues() const noexcept { return revenues_; }
    double average_revenue() const noexcept { return average_revenue_; }

private:
    double retention_cost_;
    double effectiveness_;
    std::vector<double> revenues_;
    double average_revenue_;
};

struct ChurnExampleCosts {
    double d_fn{0.0};
    double d_tp{0.0};
    double e_fp{0.0};
    double e_tn{0.0};
};

ChurnExampleCosts churn_example_costs(double revenue, const ChurnScenario& scenario);

/// C_FP = M, C_FN = R_avg * P_eff - M.
ShiftedCosts churn_shifted_costs(const ChurnScenario& scenario);

/// Retention cost M that yields the requested r_C: M = P_eff * R_avg * (1 - r_C).
double tune_retention_cost(double r_c, double effectiveness, double average_revenue);

/// Builds a costed dataset from the churn model. `positive[i]` labels example
/// i (id "c<i>") as a churner. Throws incoherent_costs when a churner's
/// R_a * P_eff does not exceed M.
CostedDataset churn_dataset(const ChurnScenario& scenario, const std::vector<bool>& positive);

/// Per-example shifted churn costs: a missed churner costs
/// D_a^FN = R_a * P_eff - M = C_FN + delta_a with delta_a = P_eff * (R_a - R_avg),
/// and every false alarm costs E^FP = M = C_FP.
class ChurnCostTable {
public:
    explicit ChurnCostTable(const ChurnScenario& scenario);

    const ShiftedCosts& average_costs() const noexcept { return costs_; }
    std::size_t size() const noexcept { return missed_.size(); }
    double missed_cost(std::size_t i) const { return missed_[i]; }
    double deviation(std::size_t i) const { return missed_[i] - costs_.c_fn(); }
    double false_alarm_cost() const noexcept { return costs_.c_fp(); }

private:
    ShiftedCosts costs_;
    std::vector<double> missed_;
};

/// Shifted churn TCC without the baseline term:
///   C_FN * FN + C_FP * FP + sum over missed churners of delta_a.
/// No coherence is required of individual examples (D_a^FN may be negative).
/// Masks are aligned with the scenario's revenues.
double churn_tcc(const ChurnScenario& scenario, const std::vector<bool>& positive,
                 const std::vector<bool>& predicted);

}  // namespace costsense
