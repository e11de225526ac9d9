#include "costsense/costs.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "costsense/error.hpp"

namespace costsense {

namespace {

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) throw Error(ErrorKind::invalid_argument, std::string(what) + " must be finite");
}

}  // namespace

ShiftedCosts::ShiftedCosts(double c_fn, double c_fp) : c_fn_(c_fn), c_fp_(c_fp) {
    require_finite(c_fn, "C_FN");
    require_finite(c_fp, "C_FP");
    if (!(c_fn > 0.0) || !(c_fp > 0.0)) {
        throw Error(ErrorKind::incoherent_costs, "shifted costs C_FN and C_FP must both be positive");
    }
}

ShiftedCosts shifted_from_matrix(const CostMatrix& m) {
    if (!(m.c_tp < m.c_fn) || !(m.c_tn < m.c_fp)) {
        throw Error(ErrorKind::incoherent_costs, "cost matrix requires c_tp < c_fn and c_tn < c_fp");
    }
    return ShiftedCosts(m.c_fn - m.c_tp, m.c_fp - m.c_tn);
}

double tcc_min_of(const CostMatrix& m, const ConfusionMatrix& cm) {
    return m.c_tp * static_cast<double>(cm.positives()) + m.c_tn * static_cast<double>(cm.negatives());
}

double tcc_example_independent(const ConfusionMatrix& cm, const ShiftedCosts& costs, double tcc_min) {
    return costs.c_fn() * static_cast<double>(cm.fn) + costs.c_fp() * static_cast<double>(cm.fp) + tcc_min;
}

double tcc_max(const ConfusionMatrix& cm, const ShiftedCosts& costs, double tcc_min) {
    return costs.c_fn() * static_cast<double>(cm.positives()) + costs.c_fp() * static_cast<double>(cm.negatives()) +
           tcc_min;
}

double tcc_example_dependent(const CostedDataset& dataset, const ClassificationOutcome& outcome) {
    validate_outcome(dataset, outcome);
    const auto predicted = prediction_mask(dataset, outcome);
    double total = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& ex = dataset.examples()[i];
        // A positive is wrong when predicted negative, a negative when predicted positive.
        const bool wrong = ex.is_positive() != predicted[i];
        total += wrong ? ex.ucc_incorrect() : ex.ucc_correct();
    }
    return total;
}

double tcc_min_of(const CostedDataset& dataset) {
    double total = 0.0;
    for (const auto& ex : dataset.examples()) total += ex.ucc_correct();
    return total;
}

TccDecomposition decompose_tcc(const CostedDataset& dataset, const ClassificationOutcome& outcome,
                               const ShiftedCosts& costs) {
    validate_outcome(dataset, outcome);
    const auto predicted = prediction_mask(dataset, outcome);
    TccDecomposition d;
    Count fn = 0;
    Count fp = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& ex = dataset.examples()[i];
        d.baseline += ex.ucc_correct();
        if (ex.is_positive() && !predicted[i]) {
            ++fn;
            d.fluctuation += ex.shifted_ucc() - costs.c_fn();
        } else if (!ex.is_positive() && predicted[i]) {
            ++fp;
            d.fluctuation += ex.shifted_ucc() - costs.c_fp();
        }
    }
    d.mean_term = costs.c_fn() * static_cast<double>(fn) + costs.c_fp() * static_cast<double>(fp);
    d.total = d.mean_term + d.baseline + d.fluctuation;
    return d;
}

ChurnScenario::ChurnScenario(double retention_cost, double effectiveness, std::vector<double> revenues)
    : retention_cost_(retention_cost), effectiveness_(effectiveness), revenues_(std::move(revenues)) {
    require_finite(retention_cost, "retention cost");
    if (!(effectiveness > 0.0 && effectiveness <= 1.0)) {
        throw Error(ErrorKind::domain, "retention effectiveness must lie in (0, 1]");
    }
    if (revenues_.empty()) throw Error(ErrorKind::invalid_argument, "churn scenario needs at least one revenue");
    for (double r : revenues_) {
        if (!std::isfinite(r) || !(r > 0.0)) throw Error(ErrorKind::domain, "revenues must be positive and finite");
    }
    if (!(retention_cost > 0.0)) throw Error(ErrorKind::domain, "retention cost must be positive");
    average_revenue_ = std::accumulate(revenues_.begin(), revenues_.end(), 0.0) / static_cast<double>(revenues_.size());
    if (!(retention_cost_ < average_revenue_ * effectiveness_)) {
        throw Error(ErrorKind::infeasible_scenario, "retention cost must be below R_avg * P_eff");
    }
}

ChurnExampleCosts churn_example_costs(double revenue, const ChurnScenario& scenario) {
    const double m = scenario.retention_cost();
    return ChurnExampleCosts{revenue * scenario.effectiveness(), m, m, 0.0};
}

ShiftedCosts churn_shifted_costs(const ChurnScenario& scenario) {
    const double m = scenario.retention_cost();
    const double expected_loss = scenario.average_revenue() * scenario.effectiveness();
    if (!(m < expected_loss)) throw Error(ErrorKind::infeasible_scenario, "retention cost must be below R_avg * P_eff");
    return ShiftedCosts(expected_loss - m, m);
}

double tune_retention_cost(double r_c, double effectiveness, double average_revenue) {
    if (!(r_c > 0.0 && r_c < 1.0)) throw Error(ErrorKind::domain, "r_C must lie strictly inside (0, 1)");
    return effectiveness * average_revenue * (1.0 - r_c);
}

CostedDataset churn_dataset(const ChurnScenario& scenario, const std::vector<bool>& positive) {
    const auto& revenues = scenario.revenues();
    if (positive.size() != revenues.size()) {
        throw Error(ErrorKind::invalid_argument, "label mask and revenues differ in length");
    }
    std::vector<LabeledExample> examples;
    examples.reserve(revenues.size());
    for (std::size_t i = 0; i < revenues.size(); ++i) {
        const auto c = churn_example_costs(revenues[i], scenario);
        auto id = "c" + std::to_string(i);
        if (positive[i]) {
            examples.emplace_back(std::move(id), Label::positive, c.d_fn, c.d_tp);
        } else {
            examples.emplace_back(std::move(id), Label::negative, c.e_fp, c.e_tn);
        }
    }
    return CostedDataset(std::move(examples));
}

ChurnCostTable::ChurnCostTable(const ChurnScenario& scenario) : costs_(churn_shifted_costs(scenario)) {
    const double p_eff = scenario.effectiveness();
    const double r_avg = scenario.average_revenue();
    missed_.reserve(scenario.revenues().size());
    for (double r : scenario.revenues()) missed_.push_back(costs_.c_fn() + p_eff * (r - r_avg));
}

double churn_tcc(const ChurnScenario& scenario, const std::vector<bool>& positive,
                 const std::vector<bool>& predicted) {
    const std::size_t n = scenario.revenues().size();
    if (positive.size() != n || predicted.size() != n) {
        throw Error(ErrorKind::invalid_argument, "masks and revenues differ in length");
    }
    const ChurnCostTable table(scenario);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (positive[i] && !predicted[i]) {
            total += table.missed_cost(i);
        } else if (!positive[i] && predicted[i]) {
            total += table.false_alarm_cost();
        }
    }
    return total;
}

}  // namespace costsense
