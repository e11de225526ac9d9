#include "costsense/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "costsense/error.hpp"

namespace costsense {

namespace {

bool in_closed_unit(double x) { return x >= 0.0 && x <= 1.0; }
bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

double log_beta_function(double a, double b) {
    return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

double wa_denominator(double w, double positives, double negatives) {
    return w * positives + (1.0 - w) * negatives;
}

// Split points that bracket the bulk of a Beta density, so that sharply
// peaked laws (large alpha + beta) are not stepped over by the first rule.
std::vector<double> beta_breakpoints(const BetaParams& p) {
    const double m = p.mean();
    const double sd = std::sqrt(p.variance());
    std::vector<double> pts{0.0, 1.0};
    for (double k : {-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0}) {
        const double x = m + k * sd;
        if (x > 0.0 && x < 1.0) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

WeightSpec::WeightSpec(double w) : w_(w) {
    if (!in_closed_unit(w)) throw Error(ErrorKind::domain, "WA weight must lie in [0, 1]");
}

TargetProfile::TargetProfile(double dev, double target) : r_plus_dev(dev), r_plus_target(target) {
    if (!in_open_unit(dev) || !in_open_unit(target)) {
        throw Error(ErrorKind::domain, "development and target positive ratios must lie strictly inside (0, 1)");
    }
}

BetaParams::BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorKind::domain, "Beta shape parameters must be positive and finite");
    }
}

double BetaParams::variance() const noexcept {
    const double s = alpha_ + beta_;
    return alpha_ * beta_ / (s * s * (s + 1.0));
}

Distribution Distribution::beta(BetaParams params) {
    return Distribution(Beta{params, log_beta_function(params.alpha(), params.beta())});
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(in_closed_unit(lo) && in_closed_unit(hi) && lo < hi)) {
        throw Error(ErrorKind::domain, "uniform support must satisfy 0 <= lo < hi <= 1");
    }
    return Distribution(Uniform{lo, hi});
}

Distribution Distribution::tabulated(std::vector<double> xs, std::vector<double> density) {
    if (xs.size() < 2 || xs.size() != density.size()) {
        throw Error(ErrorKind::domain, "tabulated density needs at least two (x, density) pairs");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!in_closed_unit(xs[i])) throw Error(ErrorKind::domain, "tabulated abscissae must lie in [0, 1]");
        if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorKind::domain, "tabulated abscissae must increase");
        if (!std::isfinite(density[i]) || density[i] < 0.0) {
            throw Error(ErrorKind::domain, "tabulated densities must be non-negative and finite");
        }
    }
    double area = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) area += 0.5 * (density[i] + density[i - 1]) * (xs[i] - xs[i - 1]);
    if (!(area > 0.0)) throw Error(ErrorKind::domain, "tabulated density has zero mass");
    for (double& d : density) d /= area;
    return Distribution(Tabulated{std::move(xs), std::move(density)});
}

Distribution Distribution::point(double x) {
    if (!in_closed_unit(x)) throw Error(ErrorKind::domain, "point mass must lie in [0, 1]");
    return Distribution(Point{x});
}

double Distribution::pdf(double x) const {
    return std::visit(
        [x](const auto& law) -> double {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Beta>) {
                if (x <= 0.0 || x >= 1.0) return 0.0;
                const double a = law.params.alpha();
                const double b = law.params.beta();
                return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - law.log_norm);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return (x >= law.lo && x <= law.hi) ? 1.0 / (law.hi - law.lo) : 0.0;
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                if (x < law.xs.front() || x > law.xs.back()) return 0.0;
                auto it = std::upper_bound(law.xs.begin(), law.xs.end(), x);
                if (it == law.xs.end()) return law.density.back();
                const auto i = static_cast<std::size_t>(it - law.xs.begin());
                const double t = (x - law.xs[i - 1]) / (law.xs[i] - law.xs[i - 1]);
                return law.density[i - 1] + t * (law.density[i] - law.density[i - 1]);
            } else {
                return 0.0;  // no density for a point mass
            }
        },
        law_);
}

double Distribution::mean() const {
    if (const auto* b = std::get_if<Beta>(&law_)) return b->params.mean();
    if (const auto* u = std::get_if<Uniform>(&law_)) return 0.5 * (u->lo + u->hi);
    if (const auto* p = std::get_if<Point>(&law_)) return p->x;
    return expect([](double x) { return x; });
}

double Distribution::variance() const {
    if (const auto* b = std::get_if<Beta>(&law_)) return b->params.variance();
    if (const auto* u = std::get_if<Uniform>(&law_)) return (u->hi - u->lo) * (u->hi - u->lo) / 12.0;
    if (std::holds_alternative<Point>(law_)) return 0.0;
    const double m = mean();
    return expect([m](double x) { return (x - m) * (x - m); });
}

Distribution Distribution::reflected() const {
    return std::visit(
        [](const auto& law) -> Distribution {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Beta>) {
                return Distribution::beta(BetaParams(law.params.beta(), law.params.alpha()));
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return Distribution::uniform(1.0 - law.hi, 1.0 - law.lo);
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                std::vector<double> xs(law.xs.rbegin(), law.xs.rend());
                for (double& x : xs) x = 1.0 - x;
                return Distribution::tabulated(std::move(xs),
                                               std::vector<double>(law.density.rbegin(), law.density.rend()));
            } else {
                return Distribution::point(1.0 - law.x);
            }
        },
        law_);
}

double Distribution::expect(const Integrand& f, const QuadratureConfig& config) const {
    if (const auto* p = std::get_if<Point>(&law_)) return f(p->x);
    if (const auto* u = std::get_if<Uniform>(&law_)) {
        return integrate(f, u->lo, u->hi, config) / (u->hi - u->lo);
    }
    if (const auto* t = std::get_if<Tabulated>(&law_)) {
        double total = 0.0;
        for (std::size_t i = 1; i < t->xs.size(); ++i) {
            const double x0 = t->xs[i - 1];
            const double x1 = t->xs[i];
            const double d0 = t->density[i - 1];
            const double d1 = t->density[i];
            if (d0 == 0.0 && d1 == 0.0) continue;
            total += integrate(
                [&](double x) { return f(x) * (d0 + (x - x0) / (x1 - x0) * (d1 - d0)); }, x0, x1, config);
        }
        return total;
    }
    const auto& b = std::get<Beta>(law_);
    const auto pts = beta_breakpoints(b.params);
    const auto weighted = [&](double x) { return f(x) * pdf(x); };
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const bool singular_left = pts[i - 1] == 0.0 && b.params.alpha() < 1.0;
        const bool singular_right = pts[i] == 1.0 && b.params.beta() < 1.0;
        total += (singular_left || singular_right) ? integrate_singular(weighted, pts[i - 1], pts[i], config)
                                                   : integrate(weighted, pts[i - 1], pts[i], config);
    }
    return total;
}

MetricValue weighted_accuracy(const ConfusionMatrix& cm, WeightSpec spec) {
    const double w = spec.value();
    const double den = wa_denominator(w, static_cast<double>(cm.positives()), static_cast<double>(cm.negatives()));
    if (den == 0.0) return std::nullopt;
    return (w * static_cast<double>(cm.tp) + (1.0 - w) * static_cast<double>(cm.tn)) / den;
}

WeightSpec weight_from_costs(const ShiftedCosts& costs) { return WeightSpec(costs.r_c()); }

WaTccRelation wa_tcc_affine(const ConfusionMatrix& cm, const ShiftedCosts& costs, double tcc_min) {
    if (cm.positives() == 0 || cm.negatives() == 0) {
        throw Error(ErrorKind::precondition, "WA/TCC relation needs both classes present");
    }
    WaTccRelation r{};
    r.wa = *weighted_accuracy(cm, weight_from_costs(costs));
    r.tcc = tcc_example_independent(cm, costs, tcc_min);
    r.tcc_min = tcc_min;
    r.tcc_max = tcc_max(cm, costs, tcc_min);
    return r;
}

WeightSpec balanced_weight(double r_c, Count positives, Count negatives) {
    if (positives == 0 || negatives == 0) {
        throw Error(ErrorKind::precondition, "balanced weight needs both classes present");
    }
    if (!in_open_unit(r_c)) throw Error(ErrorKind::domain, "r_C must lie strictly inside (0, 1)");
    const double p = static_cast<double>(positives);
    const double n = static_cast<double>(negatives);
    return WeightSpec(r_c * n / (r_c * n + (1.0 - r_c) * p));
}

WeightSpec balanced_weight(const ShiftedCosts& costs, Count positives, Count negatives) {
    return balanced_weight(costs.r_c(), positives, negatives);
}

std::vector<double> rescale_example_weights(const CostedDataset& dataset, std::span<const double> base_weights,
                                            double r_plus_target) {
    if (base_weights.size() != dataset.size()) {
        throw Error(ErrorKind::invalid_argument, "one base weight per example is required");
    }
    if (dataset.positives() == 0 || dataset.negatives() == 0) {
        throw Error(ErrorKind::precondition, "rescaling needs both classes present");
    }
    if (!in_closed_unit(r_plus_target)) throw Error(ErrorKind::domain, "target positive ratio must lie in [0, 1]");
    const double pos_scale = r_plus_target / static_cast<double>(dataset.positives());
    const double neg_scale = (1.0 - r_plus_target) / static_cast<double>(dataset.negatives());
    std::vector<double> out(base_weights.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double w = base_weights[i];
        if (!std::isfinite(w) || w < 0.0) throw Error(ErrorKind::domain, "base weights must be non-negative");
        out[i] = w * (dataset.examples()[i].is_positive() ? pos_scale : neg_scale);
        sum += out[i];
    }
    if (!(sum > 0.0)) throw Error(ErrorKind::degenerate, "rescaled weights are all zero");
    for (double& w : out) w /= sum;
    return out;
}

std::pair<double, double> class_average_weights(const CostedDataset& dataset, std::span<const double> weights) {
    if (weights.size() != dataset.size()) {
        throw Error(ErrorKind::invalid_argument, "one weight per example is required");
    }
    if (dataset.positives() == 0 || dataset.negatives() == 0) {
        throw Error(ErrorKind::precondition, "class averages need both classes present");
    }
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        (dataset.examples()[i].is_positive() ? pos : neg) += weights[i];
    }
    return {pos / static_cast<double>(dataset.positives()), neg / static_cast<double>(dataset.negatives())};
}

WeightSpec target_weight(double r_c, const TargetProfile& profile) {
    if (!in_open_unit(r_c)) throw Error(ErrorKind::domain, "r_C must lie strictly inside (0, 1)");
    const double pos = r_c * profile.r_plus_target / profile.r_plus_dev;
    const double neg = (1.0 - r_c) * (1.0 - profile.r_plus_target) / (1.0 - profile.r_plus_dev);
    return WeightSpec(pos / (pos + neg));
}

WeightSpec target_weight(const ShiftedCosts& costs, const TargetProfile& profile) {
    return target_weight(costs.r_c(), profile);
}

double accuracy_equivalence_rplus(double r_c, double r_plus_target) {
    if (!in_closed_unit(r_c) || !in_closed_unit(r_plus_target)) {
        throw Error(ErrorKind::domain, "ratios must lie in [0, 1]");
    }
    const double den = 1.0 - r_plus_target - r_c + 2.0 * r_c * r_plus_target;
    if (std::abs(den) < 1e-15) throw Error(ErrorKind::no_solution, "no development ratio makes accuracy equivalent");
    return r_c * r_plus_target / den;
}

double expected_weighted_accuracy(const ConfusionMatrix& cm, const Distribution& over_w,
                                  const QuadratureConfig& config) {
    if (cm.positives() == 0 || cm.negatives() == 0) {
        throw Error(ErrorKind::precondition, "EWA needs both classes present");
    }
    const double tp = static_cast<double>(cm.tp);
    const double tn = static_cast<double>(cm.tn);
    const double p = static_cast<double>(cm.positives());
    const double n = static_cast<double>(cm.negatives());
    return over_w.expect([=](double w) { return (w * tp + (1.0 - w) * tn) / wa_denominator(w, p, n); }, config);
}

EwaKernel::EwaKernel(Count positives, Count negatives, const Distribution& over_w, const QuadratureConfig& config)
    : positives_(positives), negatives_(negatives) {
    if (positives == 0 || negatives == 0) throw Error(ErrorKind::precondition, "EWA needs both classes present");
    const double p = static_cast<double>(positives);
    const double n = static_cast<double>(negatives);
    tp_coef_ = over_w.expect([=](double w) { return w / wa_denominator(w, p, n); }, config);
    tn_coef_ = over_w.expect([=](double w) { return (1.0 - w) / wa_denominator(w, p, n); }, config);
}

double EwaKernel::operator()(const ConfusionMatrix& cm) const {
    if (cm.positives() != positives_ || cm.negatives() != negatives_) {
        throw Error(ErrorKind::invalid_argument, "confusion matrix totals differ from the kernel's");
    }
    return static_cast<double>(cm.tp) * tp_coef_ + static_cast<double>(cm.tn) * tn_coef_;
}

BetaParams beta_from_moments(double mean, double variance) {
    if (!in_open_unit(mean)) throw Error(ErrorKind::infeasible_moments, "mean must lie strictly inside (0, 1)");
    const double bound = mean * (1.0 - mean);
    if (!(variance > 0.0) || !(variance < bound)) {
        throw Error(ErrorKind::infeasible_moments, "variance must lie in (0, mean * (1 - mean))");
    }
    const double k = bound / variance - 1.0;
    return BetaParams(mean * k, (1.0 - mean) * k);
}

}  // namespace costsense
