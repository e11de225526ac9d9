#include "costsense/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "costsense/error.hpp"

namespace costsense {

WeightSpec weight_from_ucc_ratio(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain, "cost ratio v must be positive and finite");
    return WeightSpec(v / (v + 1.0));
}

std::string_view to_string(EmblematicKind kind) noexcept {
    switch (kind) {
        case EmblematicKind::m_plus: return "M_plus";
        case EmblematicKind::m_minus: return "M_minus";
        case EmblematicKind::m_bad: return "M_bad";
        case EmblematicKind::m_bad_minus: return "M_bad_minus";
        case EmblematicKind::m_bad_plus: return "M_bad_plus";
    }
    return "?";
}

WeightInterval::WeightInterval(double lo, double hi) : w_min(lo), w_max(hi) {
    if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
        throw Error(ErrorKind::domain, "weight interval must satisfy 0 <= w_min <= w_max <= 1");
    }
}

double emblematic_numerator(const EmblematicModel& model, WeightSpec spec, Count positives, Count negatives) {
    if (positives == 0 || negatives == 0) throw Error(ErrorKind::precondition, "P and N must both be positive");
    const bool uses_alpha = model.kind != EmblematicKind::m_plus && model.kind != EmblematicKind::m_minus;
    if (uses_alpha && !(model.alpha >= 0.0 && model.alpha <= 1.0)) {
        throw Error(ErrorKind::domain, "misclassified fraction alpha must lie in [0, 1]");
    }
    const double w = spec.value();
    const double pos = w * static_cast<double>(positives);
    const double neg = (1.0 - w) * static_cast<double>(negatives);
    const double kept = 1.0 - model.alpha;
    switch (model.kind) {
        case EmblematicKind::m_plus: return pos;
        case EmblematicKind::m_minus: return neg;
        case EmblematicKind::m_bad: return kept * (pos + neg);
        case EmblematicKind::m_bad_minus: return pos + kept * neg;
        case EmblematicKind::m_bad_plus: return kept * pos + neg;
    }
    return 0.0;
}

RankingBounds ranking_bounds(double alpha, Count positives, Count negatives) {
    if (positives == 0 || negatives == 0) throw Error(ErrorKind::precondition, "P and N must both be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::domain, "alpha must lie strictly inside (0, 1)");
    const double pn = static_cast<double>(positives) / static_cast<double>(negatives);
    return RankingBounds{1.0 / (1.0 + pn / alpha), 1.0 / (1.0 + alpha * pn / (1.0 - alpha))};
}

WeightInterval constraints_from_ranking(double alpha, Count positives, Count negatives) {
    if (!(alpha >= 0.5)) throw Error(ErrorKind::precondition, "the ranking constraints need alpha >= 0.5");
    const auto b = ranking_bounds(alpha, positives, negatives);
    if (b.lower > b.upper) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "alpha = " << alpha << " gives lower bound " << b.lower << " above upper bound " << b.upper
            << "; no weight satisfies the ranking (ordered only for alpha <= 0.618...)";
        throw Error(ErrorKind::inconsistent_ranking, msg.str());
    }
    return WeightInterval(b.lower, b.upper);
}

std::vector<EmblematicModel> rank_emblematic(std::vector<EmblematicModel> models, WeightSpec w, Count positives,
                                             Count negatives) {
    std::vector<std::pair<double, EmblematicModel>> scored;
    scored.reserve(models.size());
    for (const auto& m : models) scored.emplace_back(emblematic_numerator(m, w, positives, negatives), m);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second.kind < b.second.kind;
    });
    std::vector<EmblematicModel> out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back(s.second);
    return out;
}

bool ranking_chain_holds(double alpha, WeightSpec w, Count positives, Count negatives) {
    const auto a = [&](EmblematicKind k) { return emblematic_numerator({k, alpha}, w, positives, negatives); };
    return a(EmblematicKind::m_plus) <= a(EmblematicKind::m_bad) && a(EmblematicKind::m_bad) <= a(EmblematicKind::m_minus) &&
           a(EmblematicKind::m_minus) <= a(EmblematicKind::m_bad_minus) &&
           a(EmblematicKind::m_bad_minus) <= a(EmblematicKind::m_bad_plus);
}

}  // namespace costsense
