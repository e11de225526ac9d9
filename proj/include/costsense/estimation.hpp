#pragma once

#include <string_view>
#include <vector>

#include "costsense/core.hpp"
#include "costsense/weighting.hpp"

namespace costsense {

/// w = v / (v + 1), where v is the number of false positives one false
/// negative is worth.
WeightSpec weight_from_ucc_ratio(double v);

/// Declaration order doubles as the tie-break order when ranking.
enum class EmblematicKind { m_plus, m_minus, m_bad, m_bad_minus, m_bad_plus };

std::string_view to_string(EmblematicKind kind) noexcept;

/// A stylized classifier. `alpha` is the misclassified fraction; the dummy
/// models M+ and M- ignore it.
struct EmblematicModel {
    EmblematicKind kind;
    double alpha{0.6};
};

struct WeightInterval {
    double w_min;
    double w_max;

    WeightInterval(double lo, double hi);
    double midpoint() const noexcept { return 0.5 * (w_min + w_max); }
    bool contains(double w) const noexcept { return w >= w_min && w <= w_max; }
};

/// Numerator of WA for the model: since every model shares P and N, ordering
/// by numerator is ordering by WA.
double emblematic_numerator(const EmblematicModel& model, WeightSpec w, Count positives, Count negatives);

/// The two bounds implied by the ranking M+ <= M_bad (upper) and
/// M- <= M_bad- (lower), without checking that they are ordered:
///   lower = [1 + P / (alpha N)]^-1,  upper = [1 + alpha P / ((1 - alpha) N)]^-1.
struct RankingBounds {
    double lower;
    double upper;
};
RankingBounds ranking_bounds(double alpha, Count positives, Count negatives);

/// Weight interval consistent with the emblematic ranking
///   M+ <= M_bad <= M- <= M_bad- <= M_bad+.
/// Requires 0.5 <= alpha < 1 (Error(precondition) otherwise). The two bounds
/// are ordered only while alpha^2 + alpha <= 1; past that the ranking admits
/// no weight and Error(inconsistent_ranking) is raised.
WeightInterval constraints_from_ranking(double alpha, Count positives, Count negatives);

/// Models sorted best first by WA numerator; ties keep declaration order of
/// EmblematicKind.
std::vector<EmblematicModel> rank_emblematic(std::vector<EmblematicModel> models, WeightSpec w, Count positives,
                                             Count negatives);

/// True when w reproduces the full chain M+ <= M_bad <= M- <= M_bad- <= M_bad+
/// for the given alpha, including the middle comparisons that do not enter
/// the interval.
bool ranking_chain_holds(double alpha, WeightSpec w, Count positives, Count negatives);

}  // namespace costsense
