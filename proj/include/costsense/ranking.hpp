#pragma once

#include <span>
#include <vector>

#include "costsense/core.hpp"

namespace costsense {

/// Ranks with 1 = best. Tied entries share the mean of the positions they
/// occupy, so the ranks always sum to n(n+1)/2.
struct RankVector {
    std::vector<double> ranks;

    std::size_t size() const noexcept { return ranks.size(); }
};

/// Neighbours in sorted order whose relative gap is at most `tie_tolerance`
/// join the same tie group.
RankVector rank_values(std::span<const double> values, Orientation orientation, double tie_tolerance = 0.0);

/// Pearson correlation of the rank vectors. Empty when either vector is
/// constant.
MetricValue spearman(const RankVector& r, const RankVector& s);

/// Top-weighted Spearman: weighted Pearson correlation of the rank vectors,
/// item i weighted by f(r_i) + f(s_i) with f(k) = 1 / (k + n0 - 1).
MetricValue weighted_spearman(const RankVector& r, const RankVector& s, double n0);

enum class CorrelationKind { standard, weighted };

struct CorrelationScheme {
    CorrelationKind kind{CorrelationKind::standard};
    double n0{2.0};
};

MetricValue correlate(const CorrelationScheme& scheme, const RankVector& r, const RankVector& s);

}  // namespace costsense
