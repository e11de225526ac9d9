#include "costsense/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "costsense/error.hpp"

namespace costsense {

namespace {

void require_pair(const RankVector& r, const RankVector& s) {
    if (r.size() != s.size()) throw Error(ErrorKind::invalid_argument, "rank vectors differ in length");
    if (r.size() < 2) throw Error(ErrorKind::degenerate, "correlation needs at least two items");
}

MetricValue weighted_pearson(std::span<const double> x, std::span<const double> y, std::span<const double> u) {
    double su = 0.0;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        su += u[i];
        mx += u[i] * x[i];
        my += u[i] * y[i];
    }
    mx /= su;
    my /= su;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += u[i] * dx * dx;
        syy += u[i] * dy * dy;
        sxy += u[i] * dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

RankVector rank_values(std::span<const double> values, Orientation orientation, double tie_tolerance) {
    if (!(tie_tolerance >= 0.0)) throw Error(ErrorKind::invalid_argument, "tie tolerance must be non-negative");
    if (values.empty()) throw Error(ErrorKind::degenerate, "cannot rank an empty list");
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "ranked values must be finite");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const bool higher = orientation == Orientation::higher_is_better;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher ? values[a] > values[b] : values[a] < values[b];
    });
    RankVector out;
    out.ranks.resize(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size()) {
            const double prev = values[order[j - 1]];
            const double next = values[order[j]];
            if (next != prev && std::abs(next - prev) > tie_tolerance * std::max(std::abs(next), std::abs(prev))) break;
            ++j;
        }
        // positions i+1 .. j share their mean
        const double shared = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) out.ranks[order[k]] = shared;
        i = j;
    }
    return out;
}

MetricValue spearman(const RankVector& r, const RankVector& s) {
    require_pair(r, s);
    const std::vector<double> unit(r.size(), 1.0);
    return weighted_pearson(r.ranks, s.ranks, unit);
}

MetricValue weighted_spearman(const RankVector& r, const RankVector& s, double n0) {
    require_pair(r, s);
    if (!(n0 > 0.0)) throw Error(ErrorKind::domain, "n0 must be positive");
    std::vector<double> u(r.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = 1.0 / (r.ranks[i] + n0 - 1.0) + 1.0 / (s.ranks[i] + n0 - 1.0);
    }
    return weighted_pearson(r.ranks, s.ranks, u);
}

MetricValue correlate(const CorrelationScheme& scheme, const RankVector& r, const RankVector& s) {
    return scheme.kind == CorrelationKind::standard ? spearman(r, s) : weighted_spearman(r, s, scheme.n0);
}

}  // namespace costsense
