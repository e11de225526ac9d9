#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "costsense/costs.hpp"
#include "costsense/error.hpp"
#include "costsense/metrics.hpp"
#include "costsense/weighting.hpp"
#include "oracles.hpp"

using namespace costsense;

namespace {

oracle::Cm as_oracle(const ConfusionMatrix& cm) {
    return {static_cast<double>(cm.tp), static_cast<double>(cm.fn), static_cast<double>(cm.fp),
            static_cast<double>(cm.tn)};
}

ConfusionMatrix random_cm(std::mt19937_64& gen, Count min_class, Count max_class) {
    const Count p = min_class + gen() % (max_class - min_class + 1);
    const Count n = min_class + gen() % (max_class - min_class + 1);
    const Count tp = gen() % (p + 1);
    const Count tn = gen() % (n + 1);
    return {tp, p - tp, n - tn, tn};
}

}  // namespace

TEST_CASE("weighted accuracy examples") {
    const ConfusionMatrix cm{30, 20, 10, 40};
    CHECK(*weighted_accuracy(cm, WeightSpec(0.5)) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(*weighted_accuracy(cm, WeightSpec(2.0 / 3.0)) == doctest::Approx((20.0 + 40.0 / 3.0) / 50.0).epsilon(1e-14));
    for (double w : {0.0, 0.2, 0.9, 1.0}) CHECK(*weighted_accuracy({4, 0, 0, 6}, WeightSpec(w)) == 1.0);
    CHECK_FALSE(weighted_accuracy({0, 0, 3, 2}, WeightSpec(1.0)).has_value());
    CHECK_FALSE(weighted_accuracy({3, 2, 0, 0}, WeightSpec(0.0)).has_value());
    CHECK_THROWS_AS(WeightSpec(1.5), Error);
    CHECK_THROWS_AS(WeightSpec(-0.1), Error);

    std::mt19937_64 gen(1);
    for (int i = 0; i < 1000; ++i) {
        const auto c = random_cm(gen, 1, 50);
        const double acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
        CHECK(std::abs(*weighted_accuracy(c, WeightSpec(0.5)) - acc) <= 1e-14);
        const double w = static_cast<double>(gen() % 1001) / 1000.0;
        const double v = *weighted_accuracy(c, WeightSpec(w));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(std::abs(v - oracle::wa(as_oracle(c), w)) <= 1e-14);
    }
}

TEST_CASE("weight from costs") {
    CHECK(weight_from_costs(ShiftedCosts(3, 3)).value() == 0.5);
    CHECK(weight_from_costs(ShiftedCosts(2, 1)).value() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(weight_from_costs(ShiftedCosts(35, 1)).value() == doctest::Approx(0.972).epsilon(0.0005));
}

TEST_CASE("WA and TCC affine relation") {
    const ShiftedCosts c(3, 2);
    auto r = wa_tcc_affine({7, 0, 0, 9}, c);
    CHECK(r.wa == 1.0);
    CHECK(r.tcc == r.tcc_min);
    r = wa_tcc_affine({0, 7, 9, 0}, c);
    CHECK(r.wa == doctest::Approx(0.0));
    CHECK(r.tcc == r.tcc_max);

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int i = 0; i < 10000; ++i) {
        const auto cm = random_cm(gen, 1, 500);
        const ShiftedCosts costs(u(gen), u(gen));
        const double tcc_min = (gen() & 1) ? u(gen) : 0.0;
        const auto rel = wa_tcc_affine(cm, costs, tcc_min);
        const double affine = 1.0 - (rel.tcc - rel.tcc_min) / (rel.tcc_max - rel.tcc_min);
        CHECK(std::abs(rel.wa - affine) <= 1e-12);
        CHECK(rel.tcc_max == doctest::Approx(costs.c_fn() * cm.positives() + costs.c_fp() * cm.negatives() + tcc_min));
    }
}

TEST_CASE("rank equivalence of WA and TCC, exhaustive on small totals") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> u(0.05, 20.0);
    for (Count total = 2; total <= 12; ++total) {
        for (Count p = 1; p < total; ++p) {
            const Count n = total - p;
            for (int k = 0; k < 10; ++k) {
                const ShiftedCosts costs(u(gen), u(gen));
                const WeightSpec w = weight_from_costs(costs);
                for (Count tp1 = 0; tp1 <= p; ++tp1) {
                    for (Count tn1 = 0; tn1 <= n; ++tn1) {
                        const ConfusionMatrix a{tp1, p - tp1, n - tn1, tn1};
                        const double wa_a = *weighted_accuracy(a, w);
                        const double tcc_a = tcc_example_independent(a, costs);
                        for (Count tp2 = 0; tp2 <= p; ++tp2) {
                            for (Count tn2 = 0; tn2 <= n; ++tn2) {
                                const ConfusionMatrix b{tp2, p - tp2, n - tn2, tn2};
                                const double wa_b = *weighted_accuracy(b, w);
                                const double tcc_b = tcc_example_independent(b, costs);
                                const double eps = 1e-12;
                                const int by_wa = wa_a > wa_b + eps ? 1 : (wa_b > wa_a + eps ? -1 : 0);
                                const int by_tcc = tcc_a < tcc_b - eps * 100 ? 1 : (tcc_b < tcc_a - eps * 100 ? -1 : 0);
                                REQUIRE(by_wa == by_tcc);
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("balanced weight") {
    CHECK(balanced_weight(0.5, 10, 10).value() == 0.5);
    CHECK(balanced_weight(0.5, 5, 95).value() == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(balanced_weight(0.9, 10, 90).value() == doctest::Approx(81.0 / 82.0).epsilon(1e-15));
    CHECK(balanced_weight(ShiftedCosts(9, 1), 10, 90).value() == doctest::Approx(81.0 / 82.0).epsilon(1e-15));
}

TEST_CASE("example weight rescaling") {
    std::vector<LabeledExample> ex;
    for (int i = 0; i < 2; ++i) ex.emplace_back("p" + std::to_string(i), Label::positive, 1, 0);
    for (int i = 0; i < 8; ++i) ex.emplace_back("n" + std::to_string(i), Label::negative, 1, 0);
    const CostedDataset d(std::move(ex));
    const std::vector<double> uniform(10, 3.0);

    auto same = rescale_example_weights(d, uniform, d.r_plus());
    for (double w : same) CHECK(w == doctest::Approx(0.1).epsilon(1e-14));

    auto half = rescale_example_weights(d, uniform, 0.5);
    for (int i = 0; i < 2; ++i) CHECK(half[i] == doctest::Approx(0.25).epsilon(1e-14));
    for (int i = 2; i < 10; ++i) CHECK(half[i] == doctest::Approx(0.0625).epsilon(1e-14));

    for (double w : {0.1, 0.5, 0.8}) {
        std::vector<double> base;
        for (const auto& e : d.examples()) base.push_back(e.is_positive() ? w : 1 - w);
        const auto scaled = rescale_example_weights(d, base, 0.5);
        const auto [pos, neg] = class_average_weights(d, scaled);
        CHECK(pos / (pos + neg) == doctest::Approx(balanced_weight(w, 2, 8).value()).epsilon(1e-13));
    }
    CHECK_THROWS_AS(rescale_example_weights(d, std::vector<double>(10, 0.0), 0.5), Error);
    CHECK_THROWS_AS(rescale_example_weights(d, std::vector<double>(9, 1.0), 0.5), Error);
}

TEST_CASE("target weight and accuracy equivalence") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 1000; ++i) {
        const double rc = u(gen), rp = u(gen), rt = u(gen);
        CHECK(std::abs(target_weight(rc, TargetProfile(rp, rp)).value() - rc) <= 1e-12);
        const Count p = 1 + gen() % 200, n = 1 + gen() % 200;
        const double dev = static_cast<double>(p) / static_cast<double>(p + n);
        CHECK(std::abs(target_weight(rc, TargetProfile(dev, 0.5)).value() - balanced_weight(rc, p, n).value()) <=
              1e-12);
        const double eq = accuracy_equivalence_rplus(rc, rt);
        CHECK(std::abs(target_weight(rc, TargetProfile(eq, rt)).value() - 0.5) <= 1e-12);
    }
    const double expected = (2.0 / 3.0 * 4.0) / (2.0 / 3.0 * 4.0 + 1.0 / 3.0 * 0.8 / 0.95);
    CHECK(target_weight(ShiftedCosts(2, 1), TargetProfile(0.05, 0.2)).value() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.9048).epsilon(1e-4));
    CHECK(accuracy_equivalence_rplus(0.5, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(accuracy_equivalence_rplus(0.7, 0.5) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(TargetProfile(0.0, 0.5), Error);
    CHECK_THROWS_AS(TargetProfile(0.5, 1.0), Error);
}

TEST_CASE("distributions") {
    const auto b = Distribution::beta(BetaParams(2, 5));
    CHECK(b.mean() == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(b.reflected().mean() == doctest::Approx(5.0 / 7.0).epsilon(1e-14));
    CHECK(b.variance() == doctest::Approx(10.0 / (49.0 * 8.0)).epsilon(1e-14));
    CHECK(b.pdf(0.3) == doctest::Approx(oracle::beta_pdf(0.3, 2, 5)).epsilon(1e-12));
    CHECK(b.expect([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));

    const auto uni = Distribution::uniform(0.2, 0.6);
    CHECK(uni.mean() == doctest::Approx(0.4));
    CHECK(uni.pdf(0.3) == doctest::Approx(2.5));
    CHECK(uni.pdf(0.7) == 0.0);

    const auto tab = Distribution::tabulated({0.0, 0.5, 1.0}, {0.0, 4.0, 0.0});
    CHECK(tab.pdf(0.5) == doctest::Approx(2.0));
    CHECK(tab.mean() == doctest::Approx(0.5));

    const auto pt = Distribution::point(0.3);
    CHECK(pt.is_point());
    CHECK(pt.expect([](double x) { return x * x; }) == doctest::Approx(0.09));
    CHECK(pt.reflected().mean() == doctest::Approx(0.7));

    CHECK_THROWS_AS(BetaParams(0, 1), Error);
    CHECK_THROWS_AS(Distribution::uniform(0.5, 0.4), Error);
}

TEST_CASE("beta from moments") {
    const auto b = beta_from_moments(0.5, 0.05);
    CHECK(b.alpha() == doctest::Approx(2).epsilon(1e-13));
    CHECK(b.beta() == doctest::Approx(2).epsilon(1e-13));
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.1, 30);
    for (int i = 0; i < 1000; ++i) {
        const BetaParams src(u(gen), u(gen));
        const auto back = beta_from_moments(src.mean(), src.variance());
        CHECK(std::abs(back.mean() - src.mean()) <= 1e-12);
        CHECK(std::abs(back.variance() - src.variance()) <= 1e-12);
        CHECK(back.alpha() == doctest::Approx(src.alpha()).epsilon(1e-9));
    }
    try {
        beta_from_moments(0.5, 0.3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::infeasible_moments);
    }
    CHECK_THROWS_AS(beta_from_moments(0.5, 0.0), Error);
}

TEST_CASE("expected weighted accuracy") {
    // tp/P = tn/N makes WA constant in w.
    const ConfusionMatrix flat{6, 4, 12, 18};
    for (const auto& d : {Distribution::beta(BetaParams(2, 2)), Distribution::uniform(0.1, 0.3),
                          Distribution::beta(BetaParams(0.5, 3))}) {
        CHECK(expected_weighted_accuracy(flat, d) == doctest::Approx(0.6).epsilon(1e-10));
    }

    const ConfusionMatrix cm{30, 20, 10, 40};
    const oracle::Cm o{30, 20, 10, 40};
    const double delta = 0.01, mid = 0.4;
    const double err = std::abs(expected_weighted_accuracy(cm, Distribution::uniform(mid - delta, mid + delta)) -
                                oracle::wa(o, mid));
    CHECK(err <= 10 * delta * delta);

    const double riemann = oracle::riemann([&](double w) { return oracle::wa(o, w) * oracle::beta_pdf(w, 2, 2); },
                                           0, 1, 1000000);
    CHECK(std::abs(expected_weighted_accuracy(cm, Distribution::beta(BetaParams(2, 2))) - riemann) <= 1e-6);

    EwaKernel kernel(50, 50, Distribution::beta(BetaParams(3, 2)));
    std::mt19937_64 gen(2);
    for (int i = 0; i < 50; ++i) {
        const Count tp = gen() % 51, tn = gen() % 51;
        const ConfusionMatrix c{tp, 50 - tp, 50 - tn, tn};
        CHECK(kernel(c) == doctest::Approx(expected_weighted_accuracy(c, Distribution::beta(BetaParams(3, 2)))).epsilon(1e-10));
    }
    CHECK_THROWS_AS(expected_weighted_accuracy({0, 0, 3, 3}, Distribution::uniform(0.2, 0.4)), Error);
}

TEST_CASE("EWA is linear in the weight distribution") {
    std::vector<double> xs, d1, d2, mix;
    const double p = 0.3;
    for (int i = 0; i <= 400; ++i) {
        const double x = i / 400.0;
        xs.push_back(x);
        d1.push_back(oracle::beta_pdf(x, 2, 5));
        d2.push_back(oracle::beta_pdf(x, 4, 2));
    }
    const auto t1 = Distribution::tabulated(xs, d1);
    const auto t2 = Distribution::tabulated(xs, d2);
    for (std::size_t i = 0; i < xs.size(); ++i) mix.push_back(p * t1.pdf(xs[i]) + (1 - p) * t2.pdf(xs[i]));
    const auto tm = Distribution::tabulated(xs, mix);
    const ConfusionMatrix cm{12, 8, 30, 50};
    const double lhs = expected_weighted_accuracy(cm, tm);
    const double rhs = p * expected_weighted_accuracy(cm, t1) + (1 - p) * expected_weighted_accuracy(cm, t2);
    CHECK(std::abs(lhs - rhs) <= 1e-8);
}

TEST_CASE("EWA differs from the H measure") {
    const ConfusionMatrix cm{2, 8, 5, 85};
    const ShiftedCosts costs(1, 1);
    const auto law = Distribution::beta(BetaParams(2, 2));
    const double ewa = expected_weighted_accuracy(cm, law.reflected());
    const double h = *h_measure(cm, costs, law);
    CHECK(std::abs(ewa - h) > 1e-3);
}
