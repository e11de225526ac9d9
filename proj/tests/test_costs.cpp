#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "costsense/costs.hpp"
#include "costsense/error.hpp"

using namespace costsense;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::invalid_argument;
}

}  // namespace

TEST_CASE("shifted costs from a cost matrix") {
    auto s = shifted_from_matrix({0, 2, 1, 0});
    CHECK(s.c_fn() == 2);
    CHECK(s.c_fp() == 1);
    CHECK(s.r_c() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    s = shifted_from_matrix({0, 1, 1, 0});
    CHECK(s.r_c() == 0.5);
    s = shifted_from_matrix({5, 7, 4, 1});
    CHECK(s.c_fn() == 2);
    CHECK(s.c_fp() == 3);
    CHECK(s.r_c() == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(kind_of([] { shifted_from_matrix({2, 1, 1, 0}); }) == ErrorKind::incoherent_costs);
    CHECK(kind_of([] { shifted_from_matrix({0, 1, 1, 1}); }) == ErrorKind::incoherent_costs);
}

TEST_CASE("example-independent TCC") {
    const ShiftedCosts c(2, 1);
    CHECK(tcc_example_independent({5, 0, 0, 5}, c) == 0);
    CHECK(tcc_example_independent({2, 3, 4, 1}, c) == 10);
    const ConfusionMatrix worst{0, 7, 9, 0};
    CHECK(tcc_example_independent(worst, c) == tcc_max(worst, c));
    CHECK(tcc_max(worst, c) == 2 * 7 + 9);
    CHECK(tcc_example_independent({2, 3, 4, 1}, c, 5) == 15);
    CHECK(tcc_min_of(CostMatrix{1, 3, 4, 2}, ConfusionMatrix{2, 3, 4, 1}) == 1 * 5 + 2 * 5);
}

TEST_CASE("example-dependent TCC by hand") {
    const CostedDataset d({LabeledExample("a", Label::positive, 10, 1), LabeledExample("b", Label::positive, 7, 2),
                           LabeledExample("c", Label::negative, 4, 0.5)});
    ClassificationOutcome o;
    o.predicted_positive = {"a"};  // b is a false negative, c a true negative
    CHECK(tcc_example_dependent(d, o) == doctest::Approx(1 + 7 + 0.5));
    ClassificationOutcome perfect;
    perfect.predicted_positive = {"a", "b"};
    CHECK(tcc_example_dependent(d, perfect) == doctest::Approx(tcc_min_of(d)));
    CHECK(tcc_min_of(d) == doctest::Approx(3.5));
}

TEST_CASE("reduction to the confusion-matrix TCC and zero fluctuation") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        CostMatrix cmx;
        cmx.c_tp = u(gen);
        cmx.c_tn = u(gen);
        cmx.c_fn = cmx.c_tp + 0.1 + u(gen);
        cmx.c_fp = cmx.c_tn + 0.1 + u(gen);
        std::vector<LabeledExample> ex;
        ClassificationOutcome o;
        const int n = 1 + static_cast<int>(gen() % 30);
        for (int i = 0; i < n; ++i) {
            const bool pos = gen() & 1;
            const std::string id = "e" + std::to_string(i);
            ex.emplace_back(id, pos ? Label::positive : Label::negative, pos ? cmx.c_fn : cmx.c_fp,
                            pos ? cmx.c_tp : cmx.c_tn);
            if (gen() & 1) o.predicted_positive.insert(id);
        }
        const CostedDataset d(std::move(ex));
        const auto cm = confusion_from_outcome(d, o);
        const auto shifted = shifted_from_matrix(cmx);
        const double expected = tcc_example_independent(cm, shifted, tcc_min_of(cmx, cm));
        CHECK(tcc_example_dependent(d, o) == doctest::Approx(expected).epsilon(1e-12));
        const auto dec = decompose_tcc(d, o, shifted);
        CHECK(std::abs(dec.fluctuation) <= 1e-12 * (1 + std::abs(dec.total)));
    }
}

TEST_CASE("decomposition sums to the example-dependent TCC") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<LabeledExample> ex;
        ClassificationOutcome o;
        const int n = 1 + static_cast<int>(gen() % 40);
        for (int i = 0; i < n; ++i) {
            const double correct = u(gen);
            const std::string id = "e" + std::to_string(i);
            ex.emplace_back(id, (gen() & 1) ? Label::positive : Label::negative, correct + u(gen), correct);
            if (gen() & 1) o.predicted_positive.insert(id);
        }
        const CostedDataset d(std::move(ex));
        const ShiftedCosts avg(u(gen), u(gen));
        const auto dec = decompose_tcc(d, o, avg);
        const double direct = tcc_example_dependent(d, o);
        CHECK(std::abs(dec.mean_term + dec.baseline + dec.fluctuation - direct) <= 1e-9 * std::abs(direct));
        CHECK(dec.total == doctest::Approx(direct).epsilon(1e-9));
        CHECK(dec.baseline <= direct + 1e-9);
    }
}

TEST_CASE("churn example costs") {
    const ChurnScenario s(10, 0.25, {80, 80, 120});
    const auto c = churn_example_costs(80, s);
    CHECK(c.d_fn == 20);
    CHECK(c.d_fn - c.d_tp == 10);
    CHECK(c.e_fp == 10);
    CHECK(c.e_tn == 0);
    CHECK(c.e_fp - c.e_tn == churn_shifted_costs(s).c_fp());

    const ChurnScenario avg(5, 0.5, {30, 50, 40});
    const auto a = churn_example_costs(avg.average_revenue(), avg);
    CHECK(a.d_fn - a.d_tp == doctest::Approx(churn_shifted_costs(avg).c_fn()));
}

TEST_CASE("churn shifted costs and retention tuning") {
    const double r_avg = 100;
    CHECK(tune_retention_cost(0.5, 0.25, r_avg) == 12.5);
    CHECK(tune_retention_cost(0.2, 0.25, r_avg) == 20);
    CHECK(tune_retention_cost(1 - 1e-12, 0.25, r_avg) < 1e-9);
    const ChurnScenario s(tune_retention_cost(0.8, 0.25, r_avg), 0.25, {100, 100});
    CHECK(s.retention_cost() == doctest::Approx(5));
    CHECK(churn_shifted_costs(s).c_fn() == doctest::Approx(20));
    const ChurnScenario half(0.25 * r_avg / 2, 0.25, {100});
    CHECK(churn_shifted_costs(half).c_fn() == churn_shifted_costs(half).c_fp());

    CHECK(kind_of([] { tune_retention_cost(0.0, 0.25, 100); }) == ErrorKind::domain);
    CHECK(kind_of([] { tune_retention_cost(1.0, 0.25, 100); }) == ErrorKind::domain);
    CHECK(kind_of([] { ChurnScenario(25, 0.25, {100}); }) == ErrorKind::infeasible_scenario);
    CHECK(kind_of([] { ChurnScenario(1, 1.5, {100}); }) == ErrorKind::domain);
    CHECK(kind_of([] { ChurnScenario(1, 0.5, {100, -1}); }) == ErrorKind::domain);

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    for (int i = 0; i < 1000; ++i) {
        const double rc = u(gen);
        const double p_eff = u(gen);
        const ChurnScenario sc(tune_retention_cost(rc, p_eff, 64.0), p_eff, {40.0, 88.0});
        CHECK(std::abs(churn_shifted_costs(sc).r_c() - rc) <= 1e-12);
    }
}

TEST_CASE("churn fluctuation of one missed churner") {
    // With full effectiveness the fluctuation is R_a - R_avg.
    const std::vector<double> revenues{50, 70, 90, 110};
    const ChurnScenario s(10, 1.0, revenues);
    const auto d = churn_dataset(s, {true, true, false, false});
    ClassificationOutcome o;
    o.predicted_positive = {"c1"};  // c0 missed
    const auto dec = decompose_tcc(d, o, churn_shifted_costs(s));
    CHECK(dec.fluctuation == doctest::Approx(50 - 80));

    const ChurnScenario q(5, 0.25, revenues);
    const auto dq = churn_dataset(q, {true, true, false, false});
    const auto decq = decompose_tcc(dq, o, churn_shifted_costs(q));
    CHECK(decq.fluctuation == doctest::Approx(0.25 * (50 - 80)));
    const ChurnCostTable table(q);
    CHECK(table.deviation(0) == doctest::Approx(0.25 * (50 - 80)));
}

TEST_CASE("churn TCC matches the decomposition without its baseline") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> rev(60.0, 120.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 30;
        std::vector<double> revenues(n);
        for (double& r : revenues) r = rev(gen);
        const ChurnScenario s(5.0, 0.25, revenues);
        std::vector<bool> pos(n), pred(n);
        ClassificationOutcome o;
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = gen() & 1;
            pred[i] = gen() & 1;
            if (pred[i]) o.predicted_positive.insert("c" + std::to_string(i));
        }
        const auto d = churn_dataset(s, pos);
        const auto dec = decompose_tcc(d, o, churn_shifted_costs(s));
        CHECK(churn_tcc(s, pos, pred) == doctest::Approx(dec.total - dec.baseline).epsilon(1e-9));
    }
}
