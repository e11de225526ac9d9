#include "doctest.h"

#include <random>

#include "costsense/core.hpp"
#include "costsense/error.hpp"

using namespace costsense;

namespace {

CostedDataset make_dataset(int positives, int negatives) {
    std::vector<LabeledExample> ex;
    for (int i = 0; i < positives; ++i) ex.emplace_back("p" + std::to_string(i), Label::positive, 1.0, 0.0);
    for (int i = 0; i < negatives; ++i) ex.emplace_back("n" + std::to_string(i), Label::negative, 1.0, 0.0);
    return CostedDataset(std::move(ex));
}

ClassificationOutcome select(const CostedDataset& d, const std::vector<bool>& mask) {
    ClassificationOutcome o;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (mask[i]) o.predicted_positive.insert(d.examples()[i].id());
    }
    return o;
}

}  // namespace

TEST_CASE("confusion matrix totals") {
    const ConfusionMatrix cm{3, 2, 4, 1};
    CHECK(cm.positives() == 5);
    CHECK(cm.negatives() == 5);
    CHECK(cm.total() == 10);
    CHECK(cm.predicted_positive() == 7);
    CHECK(cm.predicted_negative() == 3);
    CHECK(swap_labels(cm) == ConfusionMatrix{1, 4, 2, 3});
    CHECK(swap_labels(swap_labels(cm)) == cm);
}

TEST_CASE("all-positive, all-negative and perfect outcomes") {
    const auto d = make_dataset(4, 6);
    CHECK(confusion_from_outcome(d, select(d, std::vector<bool>(10, true))) == ConfusionMatrix{4, 0, 6, 0});
    CHECK(confusion_from_outcome(d, ClassificationOutcome{}) == ConfusionMatrix{0, 4, 0, 6});

    const auto d5 = make_dataset(5, 5);
    std::vector<bool> mask(10, false);
    for (int i = 0; i < 5; ++i) mask[i] = true;
    CHECK(confusion_from_outcome(d5, select(d5, mask)) == ConfusionMatrix{5, 0, 0, 5});
}

TEST_CASE("unknown ids are rejected") {
    const auto d = make_dataset(2, 2);
    ClassificationOutcome o;
    o.predicted_positive.insert("ghost");
    CHECK_THROWS_AS(confusion_from_outcome(d, o), Error);
    try {
        confusion_from_outcome(d, o);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_outcome);
    }
}

TEST_CASE("dataset invariants") {
    CHECK_THROWS_AS(CostedDataset({LabeledExample("a", Label::positive, 1, 0), LabeledExample("a", Label::negative, 1, 0)}),
                    Error);
    CHECK_THROWS_AS(LabeledExample("x", Label::positive, 1.0, 1.0), Error);
    const auto d = make_dataset(3, 7);
    CHECK(d.r_plus() == doctest::Approx(0.3));
    CHECK(d.contains("n6"));
    CHECK_FALSE(d.contains("n7"));
    CHECK(d.index_of("p0") == 0);
}

TEST_CASE("partition and monotone properties") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = static_cast<int>(gen() % 10);
        const int n = static_cast<int>(gen() % 10) + 1;
        const auto d = make_dataset(p, n);
        std::vector<bool> mask(d.size());
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = gen() & 1;
        const auto cm = confusion_from_outcome(d, select(d, mask));
        CHECK(cm.tp + cm.fn == static_cast<Count>(p));
        CHECK(cm.fp + cm.tn == static_cast<Count>(n));

        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) continue;
            auto more = mask;
            more[i] = true;
            const auto cm2 = confusion_from_outcome(d, select(d, more));
            if (d.examples()[i].is_positive()) {
                CHECK(cm2 == ConfusionMatrix{cm.tp + 1, cm.fn - 1, cm.fp, cm.tn});
            } else {
                CHECK(cm2 == ConfusionMatrix{cm.tp, cm.fn, cm.fp + 1, cm.tn - 1});
            }
        }
    }
}
