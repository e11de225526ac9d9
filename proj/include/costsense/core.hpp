#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace costsense {

using Count = std::uint64_t;

/// Result of a ratio-based quantity; empty when a denominator vanishes.
using MetricValue = std::optional<double>;

/// Which end of a score is better; used to rank outcomes best-first.
enum class Orientation { higher_is_better, lower_is_better };

/// 2x2 confusion matrix of a binary classifier. Counts stay integral; metrics
/// promote to floating point only when they are evaluated.
struct ConfusionMatrix {
    Count tp{0};
    Count fn{0};
    Count fp{0};
    Count tn{0};

    constexpr Count positives() const noexcept { return tp + fn; }
    constexpr Count negatives() const noexcept { return tn + fp; }
    constexpr Count total() const noexcept { return positives() + negatives(); }
    constexpr Count predicted_positive() const noexcept { return tp + fp; }
    constexpr Count predicted_negative() const noexcept { return tn + fn; }

    friend constexpr auto operator<=>(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Exchanges the roles of the two classes: tp <-> tn, fp <-> fn.
constexpr ConfusionMatrix swap_labels(const ConfusionMatrix& cm) noexcept {
    return ConfusionMatrix{cm.tn, cm.fp, cm.fn, cm.tp};
}

struct ConfusionMatrixHash {
    std::size_t operator()(const ConfusionMatrix& cm) const noexcept;
};

enum class Label { positive, negative };

/// One example with its own unit classification costs. For a positive,
/// `ucc_incorrect` is the false-negative cost and `ucc_correct` the
/// true-positive cost; for a negative they are the false-positive and
/// true-negative costs.
class LabeledExample {
public:
    LabeledExample(std::string id, Label label, double ucc_incorrect, double ucc_correct);

    const std::string& id() const noexcept { return id_; }
    Label label() const noexcept { return label_; }
    bool is_positive() const noexcept { return label_ == Label::positive; }
    double ucc_incorrect() const noexcept { return ucc_incorrect_; }
    double ucc_correct() const noexcept { return ucc_correct_; }
    /// D_a^FN for positives, E_a^FP for negatives.
    double shifted_ucc() const noexcept { return ucc_incorrect_ - ucc_correct_; }

private:
    std::string id_;
    Label label_;
    double ucc_incorrect_;
    double ucc_correct_;
};

class CostedDataset {
public:
    explicit CostedDataset(std::vector<LabeledExample> examples);

    const std::vector<LabeledExample>& examples() const noexcept { return examples_; }
    std::size_t size() const noexcept { return examples_.size(); }
    Count positives() const noexcept { return positives_; }
    Count negatives() const noexcept { return examples_.size() - positives_; }
    /// Fraction of positive examples; 0 for an empty dataset.
    double r_plus() const noexcept;

    bool contains(const std::string& id) const;
    std::size_t index_of(const std::string& id) const;

private:
    std::vector<LabeledExample> examples_;
    std::unordered_map<std::string, std::size_t> index_;
    Count positives_{0};
};

/// Hard decisions of a classifier: the ids it labels positive. Everything
/// else in the dataset is predicted negative.
struct ClassificationOutcome {
    std::set<std::string> predicted_positive;
};

/// Throws Error(invalid_outcome) if the outcome names an id the dataset lacks.
void validate_outcome(const CostedDataset& dataset, const ClassificationOutcome& outcome);

/// Per-example predicted-positive mask aligned with dataset order.
std::vector<bool> prediction_mask(const CostedDataset& dataset, const ClassificationOutcome& outcome);

ConfusionMatrix confusion_from_outcome(const CostedDataset& dataset, const ClassificationOutcome& outcome);

}  // namespace costsense
