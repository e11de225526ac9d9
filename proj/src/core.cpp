#include "costsense/core.hpp"

#include <cmath>

#include "costsense/error.hpp"

namespace costsense {

std::size_t ConfusionMatrixHash::operator()(const ConfusionMatrix& cm) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Count v : {cm.tp, cm.fn, cm.fp, cm.tn}) {
        h ^= std::hash<Count>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

LabeledExample::LabeledExample(std::string id, Label label, double ucc_incorrect, double ucc_correct)
    : id_(std::move(id)), label_(label), ucc_incorrect_(ucc_incorrect), ucc_correct_(ucc_correct) {
    if (!std::isfinite(ucc_incorrect) || !std::isfinite(ucc_correct)) {
        throw Error(ErrorKind::invalid_argument, "example '" + id_ + "' has non-finite costs");
    }
    if (!(ucc_incorrect > ucc_correct)) {
        throw Error(ErrorKind::incoherent_costs,
                    "example '" + id_ + "' must cost more when misclassified than when classified correctly");
    }
}

CostedDataset::CostedDataset(std::vector<LabeledExample> examples) : examples_(std::move(examples)) {
    index_.reserve(examples_.size());
    for (std::size_t i = 0; i < examples_.size(); ++i) {
        const auto& ex = examples_[i];
        if (!index_.emplace(ex.id(), i).second) {
            throw Error(ErrorKind::invalid_argument, "duplicate example id '" + ex.id() + "'");
        }
        if (ex.is_positive()) ++positives_;
    }
}

double CostedDataset::r_plus() const noexcept {
    if (examples_.empty()) return 0.0;
    return static_cast<double>(positives_) / static_cast<double>(examples_.size());
}

bool CostedDataset::contains(const std::string& id) const { return index_.contains(id); }

std::size_t CostedDataset::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorKind::invalid_outcome, "unknown example id '" + id + "'");
    return it->second;
}

void validate_outcome(const CostedDataset& dataset, const ClassificationOutcome& outcome) {
    for (const auto& id : outcome.predicted_positive) {
        if (!dataset.contains(id)) {
            throw Error(ErrorKind::invalid_outcome, "outcome references unknown example id '" + id + "'");
        }
    }
}

std::vector<bool> prediction_mask(const CostedDataset& dataset, const ClassificationOutcome& outcome) {
    std::vector<bool> mask(dataset.size(), false);
    for (const auto& id : outcome.predicted_positive) mask[dataset.index_of(id)] = true;
    return mask;
}

ConfusionMatrix confusion_from_outcome(const CostedDataset& dataset, const ClassificationOutcome& outcome) {
    validate_outcome(dataset, outcome);
    const auto mask = prediction_mask(dataset, outcome);
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const bool predicted = mask[i];
        if (dataset.examples()[i].is_positive()) {
            (predicted ? cm.tp : cm.fn) += 1;
        } else {
            (predicted ? cm.fp : cm.tn) += 1;
        }
    }
    return cm;
}

}  // namespace costsense
