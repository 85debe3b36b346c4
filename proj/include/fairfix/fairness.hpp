#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace fairfix {

class LabeledDataset;

/// Confusion tallies of one sensitive group, relative to the positive class.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    std::size_t actual_positive() const { return tp + fn; }
    std::size_t actual_negative() const { return fp + tn; }
    std::size_t predicted_positive() const { return tp + fp; }
    std::size_t correct() const { return tp + tn; }
    std::size_t wrong() const { return fp + fn; }

    bool operator==(const Confusion&) const = default;
};

struct GroupCounts {
    std::array<Confusion, 2> group;

    std::size_t total() const { return group[0].total() + group[1].total(); }
    bool operator==(const GroupCounts&) const = default;
};

GroupCounts group_counts(const LabeledDataset& dataset, int positive_class = 1);
GroupCounts group_counts(std::span<const int> y, std::span<const int> s, std::span<const int> y_hat,
                         int positive_class = 1);

// Gap metrics are magnitudes, independent of which group is deprived.
// Each throws UndefinedMetric when a conditioning class is empty.

/// |P(Ŷ=1 | S=0) − P(Ŷ=1 | S=1)|
double spd(const GroupCounts& counts);

struct DisparateImpact {
    double raw = 1.0;    // min rate / max rate, in [0, 1]
    double score = 0.0;  // |1 − raw|
};

DisparateImpact di(const GroupCounts& counts);

/// |TPR_0 − TPR_1|
double eod(const GroupCounts& counts);

/// |FPR_0 − FPR_1|
double fpr_gap(const GroupCounts& counts);

double accuracy(const GroupCounts& counts);

/// Result of the dynamic deprived-community test: the group whose
/// misclassification cost (expected / observed misclassification
/// probability) is lowest, i.e. the group misclassified more often than an
/// unbiased model would.
struct DeprivedGroup {
    int group = 0;
    bool no_bias_signal = false;  // no misclassifications, or equal costs
    std::array<double, 2> misclassification_cost{1.0, 1.0};

    bool operator==(const DeprivedGroup&) const = default;
};

DeprivedGroup identify_deprived(const GroupCounts& counts);
DeprivedGroup identify_deprived(const LabeledDataset& dataset);

enum class Metric { spd, di, eod, fpr };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

/// All metrics of one annotated dataset. A metric whose precondition fails is nullopt.
struct FairnessReport {
    std::size_t samples = 0;
    GroupCounts counts;
    std::optional<double> spd;
    std::optional<double> di_raw;
    std::optional<double> di_score;
    std::optional<double> eod;
    std::optional<double> fpr_gap;
    double accuracy = 0.0;
    std::array<std::optional<double>, 2> accuracy_per_group;
    std::optional<DeprivedGroup> deprived;

    bool operator==(const FairnessReport&) const = default;
};

FairnessReport report(const GroupCounts& counts);
FairnessReport report(const LabeledDataset& dataset, int positive_class = 1);

/// The quantity minimized by repair: the metric magnitude (di_score for DI),
/// +infinity when undefined.
double metric_value(const FairnessReport& report, Metric metric);

}  // namespace fairfix
