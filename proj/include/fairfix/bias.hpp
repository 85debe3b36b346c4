#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "fairfix/data.hpp"

namespace fairfix {

inline constexpr double kDefaultWeightCap = 1e6;

/// Probability of a (group, outcome) cell under independence:
/// (group_size / total) * (outcome_size / total).
double p_exp(std::size_t total, std::size_t group_size, std::size_t outcome_size);

/// subset_size / total.
double p_obs(std::size_t subset_size, std::size_t total);

/// p_exp / p_obs. An empty cell that is also expected empty costs 1 (no
/// signal); an empty cell that is expected non-empty costs +infinity.
double cost(double p_exp, double p_obs);

/// numerator / denominator for two costs. A single infinite operand
/// saturates the ratio at `cap` (or 1 / cap); two infinite operands throw
/// DegenerateBias naming `cell`.
double bias_ratio(double numerator, double denominator, double cap, const std::string& cell);

struct ClassCosts {
    std::array<double, 2> cost{1.0, 1.0};
    int prioritized_class = 0;  // higher cost; ties go to class 0

    bool operator==(const ClassCosts&) const = default;
};

/// Cost of class y from raw counts: [(|Y=y|/N)(|pos|/N)] / (|pos, Y=y|/N).
double class_cost(std::size_t total, std::size_t class_size, std::size_t correct_size,
                  std::size_t correct_class_size);

/// Class costs of an annotated dataset.
ClassCosts class_costs_settdiff(const LabeledDataset& dataset);

/// Bias strength pair for one localization run.
///
/// SettSame: primary = W_neg = cost(neg, favored) / cost(neg, deprived),
///           secondary = W_pos = cost(pos, deprived) / cost(pos, favored).
/// SettDiff: primary = W_0, secondary = W_1 with
///           W_y = cost(y, deprived) / cost(y, favored).
struct BiasWeights {
    Setting setting = Setting::same;
    double w_primary = 1.0;
    double w_secondary = 1.0;
    int deprived = 0;
    std::array<double, 4> cell_costs{1.0, 1.0, 1.0, 1.0};  // indexed like SubgroupPartition cells
    std::optional<ClassCosts> class_costs;                  // SettDiff only

    /// W_0 / W_1 under SettDiff.
    double class_weight(int y) const { return y == 0 ? w_primary : w_secondary; }
    std::optional<int> prioritized_class() const {
        return class_costs ? std::optional<int>(class_costs->prioritized_class) : std::nullopt;
    }

    bool operator==(const BiasWeights&) const = default;
};

BiasWeights bias_weights_settsame(const SubgroupPartition& partition, int deprived,
                                  double cap = kDefaultWeightCap);

/// `partition` is the SettDiff partition of `dataset` (correct samples only);
/// expected probabilities use the marginals of the whole dataset.
BiasWeights bias_weights_settdiff(const SubgroupPartition& partition, const LabeledDataset& dataset,
                                  int deprived, double cap = kDefaultWeightCap);

}  // namespace fairfix
