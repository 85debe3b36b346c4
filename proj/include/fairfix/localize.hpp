#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairfix/bias.hpp"
#include "fairfix/data.hpp"
#include "fairfix/fairness.hpp"
#include "fairfix/matrix.hpp"
#include "fairfix/model.hpp"

namespace fairfix {

/// One weight of a dense layer: input unit `row` to output unit `col`.
struct WeightCoord {
    std::size_t layer = 0;
    std::size_t row = 0;
    std::size_t col = 0;

    auto operator<=>(const WeightCoord&) const = default;
};

struct WeightScore {
    WeightCoord coord;
    double grad_score = 0.0;
    double fwd_score = 0.0;

    bool operator==(const WeightScore&) const = default;
};

/// Samples of `dataset` selected by `indices`, as gradient inputs.
std::vector<LabeledInput> labeled_inputs(const LabeledDataset& dataset,
                                         std::span<const std::size_t> indices);

/// |mean dL/dW| of `layer` over `subset`; a zero matrix for an empty subset.
Matrix grad_loss_subset(const Model& model, std::span<const LabeledInput> subset, std::size_t layer);

/// Forward impact of every weight of `layer` over `subset`.
///
/// For weight (i, j): contribution c_ij = w_ij * mean_i + b_j / fan_in, where
/// mean_i is the mean activation entering the layer; the share
/// c_ij / sum_i |c_ij| is multiplied by dO/dz_j, with O the mean probability of
/// each sample's true class and z_j the layer's pre-activation. The magnitude
/// of the product is returned. Units whose contributions are all zero get
/// share 0. An empty subset yields a zero matrix.
Matrix fwd_impact_subset(const Model& model, std::span<const LabeledInput> subset, std::size_t layer);

/// Per-cell gradient or impact matrices, indexed like SubgroupPartition::cells.
using CellMatrices = std::array<Matrix, 4>;

/// Subgroup roles of the two scoring terms.
struct ScoringRoles {
    int first_outcome = kNeg;   // outcome index of the prioritized term
    int second_outcome = kPos;  // outcome index of the subtracted term
    double first_weight = 1.0;
    double second_weight = 1.0;
    int deprived = 0;  // numerator group; the other group is the denominator
};

/// SettSame: (neg, W_neg) minus (pos, W_pos). SettDiff: the prioritized class
/// with its weight minus the other class with its weight.
ScoringRoles scoring_roles(const BiasWeights& bias);

/// score = Wa * M(a, dep) / (1 + M(a, fav)) - Wb * M(b, dep) / (1 + M(b, fav))
/// applied element-wise to the gradient and to the impact matrices.
std::vector<WeightScore> score_weights(std::size_t layer, const CellMatrices& grads,
                                       const CellMatrices& impacts, const BiasWeights& bias);

/// Coordinates of the non-dominated scores (both objectives maximized),
/// sorted by coordinate. Identical score pairs are all retained. With
/// `top_k`, a larger front keeps the top_k by grad + fwd sum (ties by coordinate).
std::vector<WeightCoord> pareto_front(std::span<const WeightScore> scores,
                                      std::optional<std::size_t> top_k = std::nullopt);

struct LocalizationOptions {
    Setting setting = Setting::same;
    std::size_t layer = 0;
    std::optional<std::size_t> top_k;
    std::uint64_t seed = 0;
    double weight_cap = kDefaultWeightCap;
};

struct LocalizationResult {
    Setting setting = Setting::same;
    std::size_t layer = 0;
    bool nothing_to_localize = false;
    std::size_t correct = 0;
    std::size_t misclassified = 0;
    std::size_t positives_sampled = 0;
    DeprivedGroup deprived;
    std::optional<BiasWeights> bias;
    std::array<std::size_t, 4> cell_sizes{};       // full partition
    std::array<std::size_t, 4> cell_sizes_used{};  // subsets fed to scoring
    std::vector<WeightScore> scored;
    std::vector<WeightCoord> pareto;

    bool operator==(const LocalizationResult&) const = default;
};

/// Full localization pipeline: annotate, partition, balance the positive
/// samples, identify the deprived group, estimate bias weights, score every
/// weight of the target layer and extract the Pareto front. Bias weights use
/// the full partition; the gradient and impact subsets use the balanced one.
LocalizationResult fairfl(const Model& model, const LabeledDataset& dataset,
                          const LocalizationOptions& options);

}  // namespace fairfix
