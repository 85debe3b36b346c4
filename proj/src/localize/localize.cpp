#include "fairfix/localize.hpp"

#include <cmath>

#include "../common/first_error.hpp"
#include "fairfix/error.hpp"

namespace fairfix {

std::vector<LabeledInput> labeled_inputs(const LabeledDataset& dataset,
                                         std::span<const std::size_t> indices) {
    std::vector<LabeledInput> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        const LabeledSample& s = dataset[i];
        out.push_back({s.x, static_cast<std::size_t>(s.y)});
    }
    return out;
}

Matrix grad_loss_subset(const Model& model, std::span<const LabeledInput> subset, std::size_t layer) {
    const DenseLayer& target = model.layer(layer);
    if (subset.empty()) return Matrix(target.in_dim, target.out_dim);
    Matrix g = grad_target_layer(model, subset, layer);
    for (double& v : g.data) v = std::fabs(v);
    return g;
}

Matrix fwd_impact_subset(const Model& model, std::span<const LabeledInput> subset, std::size_t layer) {
    const DenseLayer& target = model.layer(layer);
    Matrix impact(target.in_dim, target.out_dim);
    if (subset.empty()) return impact;

    std::vector<double> mean_in(target.in_dim, 0.0);
    std::vector<double> d_output(target.out_dim, 0.0);
    std::vector<double> d_prob(model.num_classes());
    for (const LabeledInput& sample : subset) {
        const ActivationTrace trace = forward(model, sample.x);
        const auto probs = trace.output();
        const double p_true = probs[sample.y];
        // d p_y / d z_k through the softmax
        for (std::size_t k = 0; k < d_prob.size(); ++k) {
            d_prob[k] = p_true * ((k == sample.y ? 1.0 : 0.0) - probs[k]);
        }
        const std::vector<double> delta = backprop_to_layer(model, trace, layer, d_prob);
        const auto input = layer_input(trace, sample.x, layer);
        for (std::size_t i = 0; i < target.in_dim; ++i) mean_in[i] += input[i];
        for (std::size_t j = 0; j < target.out_dim; ++j) d_output[j] += delta[j];
    }
    const double n = static_cast<double>(subset.size());
    for (double& v : mean_in) v /= n;
    for (double& v : d_output) v /= n;

    const double fan_in = static_cast<double>(target.in_dim);
    for (std::size_t j = 0; j < target.out_dim; ++j) {
        const double bias_share = target.biases[j] / fan_in;
        double total = 0.0;
        for (std::size_t i = 0; i < target.in_dim; ++i) {
            total += std::fabs(target.weight(i, j) * mean_in[i] + bias_share);
        }
        if (total == 0.0) continue;
        for (std::size_t i = 0; i < target.in_dim; ++i) {
            const double share = (target.weight(i, j) * mean_in[i] + bias_share) / total;
            impact(i, j) = std::fabs(share * d_output[j]);
        }
    }
    return impact;
}

ScoringRoles scoring_roles(const BiasWeights& bias) {
    ScoringRoles roles;
    roles.deprived = bias.deprived;
    if (bias.setting == Setting::same) {
        roles.first_outcome = kNeg;
        roles.second_outcome = kPos;
        roles.first_weight = bias.w_primary;
        roles.second_weight = bias.w_secondary;
        return roles;
    }
    const int first = bias.prioritized_class().value_or(0);
    roles.first_outcome = first;
    roles.second_outcome = 1 - first;
    roles.first_weight = bias.class_weight(first);
    roles.second_weight = bias.class_weight(1 - first);
    return roles;
}

std::vector<WeightScore> score_weights(std::size_t layer, const CellMatrices& grads,
                                       const CellMatrices& impacts, const BiasWeights& bias) {
    const Matrix& shape = grads[0];
    for (const auto* set : {&grads, &impacts}) {
        for (const Matrix& m : *set) {
            if (!m.same_shape(shape)) throw InputError("score matrices differ in shape");
        }
    }
    const ScoringRoles roles = scoring_roles(bias);
    const int dep = roles.deprived;
    const int fav = 1 - dep;
    auto term = [&](const CellMatrices& m, int outcome, double weight, std::size_t i, std::size_t j) {
        return weight * m[SubgroupPartition::index(outcome, dep)](i, j) /
               (1.0 + m[SubgroupPartition::index(outcome, fav)](i, j));
    };
    std::vector<WeightScore> scores;
    scores.reserve(shape.rows * shape.cols);
    for (std::size_t i = 0; i < shape.rows; ++i) {
        for (std::size_t j = 0; j < shape.cols; ++j) {
            WeightScore s;
            s.coord = {layer, i, j};
            s.grad_score = term(grads, roles.first_outcome, roles.first_weight, i, j) -
                           term(grads, roles.second_outcome, roles.second_weight, i, j);
            s.fwd_score = term(impacts, roles.first_outcome, roles.first_weight, i, j) -
                          term(impacts, roles.second_outcome, roles.second_weight, i, j);
            scores.push_back(s);
        }
    }
    return scores;
}

LocalizationResult fairfl(const Model& model, const LabeledDataset& dataset,
                          const LocalizationOptions& options) {
    model.layer(options.layer);
    const LabeledDataset annotated = annotate_predictions(dataset, model);

    LocalizationResult result;
    result.setting = options.setting;
    result.layer = options.layer;
    const std::vector<std::size_t> pos = correctly_classified(annotated);
    const std::vector<std::size_t> neg = misclassified(annotated);
    result.correct = pos.size();
    result.misclassified = neg.size();

    const SubgroupPartition full = options.setting == Setting::same ? partition_settsame(annotated)
                                                                    : partition_settdiff(annotated);
    for (std::size_t c = 0; c < 4; ++c) result.cell_sizes[c] = full.cells[c].size();

    if (neg.empty()) {
        result.nothing_to_localize = true;
        result.deprived = identify_deprived(annotated);
        return result;
    }

    const std::vector<std::size_t> balanced = balance_positive_sample(pos, neg.size(), options.seed);
    result.positives_sampled = balanced.size();
    result.deprived = identify_deprived(annotated);
    const int deprived = result.deprived.group;
    result.bias = options.setting == Setting::same
                      ? bias_weights_settsame(full, deprived, options.weight_cap)
                      : bias_weights_settdiff(full, annotated, deprived, options.weight_cap);

    SubgroupPartition used;
    used.setting = options.setting;
    if (options.setting == Setting::same) {
        used.cell(kNeg, 0) = full.cell(kNeg, 0);
        used.cell(kNeg, 1) = full.cell(kNeg, 1);
        for (std::size_t i : balanced) used.cell(kPos, annotated[i].s).push_back(i);
    } else {
        for (std::size_t i : balanced) used.cell(annotated[i].y, annotated[i].s).push_back(i);
    }
    for (std::size_t c = 0; c < 4; ++c) result.cell_sizes_used[c] = used.cells[c].size();

    std::array<std::vector<LabeledInput>, 4> inputs;
    for (std::size_t c = 0; c < 4; ++c) inputs[c] = labeled_inputs(annotated, used.cells[c]);

    // Eight independent (cell, measure) jobs over the shared immutable model.
    CellMatrices grads;
    CellMatrices impacts;
    detail::FirstError errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (int job = 0; job < 8; ++job) {
        errors.run([&] {
            const std::size_t c = static_cast<std::size_t>(job / 2);
            if (job % 2 == 0) {
                grads[c] = grad_loss_subset(model, inputs[c], options.layer);
            } else {
                impacts[c] = fwd_impact_subset(model, inputs[c], options.layer);
            }
        });
    }
    errors.rethrow();

    result.scored = score_weights(options.layer, grads, impacts, *result.bias);
    result.pareto = pareto_front(result.scored, options.top_k);
    return result;
}

}  // namespace fairfix
