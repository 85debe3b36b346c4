#include <algorithm>
#include <cmath>

#include "fairfix/error.hpp"
#include "fairfix/repair.hpp"

namespace fairfix {

std::string_view to_string(StopReason r) {
    return r == StopReason::stagnation ? "stagnation" : "max_generations";
}

FitnessEvaluator::FitnessEvaluator(const Model& model, std::vector<WeightCoord> coords,
                                   const LabeledDataset& dataset, Metric metric, int positive_class,
                                   kernels::Execution exec)
    : coords_(std::move(coords)), metric_(metric), positive_class_(positive_class) {
    if (coords_.empty()) throw PreconditionError("nothing to repair: no weights selected");
    if (dataset.empty()) throw PreconditionError("fitness needs a non-empty dataset");
    if (dataset.feature_dim() != model.input_dim()) {
        throw InputError("dataset has " + std::to_string(dataset.feature_dim()) + " features, model expects " +
                         std::to_string(model.input_dim()));
    }
    first_layer_ = std::min_element(coords_.begin(), coords_.end())->layer;
    for (const WeightCoord& c : coords_) {
        const DenseLayer& layer = model.layer(c.layer);
        if (c.row >= layer.in_dim || c.col >= layer.out_dim) throw InputError("weight coordinate out of range");
    }
    const auto all = model.layers();
    suffix_.assign(all.begin() + static_cast<std::ptrdiff_t>(first_layer_), all.end());
    cached_inputs_ = kernels::layer_inputs(model, feature_matrix(dataset), first_layer_, exec);
    y_.reserve(dataset.size());
    s_.reserve(dataset.size());
    for (const auto& s : dataset.samples()) {
        y_.push_back(s.y);
        s_.push_back(s.s);
    }
}

FairnessReport FitnessEvaluator::evaluate(std::span<const double> position) const {
    if (position.size() != coords_.size()) throw InputError("position length does not match the weight count");
    std::vector<DenseLayer> layers = suffix_;
    for (std::size_t d = 0; d < coords_.size(); ++d) {
        if (!std::isfinite(position[d])) throw InputError("non-finite candidate weight at slot " + std::to_string(d));
        const WeightCoord& c = coords_[d];
        layers[c.layer - first_layer_].weight(c.row, c.col) = position[d];
    }
    std::vector<int> y_hat(y_.size());
    kernels::predict_rows_serial(layers, first_layer_, cached_inputs_, y_hat);
    return report(group_counts(y_, s_, y_hat, positive_class_));
}

double FitnessEvaluator::operator()(std::span<const double> position) const {
    try {
        return metric_value(evaluate(position), metric_);
    } catch (const NumericError&) {
        // a candidate whose activations overflow is as bad as an undefined metric
        return std::numeric_limits<double>::infinity();
    }
}

double fitness(const Model& model, std::span<const WeightCoord> coords, std::span<const double> position,
               const LabeledDataset& dataset, Metric metric, int positive_class) {
    if (coords.size() != position.size()) throw InputError("position length does not match the weight count");
    for (std::size_t d = 0; d < position.size(); ++d) {
        if (!std::isfinite(position[d])) throw InputError("non-finite candidate weight at slot " + std::to_string(d));
    }
    const Model patched = apply_patch(model, make_patch(model, coords, position));
    try {
        return metric_value(report(annotate_predictions(dataset, patched), positive_class), metric);
    } catch (const NumericError&) {
        return std::numeric_limits<double>::infinity();
    }
}

std::vector<PatchEntry> make_patch(const Model& model, std::span<const WeightCoord> coords,
                                   std::span<const double> values) {
    if (coords.size() != values.size()) throw InputError("patch values do not match the weight count");
    std::vector<PatchEntry> patch;
    patch.reserve(coords.size());
    for (std::size_t d = 0; d < coords.size(); ++d) {
        const WeightCoord& c = coords[d];
        const DenseLayer& layer = model.layer(c.layer);
        if (c.row >= layer.in_dim || c.col >= layer.out_dim) throw InputError("weight coordinate out of range");
        patch.push_back({c, layer.weight(c.row, c.col), values[d]});
    }
    return patch;
}

Model apply_patch(const Model& model, std::span<const PatchEntry> patch) {
    Model out = model;
    for (const PatchEntry& e : patch) out.set_weight(e.coord.layer, e.coord.row, e.coord.col, e.new_value);
    return out;
}

RepairResult repair(const Model& model, const LabeledDataset& repair_set, const LabeledDataset* test_set,
                    const LocalizationResult& localization, const RepairConfig& config) {
    config.validate();
    if (localization.pareto.empty()) {
        throw PreconditionError("nothing to repair: the localization front is empty");
    }
    const std::vector<WeightCoord>& coords = localization.pareto;
    const FitnessEvaluator evaluator(model, coords, repair_set, config.metric, config.positive_class,
                                     config.execution);
    const BatchFitness batch = batch_fitness(
        [&evaluator](std::span<const double> position) { return evaluator(position); }, config.execution);

    Swarm swarm = init_swarm(model, coords, config);
    evaluate_initial(swarm, batch);

    RepairResult result{model, {}, {}, 0, StopReason::max_generations, 0.0, 0.0, false, {}, {}, {}, {}};
    result.original_fitness = swarm.particles.front().pbest_fitness;
    result.fitness_history.push_back(swarm.gbest_fitness);
    while (swarm.generation < config.max_generations) {
        pso_step(swarm, batch, config);
        result.fitness_history.push_back(swarm.gbest_fitness);
        if (swarm.stagnation >= config.stagnation_limit) {
            result.stop_reason = StopReason::stagnation;
            break;
        }
    }
    result.generations = swarm.generation;
    result.best_fitness = swarm.gbest_fitness;

    std::vector<double> values = swarm.gbest_position;
    if (!(swarm.gbest_fitness < result.original_fitness)) {
        result.identity_fallback = true;
        result.best_fitness = result.original_fitness;
        for (std::size_t d = 0; d < coords.size(); ++d) {
            values[d] = model.layer(coords[d].layer).weight(coords[d].row, coords[d].col);
        }
    }
    result.patch = make_patch(model, coords, values);
    result.patched_model = apply_patch(model, result.patch);

    result.before_repair = report(annotate_predictions(repair_set, model), config.positive_class);
    result.after_repair = report(annotate_predictions(repair_set, result.patched_model), config.positive_class);
    if (test_set) {
        result.before_test = report(annotate_predictions(*test_set, model), config.positive_class);
        result.after_test = report(annotate_predictions(*test_set, result.patched_model), config.positive_class);
    }
    return result;
}

}  // namespace fairfix
