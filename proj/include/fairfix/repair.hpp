#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fairfix/data.hpp"
#include "fairfix/fairness.hpp"
#include "fairfix/kernels.hpp"
#include "fairfix/localize.hpp"
#include "fairfix/model.hpp"

namespace fairfix {

struct RepairConfig {
    Metric metric = Metric::spd;
    std::size_t particles = 100;
    std::size_t max_generations = 100;
    std::size_t stagnation_limit = 10;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    /// Element-wise velocity bound; defaults to 3 sigma of each slot's layer.
    std::optional<double> velocity_clamp;
    std::uint64_t seed = 0;
    int positive_class = 1;
    kernels::Execution execution = kernels::Execution::parallel;

    /// Throws InputError when a field is outside its domain.
    void validate() const;
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> pbest_position;
    double pbest_fitness = std::numeric_limits<double>::infinity();
};

struct Swarm {
    std::vector<Particle> particles;
    std::vector<double> gbest_position;
    double gbest_fitness = std::numeric_limits<double>::infinity();
    std::size_t generation = 0;
    std::size_t stagnation = 0;
    std::vector<double> velocity_clamp;  // per slot
    std::mt19937_64 rng;
};

/// Evaluates a batch of positions; returns one fitness per position.
using BatchFitness = std::function<std::vector<double>(std::span<const std::vector<double>>)>;

/// Wraps a scalar objective with the serial or OpenMP evaluation kernel.
BatchFitness batch_fitness(kernels::ScalarObjective objective, kernels::Execution exec);

/// Swarm whose slot d is drawn from Normal(mean[d], stddev[d]); particle 0
/// sits exactly at `origin`. Velocities start at 0 and pbest at the start
/// position with unknown (+inf) fitness.
Swarm init_swarm(std::span<const double> origin, std::span<const double> mean,
                 std::span<const double> stddev, const RepairConfig& config);

/// Swarm over `coords`, each slot drawn from the mean / standard deviation of
/// all weights in its layer (deviation floored at 1e-6).
Swarm init_swarm(const Model& model, std::span<const WeightCoord> coords, const RepairConfig& config);

/// Evaluates the initial positions and sets pbest / gbest.
void evaluate_initial(Swarm& swarm, const BatchFitness& fitness);

/// One generation: velocity and position update, evaluation, pbest update
/// (new fitness <= pbest), gbest update (new fitness <= gbest). Only a strict
/// gbest improvement resets the stagnation counter.
void pso_step(Swarm& swarm, const BatchFitness& fitness, const RepairConfig& config);

/// Fitness of candidate weight values on a fixed dataset. The activations
/// entering the first patched layer are computed once, so each evaluation
/// only reruns the layers from there on. Thread-safe.
class FitnessEvaluator {
public:
    FitnessEvaluator(const Model& model, std::vector<WeightCoord> coords, const LabeledDataset& dataset,
                     Metric metric, int positive_class = 1,
                     kernels::Execution exec = kernels::Execution::parallel);

    /// Metric magnitude of the model patched with `position`; +inf when undefined.
    double operator()(std::span<const double> position) const;

    /// Fairness report of the patched model, deprived group recomputed.
    FairnessReport evaluate(std::span<const double> position) const;

    std::span<const WeightCoord> coords() const noexcept { return coords_; }

private:
    std::vector<DenseLayer> suffix_;  // layers from the first patched layer on
    std::vector<WeightCoord> coords_;
    std::size_t first_layer_ = 0;
    Matrix cached_inputs_;
    std::vector<int> y_;
    std::vector<int> s_;
    Metric metric_;
    int positive_class_;
};

/// Reference fitness: patch a full model copy and annotate the whole dataset.
double fitness(const Model& model, std::span<const WeightCoord> coords, std::span<const double> position,
               const LabeledDataset& dataset, Metric metric, int positive_class = 1);

struct PatchEntry {
    WeightCoord coord;
    double old_value = 0.0;
    double new_value = 0.0;

    bool operator==(const PatchEntry&) const = default;
};

/// Copy of `model` with the patched cells set to `new_value`.
Model apply_patch(const Model& model, std::span<const PatchEntry> patch);

std::vector<PatchEntry> make_patch(const Model& model, std::span<const WeightCoord> coords,
                                   std::span<const double> values);

enum class StopReason { max_generations, stagnation };

std::string_view to_string(StopReason r);

struct RepairResult {
    Model patched_model;
    std::vector<PatchEntry> patch;
    std::vector<double> fitness_history;  // gbest after initialization, then after each generation
    std::size_t generations = 0;
    StopReason stop_reason = StopReason::max_generations;
    double original_fitness = 0.0;
    double best_fitness = 0.0;
    bool identity_fallback = false;
    FairnessReport before_repair;
    FairnessReport after_repair;
    std::optional<FairnessReport> before_test;
    std::optional<FairnessReport> after_test;
};

/// PSO search over the localized weights minimizing `config.metric` on
/// `repair_set`. If the best fitness found does not beat the original, the
/// identity patch is returned.
RepairResult repair(const Model& model, const LabeledDataset& repair_set, const LabeledDataset* test_set,
                    const LocalizationResult& localization, const RepairConfig& config);

}  // namespace fairfix
