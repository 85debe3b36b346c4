#include <algorithm>
#include <cmath>

#include "fairfix/error.hpp"
#include "fairfix/repair.hpp"

namespace fairfix {

void RepairConfig::validate() const {
    if (particles < 2) throw InputError("PSO needs at least 2 particles");
    if (max_generations < 1) throw InputError("max_generations must be at least 1");
    if (stagnation_limit < 1) throw InputError("stagnation_limit must be at least 1");
    if (!(inertia >= 0.0 && inertia < 1.0)) throw InputError("inertia must lie in [0, 1)");
    if (!(cognitive > 0.0) || !(social > 0.0)) throw InputError("cognitive and social coefficients must be positive");
    if (velocity_clamp && !(*velocity_clamp > 0.0 && std::isfinite(*velocity_clamp))) {
        throw InputError("velocity_clamp must be positive and finite");
    }
    if (positive_class != 0 && positive_class != 1) throw InputError("positive_class must be 0 or 1");
}

BatchFitness batch_fitness(kernels::ScalarObjective objective, kernels::Execution exec) {
    return [objective = std::move(objective), exec](std::span<const std::vector<double>> positions) {
        std::vector<double> out(positions.size());
        kernels::evaluate_positions(objective, positions, out, exec);
        return out;
    };
}

Swarm init_swarm(std::span<const double> origin, std::span<const double> mean,
                 std::span<const double> stddev, const RepairConfig& config) {
    config.validate();
    const std::size_t dims = origin.size();
    if (dims == 0) throw PreconditionError("nothing to repair: no weights selected");
    if (mean.size() != dims || stddev.size() != dims) {
        throw InputError("swarm initialization vectors differ in length");
    }
    Swarm swarm;
    swarm.rng.seed(config.seed);
    swarm.velocity_clamp.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        swarm.velocity_clamp[d] = config.velocity_clamp.value_or(3.0 * stddev[d]);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    swarm.particles.resize(config.particles);
    for (std::size_t p = 0; p < config.particles; ++p) {
        Particle& particle = swarm.particles[p];
        if (p == 0) {
            particle.position.assign(origin.begin(), origin.end());
        } else {
            particle.position.resize(dims);
            for (std::size_t d = 0; d < dims; ++d) particle.position[d] = mean[d] + stddev[d] * normal(swarm.rng);
        }
        particle.velocity.assign(dims, 0.0);
        particle.pbest_position = particle.position;
    }
    swarm.gbest_position = swarm.particles.front().position;
    return swarm;
}

Swarm init_swarm(const Model& model, std::span<const WeightCoord> coords, const RepairConfig& config) {
    if (coords.empty()) throw PreconditionError("nothing to repair: no weights selected");
    std::vector<double> origin, mean, stddev;
    for (const WeightCoord& c : coords) {
        const DenseLayer& layer = model.layer(c.layer);
        if (c.row >= layer.in_dim || c.col >= layer.out_dim) throw InputError("weight coordinate out of range");
        const double n = static_cast<double>(layer.weights.size());
        double mu = 0.0;
        for (double w : layer.weights) mu += w;
        mu /= n;
        double var = 0.0;
        for (double w : layer.weights) var += (w - mu) * (w - mu);
        origin.push_back(layer.weight(c.row, c.col));
        mean.push_back(mu);
        stddev.push_back(std::max(std::sqrt(var / n), 1e-6));
    }
    return init_swarm(origin, mean, stddev, config);
}

namespace {

double sanitize(double f) { return std::isnan(f) ? std::numeric_limits<double>::infinity() : f; }

std::vector<std::vector<double>> positions_of(const Swarm& swarm) {
    std::vector<std::vector<double>> out;
    out.reserve(swarm.particles.size());
    for (const Particle& p : swarm.particles) out.push_back(p.position);
    return out;
}

void update_global_best(Swarm& swarm, std::span<const double> fits) {
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        if (fits[i] <= swarm.gbest_fitness) {
            swarm.gbest_fitness = fits[i];
            swarm.gbest_position = swarm.particles[i].position;
        }
    }
}

}  // namespace

void evaluate_initial(Swarm& swarm, const BatchFitness& fitness) {
    std::vector<double> fits = fitness(positions_of(swarm));
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        fits[i] = sanitize(fits[i]);
        swarm.particles[i].pbest_fitness = fits[i];
        swarm.particles[i].pbest_position = swarm.particles[i].position;
    }
    swarm.gbest_fitness = std::numeric_limits<double>::infinity();
    update_global_best(swarm, fits);
}

void pso_step(Swarm& swarm, const BatchFitness& fitness, const RepairConfig& config) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Particle& p : swarm.particles) {
        for (std::size_t d = 0; d < p.position.size(); ++d) {
            const double r1 = unit(swarm.rng);
            const double r2 = unit(swarm.rng);
            double v = config.inertia * p.velocity[d] +
                       config.cognitive * r1 * (p.pbest_position[d] - p.position[d]) +
                       config.social * r2 * (swarm.gbest_position[d] - p.position[d]);
            v = std::clamp(v, -swarm.velocity_clamp[d], swarm.velocity_clamp[d]);
            p.velocity[d] = v;
            p.position[d] += v;
        }
    }

    std::vector<double> fits = fitness(positions_of(swarm));
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        fits[i] = sanitize(fits[i]);
        Particle& p = swarm.particles[i];
        if (fits[i] <= p.pbest_fitness) {
            p.pbest_fitness = fits[i];
            p.pbest_position = p.position;
        }
    }
    const double previous = swarm.gbest_fitness;
    update_global_best(swarm, fits);
    swarm.stagnation = swarm.gbest_fitness < previous ? 0 : swarm.stagnation + 1;
    ++swarm.generation;
}

}  // namespace fairfix
