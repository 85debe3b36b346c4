#include <cmath>

#include "fairfix/error.hpp"
#include "fairfix/model.hpp"

namespace fairfix {

namespace {

double activation_slope(Activation act, double pre, double post) {
    switch (act) {
        case Activation::identity: return 1.0;
        case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::sigmoid: return post * (1.0 - post);
        case Activation::tanh: return 1.0 - post * post;
        case Activation::softmax: break;  // only reachable on the final layer, handled by the caller
    }
    return 1.0;
}

}  // namespace

std::span<const double> layer_input(const ActivationTrace& trace, std::span<const double> x,
                                    std::size_t layer) {
    return layer == 0 ? x : std::span<const double>(trace.layers[layer - 1].post);
}

std::vector<double> backprop_to_layer(const Model& model, const ActivationTrace& trace,
                                      std::size_t target_layer,
                                      std::span<const double> d_output_pre) {
    const std::size_t last = model.num_layers() - 1;
    std::vector<double> delta(d_output_pre.begin(), d_output_pre.end());
    for (std::size_t l = last; l > target_layer; --l) {
        const DenseLayer& layer = model.layer(l);
        const DenseLayer& below = model.layer(l - 1);
        const LayerActivation& act = trace.layers[l - 1];
        std::vector<double> next(layer.in_dim, 0.0);
        for (std::size_t i = 0; i < layer.in_dim; ++i) {
            const double* w = layer.weights.data() + i * layer.out_dim;
            double sum = 0.0;
            for (std::size_t j = 0; j < layer.out_dim; ++j) sum += w[j] * delta[j];
            next[i] = sum * activation_slope(below.activation, act.pre[i], act.post[i]);
        }
        delta = std::move(next);
    }
    return delta;
}

Matrix grad_target_layer(const Model& model, std::span<const LabeledInput> samples,
                         std::size_t target_layer) {
    if (samples.empty()) throw PreconditionError("gradient requested over an empty sample set");
    const DenseLayer& target = model.layer(target_layer);
    Matrix grad(target.in_dim, target.out_dim);
    std::vector<double> residual(model.num_classes());
    for (const LabeledInput& sample : samples) {
        if (sample.y >= model.num_classes()) {
            throw InputError("class index " + std::to_string(sample.y) + " out of range");
        }
        const ActivationTrace trace = forward(model, sample.x);
        // softmax + cross-entropy: dL/dz_final = p - onehot(y)
        const auto probs = trace.output();
        for (std::size_t k = 0; k < residual.size(); ++k) {
            residual[k] = probs[k] - (k == sample.y ? 1.0 : 0.0);
        }
        const std::vector<double> delta = backprop_to_layer(model, trace, target_layer, residual);
        const auto input = layer_input(trace, sample.x, target_layer);
        for (std::size_t i = 0; i < target.in_dim; ++i) {
            double* row = grad.data.data() + i * target.out_dim;
            for (std::size_t j = 0; j < target.out_dim; ++j) row[j] += input[i] * delta[j];
        }
    }
    const double n = static_cast<double>(samples.size());
    for (double& g : grad.data) g /= n;
    return grad;
}

std::vector<double> mean_activation(const Model& model, std::span<const std::span<const double>> xs,
                                    std::size_t layer) {
    if (xs.empty()) throw PreconditionError("mean activation requested over an empty sample set");
    const std::size_t width = model.layer(layer).in_dim;
    std::vector<double> mean(width, 0.0);
    for (const auto& x : xs) {
        const ActivationTrace trace = forward(model, x);
        const auto input = layer_input(trace, x, layer);
        for (std::size_t i = 0; i < width; ++i) mean[i] += input[i];
    }
    const double n = static_cast<double>(xs.size());
    for (double& m : mean) m /= n;
    return mean;
}

}  // namespace fairfix
