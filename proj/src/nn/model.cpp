#include "fairfix/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "fairfix/error.hpp"

namespace fairfix {

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::softmax: return "softmax";
    }
    return "identity";
}

Activation parse_activation(std::string_view name) {
    if (name == "identity" || name == "linear") return Activation::identity;
    if (name == "relu") return Activation::relu;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    if (name == "softmax") return Activation::softmax;
    throw InputError("unknown activation '" + std::string(name) + "'");
}

Model::Model(std::size_t input_dim, std::vector<DenseLayer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
    if (input_dim_ == 0) throw InputError("model input_dim must be positive");
    if (layers_.empty()) throw InputError("model has no layers");
    std::size_t expected_in = input_dim_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const DenseLayer& layer = layers_[l];
        std::ostringstream where;
        where << "layer " << l << ": ";
        if (layer.in_dim != expected_in) {
            where << "input width " << layer.in_dim << " does not match previous width " << expected_in;
            throw InputError(where.str());
        }
        if (layer.out_dim == 0) {
            where << "output width must be positive";
            throw InputError(where.str());
        }
        if (layer.weights.size() != layer.in_dim * layer.out_dim) {
            where << "expected " << layer.in_dim * layer.out_dim << " weights, got " << layer.weights.size();
            throw InputError(where.str());
        }
        if (layer.biases.size() != layer.out_dim) {
            where << "expected " << layer.out_dim << " biases, got " << layer.biases.size();
            throw InputError(where.str());
        }
        const bool last = l + 1 == layers_.size();
        if (last != (layer.activation == Activation::softmax)) {
            where << (last ? "final layer must use softmax" : "softmax is only allowed on the final layer");
            throw InputError(where.str());
        }
        auto finite = [](double v) { return std::isfinite(v); };
        if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
            !std::all_of(layer.biases.begin(), layer.biases.end(), finite)) {
            where << "non-finite parameter";
            throw InputError(where.str());
        }
        expected_in = layer.out_dim;
    }
}

const DenseLayer& Model::layer(std::size_t index) const {
    if (index >= layers_.size()) {
        throw InputError("layer index " + std::to_string(index) + " out of range (model has " +
                         std::to_string(layers_.size()) + " layers)");
    }
    return layers_[index];
}

void Model::set_weight(std::size_t layer, std::size_t row, std::size_t col, double value) {
    if (layer >= layers_.size() || row >= layers_[layer].in_dim || col >= layers_[layer].out_dim) {
        std::ostringstream msg;
        msg << "weight coordinate (" << layer << ", " << row << ", " << col << ") out of range";
        throw InputError(msg.str());
    }
    if (!std::isfinite(value)) throw NumericError("non-finite weight value", layer);
    layers_[layer].weight(row, col) = value;
}

bool bit_identical(const Model& a, const Model& b) {
    if (a.input_dim() != b.input_dim() || a.num_layers() != b.num_layers()) return false;
    auto same_bits = [](const std::vector<double>& x, const std::vector<double>& y) {
        return x.size() == y.size() &&
               std::equal(x.begin(), x.end(), y.begin(), [](double p, double q) {
                   return std::bit_cast<std::uint64_t>(p) == std::bit_cast<std::uint64_t>(q);
               });
    };
    for (std::size_t l = 0; l < a.num_layers(); ++l) {
        const auto& la = a.layer(l);
        const auto& lb = b.layer(l);
        if (la.in_dim != lb.in_dim || la.out_dim != lb.out_dim || la.activation != lb.activation ||
            !same_bits(la.weights, lb.weights) || !same_bits(la.biases, lb.biases)) {
            return false;
        }
    }
    return true;
}

namespace {

void activate(Activation act, std::span<const double> pre, std::span<double> post) {
    switch (act) {
        case Activation::identity:
            std::copy(pre.begin(), pre.end(), post.begin());
            break;
        case Activation::relu:
            for (std::size_t j = 0; j < pre.size(); ++j) post[j] = pre[j] > 0.0 ? pre[j] : 0.0;
            break;
        case Activation::sigmoid:
            for (std::size_t j = 0; j < pre.size(); ++j) post[j] = 1.0 / (1.0 + std::exp(-pre[j]));
            break;
        case Activation::tanh:
            for (std::size_t j = 0; j < pre.size(); ++j) post[j] = std::tanh(pre[j]);
            break;
        case Activation::softmax: {
            const double peak = *std::max_element(pre.begin(), pre.end());
            double total = 0.0;
            for (std::size_t j = 0; j < pre.size(); ++j) {
                post[j] = std::exp(pre[j] - peak);
                total += post[j];
            }
            for (double& p : post) p /= total;
            break;
        }
    }
}

}  // namespace

void apply_layer(const DenseLayer& layer, std::span<const double> input, std::span<double> pre,
                 std::span<double> post, std::size_t layer_index) {
    const std::size_t out = layer.out_dim;
    std::copy(layer.biases.begin(), layer.biases.end(), pre.begin());
    for (std::size_t i = 0; i < layer.in_dim; ++i) {
        const double a = input[i];
        const double* w = layer.weights.data() + i * out;
        for (std::size_t j = 0; j < out; ++j) pre[j] += a * w[j];
    }
    for (std::size_t j = 0; j < out; ++j) {
        if (!std::isfinite(pre[j])) {
            throw NumericError("non-finite pre-activation in layer " + std::to_string(layer_index),
                               layer_index);
        }
    }
    activate(layer.activation, pre, post);
    for (std::size_t j = 0; j < out; ++j) {
        if (!std::isfinite(post[j])) {
            throw NumericError("non-finite activation in layer " + std::to_string(layer_index),
                               layer_index);
        }
    }
}

ActivationTrace forward(const Model& model, std::span<const double> x) {
    if (x.size() != model.input_dim()) {
        throw InputError("input has " + std::to_string(x.size()) + " features, model expects " +
                         std::to_string(model.input_dim()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw NumericError("non-finite input feature", 0);
    }
    ActivationTrace trace;
    trace.layers.resize(model.num_layers());
    std::span<const double> input = x;
    for (std::size_t l = 0; l < model.num_layers(); ++l) {
        const DenseLayer& layer = model.layer(l);
        LayerActivation& act = trace.layers[l];
        act.pre.resize(layer.out_dim);
        act.post.resize(layer.out_dim);
        apply_layer(layer, input, act.pre, act.post, l);
        input = act.post;
    }
    return trace;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

std::size_t predict(const Model& model, std::span<const double> x) {
    return argmax(forward(model, x).output());
}

double cross_entropy(std::span<const double> probabilities, std::size_t y) {
    if (y >= probabilities.size()) {
        throw InputError("class index " + std::to_string(y) + " out of range");
    }
    // 0.0 - x instead of -x: a perfect prediction yields +0.0, not -0.0
    return 0.0 - std::log(std::max(probabilities[y], kProbabilityFloor));
}

double loss(const Model& model, std::span<const double> x, std::size_t y) {
    if (y >= model.num_classes()) {
        throw InputError("class index " + std::to_string(y) + " out of range");
    }
    return cross_entropy(forward(model, x).output(), y);
}

}  // namespace fairfix
