#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairfix/matrix.hpp"

namespace fairfix {

enum class Activation { identity, relu, sigmoid, tanh, softmax };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Fully connected layer. `weights` is row-major [in_dim x out_dim]:
/// weight(i, j) connects input unit i to output unit j.
struct DenseLayer {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weights;
    std::vector<double> biases;
    Activation activation = Activation::identity;

    double weight(std::size_t row, std::size_t col) const { return weights[row * out_dim + col]; }
    double& weight(std::size_t row, std::size_t col) { return weights[row * out_dim + col]; }

    bool operator==(const DenseLayer&) const = default;
};

/// Feed-forward classifier ending in a softmax layer, trained with cross-entropy.
///
/// The constructor validates the layer chain; a constructed Model always
/// satisfies: consecutive widths agree, softmax appears exactly on the last
/// layer, and every parameter is finite. Models are treated as immutable
/// values; `set_weight` exists for building patched copies.
class Model {
public:
    Model(std::size_t input_dim, std::vector<DenseLayer> layers);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t num_classes() const noexcept { return layers_.back().out_dim; }
    std::size_t num_layers() const noexcept { return layers_.size(); }
    std::span<const DenseLayer> layers() const noexcept { return layers_; }
    const DenseLayer& layer(std::size_t index) const;

    void set_weight(std::size_t layer, std::size_t row, std::size_t col, double value);

    bool operator==(const Model&) const = default;

private:
    std::size_t input_dim_;
    std::vector<DenseLayer> layers_;
};

/// Returns true when both models have identical shapes and bit-identical parameters.
bool bit_identical(const Model& a, const Model& b);

struct LayerActivation {
    std::vector<double> pre;   // z = W^T a + b
    std::vector<double> post;  // activation(z)
};

/// Per-layer activations of one forward pass.
struct ActivationTrace {
    std::vector<LayerActivation> layers;

    std::span<const double> output() const { return layers.back().post; }
};

/// Evaluates one layer. `pre` and `post` must have the layer's out_dim.
/// Throws NumericError naming `layer_index` when a non-finite value appears.
void apply_layer(const DenseLayer& layer, std::span<const double> input, std::span<double> pre,
                 std::span<double> post, std::size_t layer_index);

ActivationTrace forward(const Model& model, std::span<const double> x);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

std::size_t predict(const Model& model, std::span<const double> x);

inline constexpr double kProbabilityFloor = 1e-12;

/// -log(max(p_y, 1e-12)).
double cross_entropy(std::span<const double> probabilities, std::size_t y);

double loss(const Model& model, std::span<const double> x, std::size_t y);

struct LabeledInput {
    std::span<const double> x;
    std::size_t y = 0;
};

/// Mean over `samples` of dL/dW for the weights of `target_layer`.
Matrix grad_target_layer(const Model& model, std::span<const LabeledInput> samples,
                         std::size_t target_layer);

/// Back-propagates `d_output_pre` (a gradient with respect to the final
/// layer's pre-activation) down to the pre-activation of `target_layer`.
std::vector<double> backprop_to_layer(const Model& model, const ActivationTrace& trace,
                                      std::size_t target_layer,
                                      std::span<const double> d_output_pre);

/// Input to `layer` for a given trace: x for layer 0, otherwise the previous layer's post-activation.
std::span<const double> layer_input(const ActivationTrace& trace, std::span<const double> x,
                                    std::size_t layer);

/// Element-wise mean of the post-activation entering `layer` across `xs`.
std::vector<double> mean_activation(const Model& model, std::span<const std::span<const double>> xs,
                                    std::size_t layer);

nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);
Model load_model(const std::filesystem::path& path);
void save_model(const Model& model, const std::filesystem::path& path);

}  // namespace fairfix
