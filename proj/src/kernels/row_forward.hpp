#pragma once

#include <span>
#include <vector>

#include "fairfix/error.hpp"
#include "fairfix/model.hpp"

namespace fairfix::kernels::detail {

/// Scratch buffers for pushing one row through a run of layers.
struct RowScratch {
    std::vector<double> pre;
    std::vector<double> a;
    std::vector<double> b;

    explicit RowScratch(std::span<const DenseLayer> layers) {
        std::size_t widest = 0;
        for (const auto& l : layers) widest = std::max(widest, l.out_dim);
        pre.resize(widest);
        a.resize(widest);
        b.resize(widest);
    }
};

/// Runs `layers` on `input`; returns a view of the last post-activation
/// (valid until the next call).
inline std::span<const double> run_layers(std::span<const DenseLayer> layers, std::size_t first_index,
                                          std::span<const double> input, RowScratch& scratch) {
    std::span<const double> current = input;
    bool into_a = true;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const DenseLayer& layer = layers[k];
        std::vector<double>& dest = into_a ? scratch.a : scratch.b;
        std::span<double> post(dest.data(), layer.out_dim);
        apply_layer(layer, current, std::span<double>(scratch.pre.data(), layer.out_dim), post,
                    first_index + k);
        current = post;
        into_a = !into_a;
    }
    return current;
}

inline void check_width(std::span<const DenseLayer> layers, const Matrix& inputs) {
    if (!layers.empty() && inputs.cols != layers.front().in_dim) {
        throw InputError("input rows have " + std::to_string(inputs.cols) + " columns, layer expects " +
                         std::to_string(layers.front().in_dim));
    }
}

}  // namespace fairfix::kernels::detail
