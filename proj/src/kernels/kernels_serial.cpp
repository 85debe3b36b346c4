#include "fairfix/kernels.hpp"

#include <algorithm>

#include "row_forward.hpp"

namespace fairfix::kernels {

Matrix layer_inputs_serial(const Model& model, const Matrix& features, std::size_t layer) {
    model.layer(layer);
    const auto prefix = model.layers().first(layer);
    detail::check_width(model.layers(), features);
    Matrix out(features.rows, model.layer(layer).in_dim);
    detail::RowScratch scratch(prefix);
    for (std::size_t r = 0; r < features.rows; ++r) {
        const auto act = detail::run_layers(prefix, 0, features.row(r), scratch);
        std::copy(act.begin(), act.end(), out.row(r).begin());
    }
    return out;
}

void predict_rows_serial(std::span<const DenseLayer> layers, std::size_t first_index,
                         const Matrix& inputs, std::span<int> out) {
    detail::check_width(layers, inputs);
    detail::RowScratch scratch(layers);
    for (std::size_t r = 0; r < inputs.rows; ++r) {
        out[r] = static_cast<int>(argmax(detail::run_layers(layers, first_index, inputs.row(r), scratch)));
    }
}

void evaluate_positions_serial(const ScalarObjective& objective,
                               std::span<const std::vector<double>> positions, std::span<double> out) {
    for (std::size_t i = 0; i < positions.size(); ++i) out[i] = objective(positions[i]);
}

Matrix layer_inputs(const Model& model, const Matrix& features, std::size_t layer, Execution exec) {
    return exec == Execution::parallel ? layer_inputs_omp(model, features, layer)
                                       : layer_inputs_serial(model, features, layer);
}

void predict_rows(std::span<const DenseLayer> layers, std::size_t first_index, const Matrix& inputs,
                  std::span<int> out, Execution exec) {
    if (exec == Execution::parallel) {
        predict_rows_omp(layers, first_index, inputs, out);
    } else {
        predict_rows_serial(layers, first_index, inputs, out);
    }
}

void evaluate_positions(const ScalarObjective& objective,
                        std::span<const std::vector<double>> positions, std::span<double> out,
                        Execution exec) {
    if (exec == Execution::parallel) {
        evaluate_positions_omp(objective, positions, out);
    } else {
        evaluate_positions_serial(objective, positions, out);
    }
}

}  // namespace fairfix::kernels
