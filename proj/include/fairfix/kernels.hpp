#pragma once

// Data-parallel kernels behind prediction and swarm evaluation. Each kernel
// has a serial reference and an OpenMP version that produce bit-identical
// results: rows and particles are independent and outputs are written by
// index, so no reduction order depends on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fairfix/matrix.hpp"
#include "fairfix/model.hpp"

namespace fairfix::kernels {

enum class Execution { serial, parallel };

using ScalarObjective = std::function<double(std::span<const double>)>;

/// True when the library was built with OpenMP.
bool openmp_enabled() noexcept;
int max_threads() noexcept;

/// Activation entering `layer` for every row of `features`
/// (rows x model.input_dim()). Layer 0 returns a copy of `features`.
Matrix layer_inputs_serial(const Model& model, const Matrix& features, std::size_t layer);
Matrix layer_inputs_omp(const Model& model, const Matrix& features, std::size_t layer);

/// Predicted class for every row of `inputs`, evaluating `layers` (a suffix of
/// a model whose first element is layer number `first_index`).
void predict_rows_serial(std::span<const DenseLayer> layers, std::size_t first_index,
                         const Matrix& inputs, std::span<int> out);
void predict_rows_omp(std::span<const DenseLayer> layers, std::size_t first_index,
                      const Matrix& inputs, std::span<int> out);

/// out[i] = objective(positions[i]).
void evaluate_positions_serial(const ScalarObjective& objective,
                               std::span<const std::vector<double>> positions, std::span<double> out);
void evaluate_positions_omp(const ScalarObjective& objective,
                            std::span<const std::vector<double>> positions, std::span<double> out);

Matrix layer_inputs(const Model& model, const Matrix& features, std::size_t layer, Execution exec);
void predict_rows(std::span<const DenseLayer> layers, std::size_t first_index, const Matrix& inputs,
                  std::span<int> out, Execution exec);
void evaluate_positions(const ScalarObjective& objective,
                        std::span<const std::vector<double>> positions, std::span<double> out,
                        Execution exec);

}  // namespace fairfix::kernels
