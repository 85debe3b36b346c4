#include "fairfix/kernels.hpp"

#include <algorithm>

#include "../common/first_error.hpp"
#include "row_forward.hpp"

#if FAIRFIX_USE_OPENMP
#include <omp.h>
#endif

namespace fairfix::kernels {

using fairfix::detail::FirstError;

bool openmp_enabled() noexcept {
#if FAIRFIX_USE_OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() noexcept {
#if FAIRFIX_USE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Matrix layer_inputs_omp(const Model& model, const Matrix& features, std::size_t layer) {
    model.layer(layer);
    const auto prefix = model.layers().first(layer);
    detail::check_width(model.layers(), features);
    Matrix out(features.rows, model.layer(layer).in_dim);
    const auto rows = static_cast<std::ptrdiff_t>(features.rows);
    FirstError errors;
#pragma omp parallel
    {
        detail::RowScratch scratch(prefix);
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < rows; ++r) {
            errors.run([&] {
                const auto act = detail::run_layers(prefix, 0, features.row(r), scratch);
                std::copy(act.begin(), act.end(), out.row(r).begin());
            });
        }
    }
    errors.rethrow();
    return out;
}

void predict_rows_omp(std::span<const DenseLayer> layers, std::size_t first_index,
                      const Matrix& inputs, std::span<int> out) {
    detail::check_width(layers, inputs);
    const auto rows = static_cast<std::ptrdiff_t>(inputs.rows);
    FirstError errors;
#pragma omp parallel
    {
        detail::RowScratch scratch(layers);
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < rows; ++r) {
            errors.run([&] {
                out[r] = static_cast<int>(
                    argmax(detail::run_layers(layers, first_index, inputs.row(r), scratch)));
            });
        }
    }
    errors.rethrow();
}

void evaluate_positions_omp(const ScalarObjective& objective,
                            std::span<const std::vector<double>> positions, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(positions.size());
    FirstError errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        errors.run([&] { out[i] = objective(positions[i]); });
    }
    errors.rethrow();
}

}  // namespace fairfix::kernels
