#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "fairfix/data.hpp"
#include "fairfix/kernels.hpp"
#include "fairfix/synthetic.hpp"
#include "oracles.hpp"

using namespace fairfix;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.row(i)[j] = rows[i][j];
    return m;
}

bool same_bits(const Matrix& a, const Matrix& b) {
    return a.same_shape(b) && std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Kernels, LayerInputsSerialAndParallelAgreeBitwise) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        std::mt19937_64 rng(seed);
        const Model m = oracle::random_model(rng, {6, 8, 7, 2});
        const Matrix x = to_matrix(oracle::random_inputs(rng, 257, 6));
        for (std::size_t layer = 0; layer < m.num_layers(); ++layer) {
            const Matrix a = kernels::layer_inputs_serial(m, x, layer);
            const Matrix b = kernels::layer_inputs_omp(m, x, layer);
            EXPECT_TRUE(same_bits(a, b)) << "layer " << layer;
            for (std::size_t i = 0; i < 5; ++i) {
                const auto trace = forward(m, x.row(i));
                const auto expected = layer == 0 ? std::vector<double>(x.row(i).begin(), x.row(i).end())
                                                 : trace.layers[layer - 1].post;
                EXPECT_TRUE(std::equal(expected.begin(), expected.end(), a.row(i).begin()));
            }
        }
        EXPECT_TRUE(same_bits(kernels::layer_inputs_serial(m, x, 0), x));
    }
}

TEST(Kernels, PredictRowsMatchesPerSamplePredict) {
    std::mt19937_64 rng(11);
    const Model m = oracle::random_model(rng, {4, 8, 8, 2});
    const Matrix x = to_matrix(oracle::random_inputs(rng, 300, 4));
    for (std::size_t first = 0; first < m.num_layers(); ++first) {
        const Matrix inputs = kernels::layer_inputs_serial(m, x, first);
        const auto suffix = m.layers().subspan(first);
        std::vector<int> a(x.rows), b(x.rows);
        kernels::predict_rows_serial(suffix, first, inputs, a);
        kernels::predict_rows_omp(suffix, first, inputs, b);
        EXPECT_EQ(a, b);
        for (std::size_t i = 0; i < x.rows; ++i) EXPECT_EQ(static_cast<std::size_t>(a[i]), predict(m, x.row(i)));
    }
}

TEST(Kernels, EvaluatePositionsWritesByIndex) {
    std::mt19937_64 rng(2);
    const auto positions = oracle::random_inputs(rng, 101, 3);
    const kernels::ScalarObjective f = [](std::span<const double> p) {
        return std::sin(p[0]) * std::exp(p[1]) - p[2] * p[2];
    };
    std::vector<double> a(positions.size()), b(positions.size());
    kernels::evaluate_positions_serial(f, positions, a);
    kernels::evaluate_positions_omp(f, positions, b);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)), 0);
    for (std::size_t i = 0; i < positions.size(); ++i) EXPECT_EQ(a[i], f(positions[i]));
}

TEST(Kernels, AnnotateAgreesWithBothExecutions) {
    const auto fx = planted_bias_fixture(3, 500, 10);
    const auto annotated = annotate_predictions(fx.repair_set, fx.model);
    const Matrix x = feature_matrix(fx.repair_set);
    std::vector<int> serial(x.rows), parallel(x.rows);
    kernels::predict_rows(fx.model.layers(), 0, x, serial, kernels::Execution::serial);
    kernels::predict_rows(fx.model.layers(), 0, x, parallel, kernels::Execution::parallel);
    EXPECT_EQ(serial, parallel);
    for (std::size_t i = 0; i < x.rows; ++i) EXPECT_EQ(*annotated[i].y_hat, serial[i]);
}
