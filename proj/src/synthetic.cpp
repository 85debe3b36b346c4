#include "fairfix/synthetic.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <string>

#include "fairfix/error.hpp"

namespace fairfix {

namespace {

Encoding planted_encoding() {
    Encoding enc;
    enc.label_name = "y";
    enc.sensitive_name = "s";
    enc.label_values = {"0", "1"};
    enc.sensitive_values = {"0", "1"};
    enc.features = {FeatureColumn{"x1", false, {}}, FeatureColumn{"s", false, {}}};
    return enc;
}

LabeledDataset paired_samples(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<LabeledSample> samples;
    samples.reserve(n);
    while (samples.size() < n) {
        const double x1 = normal(rng);
        const double noise = normal(rng);
        const int y = x1 + 0.3 * noise > 0.0 ? 1 : 0;
        for (int s = 0; s < 2 && samples.size() < n; ++s) {
            samples.push_back({{x1, static_cast<double>(s)}, y, s, std::nullopt});
        }
    }
    std::shuffle(samples.begin(), samples.end(), rng);
    return LabeledDataset(std::move(samples), planted_encoding());
}

// Memorizes per-row predictions: input i is the one-hot id of row i.
Model id_model(const std::vector<int>& y_hat) {
    const std::size_t n = y_hat.size();
    DenseLayer out{n, 2, std::vector<double>(n * 2, 0.0), {0.0, 0.0}, Activation::softmax};
    for (std::size_t i = 0; i < n; ++i) out.weight(i, static_cast<std::size_t>(y_hat[i])) = 1.0;
    return Model(n, {out});
}

struct Row {
    int y;
    int s;
    bool correct;
};

WorkedExample worked(const std::vector<Row>& rows, Encoding enc) {
    FeatureColumn id{"id", true, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::string name = std::to_string(i + 1);
        id.categories.push_back("r" + std::string(2 - std::min<std::size_t>(2, name.size()), '0') + name);
    }
    enc.features = {id};
    std::vector<LabeledSample> samples;
    std::vector<int> y_hat;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<double> x(rows.size(), 0.0);
        x[i] = 1.0;
        const int pred = rows[i].correct ? rows[i].y : 1 - rows[i].y;
        y_hat.push_back(pred);
        samples.push_back({std::move(x), rows[i].y, rows[i].s, pred});
    }
    return {id_model(y_hat), LabeledDataset(std::move(samples), std::move(enc))};
}

}  // namespace

PlantedBiasFixture planted_bias_fixture(std::uint64_t seed, std::size_t repair_samples,
                                        std::size_t test_samples, double strength) {
    if (!(strength >= 0.0 && strength < 4.0)) throw InputError("planted strength must lie in [0, 4)");
    // Units 0-1 carry relu(x1), units 2-3 relu(-x1): the label pathway is
    // spread over several weights. Unit 4 is relu(1 - x1) for s = 1 and
    // almost always 0 for s = 0.
    DenseLayer hidden{2, 5, std::vector<double>(10, 0.0), std::vector<double>(5, 0.0), Activation::relu};
    DenseLayer out{5, 2, std::vector<double>(10, 0.0), {0.0, 0.0}, Activation::softmax};
    for (std::size_t u = 0; u < 4; ++u) {
        const double sign = u < 2 ? 1.0 : -1.0;
        hidden.weight(0, u) = sign;
        out.weight(u, 0) = -sign;
        out.weight(u, 1) = sign;
    }
    hidden.weight(0, 4) = -1.0;
    hidden.weight(1, 4) = 4.0;
    hidden.biases[4] = -3.0;
    // margin z1 - z0 = 4 x1 + strength * unit 4: for s = 1, samples with
    // -strength / (4 - strength) < x1 < 0 flip to the positive class
    out.weight(4, 1) = strength;

    std::mt19937_64 rng(seed);
    LabeledDataset repair_set = paired_samples(rng, repair_samples);
    LabeledDataset test_set = paired_samples(rng, test_samples);
    return {Model(2, {hidden, out}), std::move(repair_set), std::move(test_set), WeightCoord{1, 4, 1}};
}

WorkedExample gender_example() {
    Encoding enc;
    enc.label_name = "gender";
    enc.sensitive_name = "gender";
    enc.label_values = {"female", "male"};
    enc.sensitive_values = {"female", "male"};
    constexpr int F = 0, M = 1;
    return worked({{M, M, true}, {M, M, true}, {M, M, true}, {F, F, false}, {F, F, false},
                   {M, M, false}, {F, F, true}, {F, F, false}, {M, M, true}, {F, F, true}},
                  std::move(enc));
}

WorkedExample income_race_example() {
    Encoding enc;
    enc.label_name = "income";
    enc.sensitive_name = "race";
    enc.label_values = {"0", "1"};
    enc.sensitive_values = {"black", "white"};
    constexpr int B = 0, W = 1;
    return worked({{1, W, true}, {0, W, false}, {0, B, true}, {1, W, false}, {0, B, false},
                   {1, W, false}, {0, W, true}, {1, B, true}, {1, W, true}, {0, B, true}},
                  std::move(enc));
}

}  // namespace fairfix
