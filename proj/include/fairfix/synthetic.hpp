#pragma once

// Small generated datasets and models with known answers, shared by the
// fixture tool, the tests and the acceptance suite.

#include <cstddef>
#include <cstdint>

#include "fairfix/data.hpp"
#include "fairfix/localize.hpp"
#include "fairfix/model.hpp"

namespace fairfix {

/// A 2-feature dataset (x1, s) whose label depends on x1 only, plus a
/// 2-layer MLP (2 -> 5 relu -> 2 softmax) that would be fair except for one
/// output weight routing a unit that fires only for s = 1 into the positive
/// logit.
struct PlantedBiasFixture {
    Model model;
    LabeledDataset repair_set;
    LabeledDataset test_set;
    WeightCoord culprit;
};

/// Samples come in pairs sharing x1 and y with s = 0 and s = 1, so a model
/// that ignores s has identical group rates. y = [x1 + 0.3 * noise > 0].
/// `strength` is the planted weight, in [0, 4).
PlantedBiasFixture planted_bias_fixture(std::uint64_t seed, std::size_t repair_samples = 1000,
                                        std::size_t test_samples = 1000, double strength = 2.0);

/// Ten annotated rows with a model that reproduces their predictions from a
/// one-hot row id. Both use a categorical "id" column as the only feature.
struct WorkedExample {
    Model model;
    LabeledDataset dataset;  // annotated with the model's predictions
};

/// Gender prediction, label and sensitive column both "gender":
/// 3 female / 1 male misclassified, 2 female / 4 male correct.
WorkedExample gender_example();

/// Income prediction with sensitive column "race": four misclassified
/// rows, six correct.
WorkedExample income_race_example();

}  // namespace fairfix
