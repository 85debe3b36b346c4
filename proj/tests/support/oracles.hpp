#pragma once

// Independent reference computations used as test oracles. None of these
// call into the code they check beyond building inputs and running forward().

#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fairfix/data.hpp"
#include "fairfix/fairness.hpp"
#include "fairfix/localize.hpp"
#include "fairfix/model.hpp"

namespace oracle {

// Exact fraction over 64-bit integers, always reduced, denominator > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational(std::int64_t n = 0, std::int64_t d = 1);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

Rational operator*(Rational a, Rational b);
Rational operator/(Rational a, Rational b);

// Random model with the given widths; hidden activations cycle through
// relu/sigmoid/tanh/identity unless `hidden` is set.
fairfix::Model random_model(std::mt19937_64& rng, const std::vector<std::size_t>& widths,
                            std::optional<fairfix::Activation> hidden = std::nullopt);

std::vector<std::vector<double>> random_inputs(std::mt19937_64& rng, std::size_t n, std::size_t dim);

// Central finite difference (step h) of the mean loss over samples with
// respect to every weight of `layer`.
fairfix::Matrix numeric_gradient(const fairfix::Model& model, const std::vector<std::vector<double>>& xs,
                                 const std::vector<std::size_t>& ys, std::size_t layer, double h = 1e-5);

// Max over entries of |a - n| / max(|a|, |n|), with entries below `floor`
// in both matrices compared absolutely against `floor`.
double max_relative_error(const fairfix::Matrix& analytic, const fairfix::Matrix& numeric, double floor = 1e-8);

// O(n^2) non-dominated set (both objectives maximized), sorted by coord.
std::vector<fairfix::WeightCoord> pareto_brute_force(const std::vector<fairfix::WeightScore>& scores);

// Metrics by direct enumeration of samples.
struct BruteMetrics {
    std::optional<double> spd, di_raw, di_score, eod, fpr_gap;
    double accuracy = 0.0;
};
BruteMetrics brute_metrics(const std::vector<int>& y, const std::vector<int>& s, const std::vector<int>& y_hat,
                           int positive_class = 1);

// Dataset of per-row (y, s, y_hat) with a single dummy feature.
fairfix::LabeledDataset rows_dataset(const std::vector<int>& y, const std::vector<int>& s,
                                     const std::vector<int>& y_hat);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace oracle
