#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairfix/matrix.hpp"

namespace fairfix {

class Model;

/// One row of a binary-label, binary-sensitive dataset.
struct LabeledSample {
    std::vector<double> x;
    int y = 0;  // class index, 0 or 1
    int s = 0;  // sensitive value index, 0 or 1
    std::optional<int> y_hat;

    bool operator==(const LabeledSample&) const = default;
};

/// How one raw CSV column became feature columns.
struct FeatureColumn {
    std::string name;
    bool categorical = false;
    std::vector<std::string> categories;  // sorted; one one-hot column each

    std::size_t width() const { return categorical ? categories.size() : 1; }
    bool operator==(const FeatureColumn&) const = default;
};

/// Column encodings of a dataset. Raw label and sensitive values map to
/// index 0/1 by lexicographic order of the raw strings.
struct Encoding {
    std::string label_name;
    std::string sensitive_name;
    std::array<std::string, 2> label_values;
    std::array<std::string, 2> sensitive_values;
    std::vector<FeatureColumn> features;

    std::size_t feature_dim() const;
    std::vector<std::string> feature_names() const;
    bool operator==(const Encoding&) const = default;
};

nlohmann::ordered_json encoding_to_json(const Encoding& encoding);
Encoding encoding_from_json(const nlohmann::json& doc);

class LabeledDataset {
public:
    LabeledDataset() = default;
    /// Validates feature widths and the 0/1 domain of y, s and y_hat.
    LabeledDataset(std::vector<LabeledSample> samples, Encoding encoding);

    std::span<const LabeledSample> samples() const noexcept { return samples_; }
    const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    std::size_t feature_dim() const noexcept { return encoding_.feature_dim(); }
    const Encoding& encoding() const noexcept { return encoding_; }
    const std::string& label_name() const noexcept { return encoding_.label_name; }
    const std::string& sensitive_name() const noexcept { return encoding_.sensitive_name; }

    /// True when every sample carries a prediction.
    bool annotated() const;

    /// Copy with predictions replaced by `y_hat` (one entry per sample).
    LabeledDataset with_predictions(std::span<const int> y_hat) const;

    bool operator==(const LabeledDataset&) const = default;

private:
    std::vector<LabeledSample> samples_;
    Encoding encoding_;
};

struct CsvOptions {
    std::string label_col;
    std::string sensitive_col;
    /// Raw columns used as features, in this order. Defaults to every column
    /// except the label and sensitive columns, in file order.
    std::optional<std::vector<std::string>> feature_cols = std::nullopt;
    /// Reuse an existing encoding (e.g. the repair set's) instead of deriving one.
    const Encoding* reference = nullptr;
};

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Writes the raw form (categorical cells restored, label/sensitive raw values),
/// so loading the file again with the same options reproduces the dataset.
void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

void save_encoding(const Encoding& encoding, const std::filesystem::path& path);
Encoding load_encoding(const std::filesystem::path& path);

/// Features as a (samples x feature_dim) matrix.
Matrix feature_matrix(const LabeledDataset& dataset);

/// Fills every sample's y_hat with the model's prediction.
LabeledDataset annotate_predictions(const LabeledDataset& dataset, const Model& model);

enum class Setting { same, diff };

std::string_view to_string(Setting s);

/// The four sample subsets used for localization. A cell is addressed by
/// (outcome, group): under SettSame outcome 0 = misclassified (neg) and
/// 1 = correctly classified (pos); under SettDiff outcome is the class label
/// and only correctly classified samples appear.
struct SubgroupPartition {
    Setting setting = Setting::same;
    std::array<std::vector<std::size_t>, 4> cells;

    static constexpr std::size_t index(int outcome, int group) {
        return static_cast<std::size_t>(outcome * 2 + group);
    }
    const std::vector<std::size_t>& cell(int outcome, int group) const {
        return cells[index(outcome, group)];
    }
    std::vector<std::size_t>& cell(int outcome, int group) { return cells[index(outcome, group)]; }
    std::size_t count(int outcome, int group) const { return cell(outcome, group).size(); }
    std::size_t total() const;

    bool operator==(const SubgroupPartition&) const = default;
};

inline constexpr int kNeg = 0;
inline constexpr int kPos = 1;

/// Indices of correctly (y_hat == y) and incorrectly classified samples.
std::vector<std::size_t> correctly_classified(const LabeledDataset& dataset);
std::vector<std::size_t> misclassified(const LabeledDataset& dataset);

SubgroupPartition partition_settsame(const LabeledDataset& dataset);
SubgroupPartition partition_settdiff(const LabeledDataset& dataset);

/// Uniform random subset of `positives` of size min(|positives|, negative_count),
/// returned in input order. Throws NothingToLocalize when negative_count is 0.
std::vector<std::size_t> balance_positive_sample(std::span<const std::size_t> positives,
                                                 std::size_t negative_count, std::uint64_t seed);

}  // namespace fairfix
