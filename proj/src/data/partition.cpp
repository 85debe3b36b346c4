#include <algorithm>
#include <random>

#include "fairfix/data.hpp"
#include "fairfix/error.hpp"

namespace fairfix {

std::string_view to_string(Setting s) { return s == Setting::same ? "SettSame" : "SettDiff"; }

std::size_t SubgroupPartition::total() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.size();
    return n;
}

namespace {

void require_annotated(const LabeledDataset& dataset) {
    if (!dataset.annotated()) throw PreconditionError("dataset has no predictions; annotate it first");
}

}  // namespace

std::vector<std::size_t> correctly_classified(const LabeledDataset& dataset) {
    require_annotated(dataset);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (*dataset[i].y_hat == dataset[i].y) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> misclassified(const LabeledDataset& dataset) {
    require_annotated(dataset);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (*dataset[i].y_hat != dataset[i].y) out.push_back(i);
    }
    return out;
}

SubgroupPartition partition_settsame(const LabeledDataset& dataset) {
    require_annotated(dataset);
    SubgroupPartition p;
    p.setting = Setting::same;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const LabeledSample& s = dataset[i];
        if (s.y != s.s) {
            throw SettingMismatch("SettSame needs the label to equal the sensitive attribute, sample " +
                                  std::to_string(i) + " has y=" + std::to_string(s.y) +
                                  ", s=" + std::to_string(s.s));
        }
        p.cell(*s.y_hat == s.y ? kPos : kNeg, s.s).push_back(i);
    }
    return p;
}

SubgroupPartition partition_settdiff(const LabeledDataset& dataset) {
    require_annotated(dataset);
    SubgroupPartition p;
    p.setting = Setting::diff;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const LabeledSample& s = dataset[i];
        if (*s.y_hat == s.y) p.cell(s.y, s.s).push_back(i);
    }
    return p;
}

std::vector<std::size_t> balance_positive_sample(std::span<const std::size_t> positives,
                                                 std::size_t negative_count, std::uint64_t seed) {
    if (negative_count == 0) {
        throw NothingToLocalize("no misclassified samples; localization is not needed");
    }
    const std::size_t k = std::min(positives.size(), negative_count);
    std::vector<std::size_t> out;
    out.reserve(k);
    std::mt19937_64 rng(seed);
    std::sample(positives.begin(), positives.end(), std::back_inserter(out), k, rng);
    return out;
}

}  // namespace fairfix
