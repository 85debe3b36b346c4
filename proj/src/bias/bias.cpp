#include "fairfix/bias.hpp"

#include <cmath>
#include <limits>

#include "fairfix/error.hpp"

namespace fairfix {

double p_exp(std::size_t total, std::size_t group_size, std::size_t outcome_size) {
    if (total == 0) throw PreconditionError("expected probability over an empty dataset");
    const double n = static_cast<double>(total);
    return (static_cast<double>(group_size) / n) * (static_cast<double>(outcome_size) / n);
}

double p_obs(std::size_t subset_size, std::size_t total) {
    if (total == 0) throw PreconditionError("observed probability over an empty dataset");
    return static_cast<double>(subset_size) / static_cast<double>(total);
}

double cost(double expected, double observed) {
    if (observed == 0.0) {
        return expected == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return expected / observed;
}

double bias_ratio(double numerator, double denominator, double cap, const std::string& cell) {
    const bool num_inf = std::isinf(numerator);
    const bool den_inf = std::isinf(denominator);
    if (num_inf && den_inf) {
        throw DegenerateBias("bias weight undefined: both costs are infinite for " + cell, cell);
    }
    if (num_inf) return cap;
    if (den_inf) return 1.0 / cap;
    if (denominator == 0.0) {
        throw DegenerateBias("bias weight undefined: zero cost in the denominator for " + cell, cell);
    }
    return numerator / denominator;
}

double class_cost(std::size_t total, std::size_t class_size, std::size_t correct_size,
                  std::size_t correct_class_size) {
    return cost(p_exp(total, class_size, correct_size), p_obs(correct_class_size, total));
}

ClassCosts class_costs_settdiff(const LabeledDataset& dataset) {
    if (!dataset.annotated()) throw PreconditionError("dataset has no predictions; annotate it first");
    std::array<std::size_t, 2> class_size{0, 0};
    std::array<std::size_t, 2> correct_class{0, 0};
    for (const auto& s : dataset.samples()) {
        ++class_size[s.y];
        if (*s.y_hat == s.y) ++correct_class[s.y];
    }
    if (class_size[0] == 0 || class_size[1] == 0) {
        throw PreconditionError("class costs need both classes to be present");
    }
    const std::size_t correct = correct_class[0] + correct_class[1];
    if (correct == 0) throw PreconditionError("class costs need at least one correct prediction");
    ClassCosts out;
    for (int y = 0; y < 2; ++y) {
        out.cost[y] = class_cost(dataset.size(), class_size[y], correct, correct_class[y]);
    }
    out.prioritized_class = out.cost[1] > out.cost[0] ? 1 : 0;
    return out;
}

namespace {

void check_group(int deprived) {
    if (deprived != 0 && deprived != 1) throw InputError("deprived group must be 0 or 1");
}

std::string cell_name(const char* outcome, int group) {
    return std::string("(") + outcome + ", s" + std::to_string(group) + ")";
}

}  // namespace

BiasWeights bias_weights_settsame(const SubgroupPartition& partition, int deprived, double cap) {
    if (partition.setting != Setting::same) throw PreconditionError("expected a SettSame partition");
    check_group(deprived);
    const int favored = 1 - deprived;
    const std::size_t n = partition.total();
    const std::size_t neg = partition.count(kNeg, 0) + partition.count(kNeg, 1);
    const std::size_t pos = partition.count(kPos, 0) + partition.count(kPos, 1);

    BiasWeights w;
    w.setting = Setting::same;
    w.deprived = deprived;
    for (int g = 0; g < 2; ++g) {
        const std::size_t group_size = partition.count(kNeg, g) + partition.count(kPos, g);
        w.cell_costs[SubgroupPartition::index(kNeg, g)] =
            cost(p_exp(n, group_size, neg), p_obs(partition.count(kNeg, g), n));
        w.cell_costs[SubgroupPartition::index(kPos, g)] =
            cost(p_exp(n, group_size, pos), p_obs(partition.count(kPos, g), n));
    }
    auto c = [&](int outcome, int g) { return w.cell_costs[SubgroupPartition::index(outcome, g)]; };
    w.w_primary = bias_ratio(c(kNeg, favored), c(kNeg, deprived), cap, cell_name("neg", deprived));
    w.w_secondary = bias_ratio(c(kPos, deprived), c(kPos, favored), cap, cell_name("pos", deprived));
    return w;
}

BiasWeights bias_weights_settdiff(const SubgroupPartition& partition, const LabeledDataset& dataset,
                                  int deprived, double cap) {
    if (partition.setting != Setting::diff) throw PreconditionError("expected a SettDiff partition");
    check_group(deprived);
    const int favored = 1 - deprived;
    const std::size_t n = dataset.size();
    std::array<std::size_t, 2> group_size{0, 0};
    std::array<std::size_t, 2> class_size{0, 0};
    for (const auto& s : dataset.samples()) {
        ++group_size[s.s];
        ++class_size[s.y];
    }

    BiasWeights w;
    w.setting = Setting::diff;
    w.deprived = deprived;
    w.class_costs = class_costs_settdiff(dataset);
    for (int y = 0; y < 2; ++y) {
        for (int g = 0; g < 2; ++g) {
            w.cell_costs[SubgroupPartition::index(y, g)] =
                cost(p_exp(n, group_size[g], class_size[y]), p_obs(partition.count(y, g), n));
        }
    }
    auto c = [&](int y, int g) { return w.cell_costs[SubgroupPartition::index(y, g)]; };
    w.w_primary = bias_ratio(c(0, deprived), c(0, favored), cap, cell_name("Y=0", deprived));
    w.w_secondary = bias_ratio(c(1, deprived), c(1, favored), cap, cell_name("Y=1", deprived));
    return w;
}

}  // namespace fairfix
