#include "fairfix/report_json.hpp"

#include <cmath>

#include "fairfix/error.hpp"

namespace fairfix {

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json number_or_null(const std::optional<double>& v) {
    return v ? number_or_null(*v) : ordered_json(nullptr);
}

ordered_json to_json(const GroupCounts& counts) {
    ordered_json out = ordered_json::array();
    for (const Confusion& c : counts.group) {
        out.push_back({{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}});
    }
    return out;
}

ordered_json to_json(const DeprivedGroup& d) {
    return {{"group", d.group},
            {"no_bias_signal", d.no_bias_signal},
            {"misclassification_cost",
             {number_or_null(d.misclassification_cost[0]), number_or_null(d.misclassification_cost[1])}}};
}

ordered_json to_json(const FairnessReport& r) {
    ordered_json out;
    out["samples"] = r.samples;
    out["accuracy"] = r.accuracy;
    out["accuracy_per_group"] = {number_or_null(r.accuracy_per_group[0]), number_or_null(r.accuracy_per_group[1])};
    out["spd"] = number_or_null(r.spd);
    out["di_raw"] = number_or_null(r.di_raw);
    out["di_score"] = number_or_null(r.di_score);
    out["eod"] = number_or_null(r.eod);
    out["fpr_gap"] = number_or_null(r.fpr_gap);
    out["deprived"] = r.deprived ? to_json(*r.deprived) : ordered_json(nullptr);
    out["counts"] = to_json(r.counts);
    return out;
}

ordered_json to_json(const BiasWeights& b) {
    ordered_json out;
    out["setting"] = std::string(to_string(b.setting));
    out["deprived"] = b.deprived;
    if (b.setting == Setting::same) {
        out["w_neg"] = number_or_null(b.w_primary);
        out["w_pos"] = number_or_null(b.w_secondary);
    } else {
        out["w_0"] = number_or_null(b.w_primary);
        out["w_1"] = number_or_null(b.w_secondary);
    }
    ordered_json costs = ordered_json::array();
    for (double c : b.cell_costs) costs.push_back(number_or_null(c));
    out["cell_costs"] = costs;
    if (b.class_costs) {
        out["class_costs"] = {number_or_null(b.class_costs->cost[0]), number_or_null(b.class_costs->cost[1])};
        out["prioritized_class"] = b.class_costs->prioritized_class;
    }
    return out;
}

ordered_json to_json(const WeightCoord& c) { return {{"layer", c.layer}, {"row", c.row}, {"col", c.col}}; }

ordered_json to_json(const LocalizationResult& r, bool include_scores) {
    ordered_json out;
    out["setting"] = std::string(to_string(r.setting));
    out["layer"] = r.layer;
    out["nothing_to_localize"] = r.nothing_to_localize;
    out["correct"] = r.correct;
    out["misclassified"] = r.misclassified;
    out["positives_sampled"] = r.positives_sampled;
    out["deprived"] = to_json(r.deprived);
    out["bias"] = r.bias ? to_json(*r.bias) : ordered_json(nullptr);
    out["cell_sizes"] = r.cell_sizes;
    out["cell_sizes_used"] = r.cell_sizes_used;
    out["forward_impact"] =
        "|share of w_ij * mean input + b_j / fan_in in unit j| x d(mean true-class probability)/d z_j";
    ordered_json front = ordered_json::array();
    for (const WeightCoord& c : r.pareto) {
        ordered_json entry = to_json(c);
        for (const WeightScore& s : r.scored) {
            if (s.coord == c) {
                entry["grad_score"] = number_or_null(s.grad_score);
                entry["fwd_score"] = number_or_null(s.fwd_score);
                break;
            }
        }
        front.push_back(std::move(entry));
    }
    out["pareto"] = std::move(front);
    if (include_scores) {
        ordered_json scores = ordered_json::array();
        for (const WeightScore& s : r.scored) {
            ordered_json entry = to_json(s.coord);
            entry["grad_score"] = number_or_null(s.grad_score);
            entry["fwd_score"] = number_or_null(s.fwd_score);
            scores.push_back(std::move(entry));
        }
        out["scores"] = std::move(scores);
    }
    return out;
}

ordered_json to_json(const RepairConfig& c) {
    ordered_json out;
    out["metric"] = std::string(to_string(c.metric));
    out["particles"] = c.particles;
    out["max_generations"] = c.max_generations;
    out["stagnation_limit"] = c.stagnation_limit;
    out["inertia"] = c.inertia;
    out["cognitive"] = c.cognitive;
    out["social"] = c.social;
    out["velocity_clamp"] = c.velocity_clamp ? ordered_json(*c.velocity_clamp) : ordered_json("3 sigma of layer");
    out["seed"] = c.seed;
    out["positive_class"] = c.positive_class;
    return out;
}

ordered_json to_json(const RepairResult& r) {
    ordered_json out;
    out["generations"] = r.generations;
    out["stop_reason"] = std::string(to_string(r.stop_reason));
    out["original_fitness"] = number_or_null(r.original_fitness);
    out["best_fitness"] = number_or_null(r.best_fitness);
    out["identity_fallback"] = r.identity_fallback;
    ordered_json patch = ordered_json::array();
    for (const PatchEntry& e : r.patch) {
        ordered_json entry = to_json(e.coord);
        entry["old_value"] = e.old_value;
        entry["new_value"] = e.new_value;
        patch.push_back(std::move(entry));
    }
    out["patch"] = std::move(patch);
    ordered_json history = ordered_json::array();
    for (double f : r.fitness_history) history.push_back(number_or_null(f));
    out["fitness_history"] = std::move(history);
    out["repair_set"] = {{"before", to_json(r.before_repair)}, {"after", to_json(r.after_repair)}};
    if (r.before_test && r.after_test) {
        out["test_set"] = {{"before", to_json(*r.before_test)}, {"after", to_json(*r.after_test)}};
    } else {
        out["test_set"] = nullptr;
    }
    return out;
}

ordered_json dataset_summary(const LabeledDataset& d, const std::filesystem::path& source) {
    std::array<std::size_t, 2> groups{}, classes{};
    for (const LabeledSample& s : d.samples()) {
        ++groups[static_cast<std::size_t>(s.s)];
        ++classes[static_cast<std::size_t>(s.y)];
    }
    const Encoding& enc = d.encoding();
    ordered_json out;
    out["path"] = source.string();
    out["samples"] = d.size();
    out["feature_dim"] = d.feature_dim();
    out["label"] = enc.label_name;
    out["label_values"] = enc.label_values;
    out["sensitive"] = enc.sensitive_name;
    out["sensitive_values"] = enc.sensitive_values;
    out["class_sizes"] = classes;
    out["group_sizes"] = groups;
    return out;
}

namespace {

std::optional<double> optional_number(const nlohmann::json& v) {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

}  // namespace

FairnessReport fairness_report_from_json(const nlohmann::json& doc) {
    try {
        FairnessReport r;
        r.samples = doc.at("samples").get<std::size_t>();
        r.accuracy = doc.at("accuracy").get<double>();
        for (std::size_t g = 0; g < 2; ++g) r.accuracy_per_group[g] = optional_number(doc.at("accuracy_per_group").at(g));
        r.spd = optional_number(doc.at("spd"));
        r.di_raw = optional_number(doc.at("di_raw"));
        r.di_score = optional_number(doc.at("di_score"));
        r.eod = optional_number(doc.at("eod"));
        r.fpr_gap = optional_number(doc.at("fpr_gap"));
        const auto& dep = doc.at("deprived");
        if (!dep.is_null()) {
            DeprivedGroup d;
            d.group = dep.at("group").get<int>();
            d.no_bias_signal = dep.at("no_bias_signal").get<bool>();
            for (std::size_t g = 0; g < 2; ++g) {
                const auto& c = dep.at("misclassification_cost").at(g);
                d.misclassification_cost[g] = c.is_null() ? std::numeric_limits<double>::infinity() : c.get<double>();
            }
            r.deprived = d;
        }
        for (std::size_t g = 0; g < 2; ++g) {
            const auto& c = doc.at("counts").at(g);
            r.counts.group[g] = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                                 c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>()};
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed fairness report: ") + e.what());
    }
}

}  // namespace fairfix
