#include "fairfix/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairfix/error.hpp"
#include "fairfix/localize.hpp"
#include "fairfix/report_json.hpp"

namespace fairfix::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Command c) {
    switch (c) {
        case Command::evaluate: return "evaluate";
        case Command::localize: return "localize";
        case Command::repair: return "repair";
    }
    return "?";
}

Setting RunConfig::resolved_setting() const {
    if (setting == "same") return Setting::same;
    if (setting == "diff") return Setting::diff;
    if (setting == "auto") return label == sensitive ? Setting::same : Setting::diff;
    throw InputError("setting must be auto, same or diff, got '" + setting + "'");
}

void apply_config_json(RunConfig& c, const json& doc) {
    if (!doc.is_object()) throw InputError("config file must hold a JSON object");
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "model") c.model = v.get<std::string>();
            else if (key == "data") c.data = v.get<std::string>();
            else if (key == "test") c.test = v.is_null() ? std::nullopt : std::optional<fs::path>(v.get<std::string>());
            else if (key == "label") c.label = v.get<std::string>();
            else if (key == "sensitive") c.sensitive = v.get<std::string>();
            else if (key == "features") c.features = v.get<std::vector<std::string>>();
            else if (key == "setting") c.setting = v.get<std::string>();
            else if (key == "metric") c.pso.metric = parse_metric(v.get<std::string>());
            else if (key == "layer") c.layer = v.get<std::size_t>();
            else if (key == "top_k") c.top_k = v.get<std::size_t>();
            else if (key == "particles") c.pso.particles = v.get<std::size_t>();
            else if (key == "generations") c.pso.max_generations = v.get<std::size_t>();
            else if (key == "stagnation") c.pso.stagnation_limit = v.get<std::size_t>();
            else if (key == "inertia") c.pso.inertia = v.get<double>();
            else if (key == "cognitive") c.pso.cognitive = v.get<double>();
            else if (key == "social") c.pso.social = v.get<double>();
            else if (key == "velocity_clamp") c.pso.velocity_clamp = v.get<double>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "runs") c.runs = v.get<std::size_t>();
            else if (key == "positive_class") c.pso.positive_class = v.get<int>();
            else if (key == "scores") c.scores = v.get<bool>();
            else if (key == "out") c.out = v.get<std::string>();
            else throw InputError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("bad config value: ") + e.what());
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

// Files are staged in memory and only land on disk once the command succeeded.
struct Artifacts {
    std::vector<std::pair<fs::path, std::string>> files;

    void add(fs::path rel, std::string content) { files.emplace_back(std::move(rel), std::move(content)); }

    void commit(const fs::path& dir) const {
        std::vector<std::pair<fs::path, fs::path>> staged;
        try {
            for (const auto& [rel, content] : files) {
                const fs::path final_path = dir / rel;
                fs::create_directories(final_path.parent_path());
                fs::path tmp = final_path;
                tmp += ".partial";
                std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
                f << content;
                f.close();
                if (!f) throw InputError("cannot write " + tmp.string());
                staged.emplace_back(tmp, final_path);
            }
            for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
        } catch (...) {
            std::error_code ec;
            for (const auto& [tmp, final_path] : staged) fs::remove(tmp, ec);
            throw;
        }
    }
};

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

ordered_json config_echo(const RunConfig& c, Setting setting, std::size_t layer) {
    ordered_json out;
    out["command"] = std::string(to_string(c.command));
    out["model"] = c.model.string();
    out["data"] = c.data.string();
    out["test"] = c.test ? ordered_json(c.test->string()) : ordered_json(nullptr);
    out["label"] = c.label;
    out["sensitive"] = c.sensitive;
    out["features"] = c.features ? ordered_json(*c.features) : ordered_json(nullptr);
    out["setting_requested"] = c.setting;
    out["setting"] = std::string(to_string(setting));
    out["layer"] = layer;
    out["top_k"] = c.top_k ? ordered_json(*c.top_k) : ordered_json(nullptr);
    out["seed"] = c.seed;
    out["runs"] = c.runs;
    RepairConfig pso = c.pso;
    pso.seed = c.seed;
    out["pso"] = to_json(pso);
    return out;
}

std::string model_text(const Model& m) { return model_to_json(m).dump(1) + "\n"; }

struct RunOutcome {
    ordered_json localization;
    ordered_json repair;  // null when there was nothing to repair
    Model patched;
    std::optional<RepairResult> result;
};

}  // namespace

ordered_json run(const RunConfig& c, std::ostream& log) {
    const auto start = Clock::now();
    ordered_json warnings = ordered_json::array();
    auto warn = [&](const std::string& msg) {
        warnings.push_back(msg);
        log << "warning: " << msg << "\n";
    };

    if (c.model.empty()) throw InputError("missing --model");
    if (c.data.empty()) throw InputError("missing --data");
    if (c.label.empty()) throw InputError("missing --label");
    if (c.sensitive.empty()) throw InputError("missing --sensitive");
    if (c.out.empty()) throw InputError("missing --out");
    if (c.runs < 1) throw InputError("--runs must be at least 1");
    if (c.runs > 1 && c.command != Command::repair) throw InputError("--runs applies to repair only");
    RepairConfig base_pso = c.pso;
    base_pso.seed = c.seed;
    base_pso.validate();

    auto t = Clock::now();
    const Model model = load_model(c.model);
    CsvOptions options{c.label, c.sensitive, c.features, nullptr};
    const LabeledDataset repair_set = load_csv(c.data, options);
    std::optional<LabeledDataset> test_set;
    if (c.test) {
        options.reference = &repair_set.encoding();
        test_set = load_csv(*c.test, options);
    }
    if (repair_set.feature_dim() != model.input_dim()) {
        throw InputError("dataset encodes " + std::to_string(repair_set.feature_dim()) +
                         " features but the model expects " + std::to_string(model.input_dim()));
    }
    if (model.num_classes() != 2) throw InputError("the model must have exactly 2 output classes");
    const std::size_t layer = c.layer.value_or(model.num_layers() - 1);
    if (layer >= model.num_layers()) {
        throw InputError("--layer " + std::to_string(layer) + " out of range: the model has " +
                         std::to_string(model.num_layers()) + " layers");
    }
    const Setting setting = c.resolved_setting();
    if (setting == Setting::same && c.label != c.sensitive) {
        throw SettingMismatch("setting 'same' needs the label column to be the sensitive column");
    }
    ordered_json timings;
    timings["load_s"] = seconds_since(t);

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["config"] = config_echo(c, setting, layer);
    report["datasets"] = {{"repair", dataset_summary(repair_set, c.data)},
                          {"test", test_set ? dataset_summary(*test_set, *c.test) : ordered_json(nullptr)}};

    Artifacts artifacts;
    artifacts.add("encoding.json", encoding_to_json(repair_set.encoding()).dump(2) + "\n");

    t = Clock::now();
    const FairnessReport before_repair = fairfix::report(annotate_predictions(repair_set, model), c.pso.positive_class);
    std::optional<FairnessReport> before_test;
    if (test_set) before_test = fairfix::report(annotate_predictions(*test_set, model), c.pso.positive_class);
    report["evaluation"] = {{"repair", to_json(before_repair)},
                            {"test", before_test ? to_json(*before_test) : ordered_json(nullptr)}};
    timings["evaluate_s"] = seconds_since(t);

    if (c.command != Command::evaluate) {
        double localize_s = 0.0, repair_s = 0.0;
        std::vector<RunOutcome> outcomes;
        for (std::size_t r = 0; r < c.runs; ++r) {
            const std::uint64_t seed = c.seed + r;
            t = Clock::now();
            LocalizationOptions lopts{setting, layer, c.top_k, seed, kDefaultWeightCap};
            const LocalizationResult loc = fairfl(model, repair_set, lopts);
            localize_s += seconds_since(t);
            if (loc.nothing_to_localize) {
                warn("seed " + std::to_string(seed) +
                     ": the repair set has no misclassified samples, nothing to localize");
            } else if (loc.pareto.empty()) {
                warn("seed " + std::to_string(seed) + ": the localization front is empty");
            }
            RunOutcome outcome{to_json(loc, c.scores), nullptr, model, std::nullopt};
            if (c.command == Command::repair) {
                if (loc.pareto.empty()) {
                    warn("seed " + std::to_string(seed) + ": nothing to repair, the model is written unchanged");
                } else {
                    t = Clock::now();
                    RepairConfig pso = base_pso;
                    pso.seed = seed;
                    RepairResult result = fairfix::repair(model, repair_set, test_set ? &*test_set : nullptr, loc, pso);
                    repair_s += seconds_since(t);
                    if (result.identity_fallback) {
                        warn("seed " + std::to_string(seed) +
                             ": no candidate beat the original model, the identity patch is kept");
                    }
                    outcome.repair = to_json(result);
                    outcome.patched = result.patched_model;
                    outcome.result = std::move(result);
                }
            }
            outcomes.push_back(std::move(outcome));
        }
        timings["localize_s"] = localize_s;
        if (c.command == Command::repair) timings["repair_s"] = repair_s;

        if (c.runs == 1) {
            report["localization"] = outcomes.front().localization;
            if (c.command == Command::repair) {
                report["repair"] = outcomes.front().repair;
                artifacts.add("patched_model.json", model_text(outcomes.front().patched));
            }
        } else {
            const Metric m = c.pso.metric;
            ordered_json runs = ordered_json::array();
            ordered_json dist;
            dist["metric"] = std::string(to_string(m));
            ordered_json before_rep = ordered_json::array(), after_rep = ordered_json::array();
            ordered_json before_tst = ordered_json::array(), after_tst = ordered_json::array();
            for (std::size_t r = 0; r < outcomes.size(); ++r) {
                const std::uint64_t seed = c.seed + r;
                const RunOutcome& o = outcomes[r];
                const fs::path dir = fs::path("runs") / ("seed_" + std::to_string(seed));
                ordered_json run_report;
                run_report["schema_version"] = kSchemaVersion;
                run_report["seed"] = seed;
                run_report["localization"] = o.localization;
                run_report["repair"] = o.repair;
                artifacts.add(dir / "report.json", dump(run_report));
                artifacts.add(dir / "patched_model.json", model_text(o.patched));

                const FairnessReport& after = o.result ? o.result->after_repair : before_repair;
                before_rep.push_back(number_or_null(metric_value(before_repair, m)));
                after_rep.push_back(number_or_null(metric_value(after, m)));
                if (before_test) {
                    const FairnessReport& after_t = o.result ? *o.result->after_test : *before_test;
                    before_tst.push_back(number_or_null(metric_value(*before_test, m)));
                    after_tst.push_back(number_or_null(metric_value(after_t, m)));
                }
                runs.push_back({{"seed", seed},
                                {"report", (dir / "report.json").generic_string()},
                                {"pareto_size", o.localization["pareto"].size()},
                                {"identity_fallback", o.result ? o.result->identity_fallback : true},
                                {"accuracy_before", before_repair.accuracy},
                                {"accuracy_after", after.accuracy}});
            }
            dist["repair_before"] = std::move(before_rep);
            dist["repair_after"] = std::move(after_rep);
            dist["test_before"] = before_test ? std::move(before_tst) : ordered_json(nullptr);
            dist["test_after"] = before_test ? std::move(after_tst) : ordered_json(nullptr);
            report["runs"] = std::move(runs);
            report["distribution"] = std::move(dist);
        }
    }

    report["warnings"] = warnings;
    timings["total_s"] = seconds_since(start);
    report["timings"] = timings;
    artifacts.add("report.json", dump(report));
    artifacts.commit(c.out);
    return report;
}

namespace {

struct Flags {
    std::optional<std::string> config, model, data, test, label, sensitive, setting, metric, out;
    std::optional<std::vector<std::string>> features;
    std::optional<std::size_t> layer, top_k, particles, generations, stagnation, runs;
    std::optional<double> inertia, cognitive, social, velocity_clamp;
    std::optional<std::uint64_t> seed;
    std::optional<int> positive_class;
    bool scores = false;
};

void add_flags(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON config file; flags override its values");
    app->add_option("--model", f.model, "model JSON");
    app->add_option("--data", f.data, "repair set CSV");
    app->add_option("--test", f.test, "test set CSV (optional)");
    app->add_option("--label", f.label, "label column");
    app->add_option("--sensitive", f.sensitive, "sensitive attribute column");
    app->add_option("--features", f.features, "feature columns (default: all other columns)")->delimiter(',');
    app->add_option("--setting", f.setting, "auto | same | diff");
    app->add_option("--metric", f.metric, "spd | di | eod | fpr");
    app->add_option("--layer", f.layer, "target layer index (default: last)");
    app->add_option("--top-k", f.top_k, "cap on the localized front size");
    app->add_option("--particles", f.particles, "swarm size");
    app->add_option("--generations", f.generations, "maximum generations");
    app->add_option("--stagnation", f.stagnation, "stop after this many generations without improvement");
    app->add_option("--inertia", f.inertia, "PSO inertia");
    app->add_option("--cognitive", f.cognitive, "PSO cognitive coefficient");
    app->add_option("--social", f.social, "PSO social coefficient");
    app->add_option("--velocity-clamp", f.velocity_clamp, "velocity bound (default: 3 sigma of the layer)");
    app->add_option("--seed", f.seed, "random seed");
    app->add_option("--runs", f.runs, "repeat repair with seeds seed..seed+runs-1");
    app->add_option("--positive-class", f.positive_class, "class index treated as the favorable outcome");
    app->add_flag("--scores", f.scores, "include every weight's scores in the report");
    app->add_option("--out", f.out, "output directory");
}

RunConfig to_config(Command command, const Flags& f) {
    RunConfig c;
    c.command = command;
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw InputError("cannot open config file " + *f.config);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw InputError("config file " + *f.config + " is not valid JSON: " + e.what());
        }
        apply_config_json(c, doc);
    }
    if (f.model) c.model = *f.model;
    if (f.data) c.data = *f.data;
    if (f.test) c.test = fs::path(*f.test);
    if (f.label) c.label = *f.label;
    if (f.sensitive) c.sensitive = *f.sensitive;
    if (f.features) c.features = *f.features;
    if (f.setting) c.setting = *f.setting;
    if (f.metric) c.pso.metric = parse_metric(*f.metric);
    if (f.layer) c.layer = *f.layer;
    if (f.top_k) c.top_k = *f.top_k;
    if (f.particles) c.pso.particles = *f.particles;
    if (f.generations) c.pso.max_generations = *f.generations;
    if (f.stagnation) c.pso.stagnation_limit = *f.stagnation;
    if (f.inertia) c.pso.inertia = *f.inertia;
    if (f.cognitive) c.pso.cognitive = *f.cognitive;
    if (f.social) c.pso.social = *f.social;
    if (f.velocity_clamp) c.pso.velocity_clamp = *f.velocity_clamp;
    if (f.seed) c.seed = *f.seed;
    if (f.runs) c.runs = *f.runs;
    if (f.positive_class) c.pso.positive_class = *f.positive_class;
    if (f.scores) c.scores = true;
    if (f.out) c.out = *f.out;
    return c;
}

void print_summary(const ordered_json& report, const RunConfig& c, std::ostream& out) {
    auto metric = [](const ordered_json& r, const char* key) {
        return r[key].is_null() ? std::string("undefined") : r[key].dump();
    };
    const auto& rep = report["evaluation"]["repair"];
    out << "repair set: accuracy " << rep["accuracy"].dump() << ", spd " << metric(rep, "spd") << ", di "
        << metric(rep, "di_raw") << ", eod " << metric(rep, "eod") << ", fpr gap " << metric(rep, "fpr_gap")
        << "\n";
    if (report.contains("localization")) {
        out << "localized " << report["localization"]["pareto"].size() << " weights in layer "
            << report["config"]["layer"].dump() << "\n";
    }
    if (report.contains("repair") && !report["repair"].is_null()) {
        const auto& r = report["repair"];
        out << "repaired " << r["patch"].size() << " weights: fitness " << metric(r, "original_fitness") << " -> "
            << metric(r, "best_fitness") << " after " << r["generations"].dump() << " generations\n";
    }
    if (report.contains("runs")) out << "completed " << report["runs"].size() << " runs\n";
    out << "report: " << (c.out / "report.json").string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Localize and repair the weights of an MLP classifier that cause group unfairness", "fairfix"};
    app.require_subcommand(1);
    Flags evaluate_flags, localize_flags, repair_flags;
    CLI::App* evaluate = app.add_subcommand("evaluate", "fairness and accuracy report");
    CLI::App* localize = app.add_subcommand("localize", "find the weights responsible for unfairness");
    CLI::App* repair = app.add_subcommand("repair", "localize, then search new values for those weights");
    add_flags(evaluate, evaluate_flags);
    add_flags(localize, localize_flags);
    add_flags(repair, repair_flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; every parse failure is a usage error
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        RunConfig config;
        if (evaluate->parsed()) config = to_config(Command::evaluate, evaluate_flags);
        else if (localize->parsed()) config = to_config(Command::localize, localize_flags);
        else config = to_config(Command::repair, repair_flags);
        const ordered_json report = run(config, err);
        print_summary(report, config, out);
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace fairfix::cli
