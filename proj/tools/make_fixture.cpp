// Writes the generated fixtures as model JSON + CSV files:
//   fairfix_fixture planted DIR [--seed S] [--samples N] [--strength B]
//   fairfix_fixture gender DIR
//   fairfix_fixture income-race DIR
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "fairfix/synthetic.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Write fixture models and datasets", "fairfix_fixture"};
    app.require_subcommand(1);
    std::string dir;
    std::uint64_t seed = 0;
    std::size_t samples = 1000;
    double strength = 2.0;
    auto* planted = app.add_subcommand("planted", "2-feature dataset with a planted biased weight");
    planted->add_option("dir", dir)->required();
    planted->add_option("--seed", seed);
    planted->add_option("--samples", samples);
    planted->add_option("--strength", strength);
    auto* gender = app.add_subcommand("gender", "ten-row gender prediction example");
    gender->add_option("dir", dir)->required();
    auto* income = app.add_subcommand("income-race", "ten-row income prediction example");
    income->add_option("dir", dir)->required();
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(dir);
        if (planted->parsed()) {
            const auto f = fairfix::planted_bias_fixture(seed, samples, samples, strength);
            fairfix::save_model(f.model, fs::path(dir) / "model.json");
            fairfix::save_csv(f.repair_set, fs::path(dir) / "repair.csv");
            fairfix::save_csv(f.test_set, fs::path(dir) / "test.csv");
            std::cout << "planted weight: layer " << f.culprit.layer << " row " << f.culprit.row << " col "
                      << f.culprit.col << "\n";
        } else {
            const auto ex = gender->parsed() ? fairfix::gender_example() : fairfix::income_race_example();
            fairfix::save_model(ex.model, fs::path(dir) / "model.json");
            fairfix::save_csv(ex.dataset, fs::path(dir) / "data.csv");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
