#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "fairfix/error.hpp"
#include "fairfix/report_json.hpp"
#include "fairfix/synthetic.hpp"
#include "oracles.hpp"

using namespace fairfix;

TEST(ReportJson, FloatsReparseToSameBits) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 2000; ++i) {
        const double v = i % 3 == 0 ? std::ldexp(u(rng), -900 + i % 1800) : u(rng) / 7.0;
        const std::string text = number_or_null(v).dump();
        const double back = nlohmann::json::parse(text).get<double>();
        EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0) << text;
    }
    EXPECT_TRUE(number_or_null(std::numeric_limits<double>::infinity()).is_null());
    EXPECT_TRUE(number_or_null(NAN).is_null());
    EXPECT_TRUE(number_or_null(std::optional<double>{}).is_null());
}

TEST(ReportJson, FairnessReportRoundTrip) {
    const auto fx = planted_bias_fixture(0, 300, 10);
    const auto r = report(annotate_predictions(fx.repair_set, fx.model));
    const auto back = fairness_report_from_json(nlohmann::json::parse(to_json(r).dump()));
    EXPECT_EQ(back, r);

    // undefined metrics serialize as null and come back empty
    const auto undefined = report(oracle::rows_dataset({1, 1}, {0, 0}, {1, 0}));
    const auto j = to_json(undefined);
    EXPECT_TRUE(j["spd"].is_null());
    EXPECT_TRUE(j["eod"].is_null());
    EXPECT_EQ(fairness_report_from_json(nlohmann::json::parse(j.dump())), undefined);
}

TEST(ReportJson, MalformedReportIsInputError) {
    EXPECT_THROW(fairness_report_from_json(nlohmann::json::parse(R"({"samples": 3})")), InputError);
}

TEST(ReportJson, LocalizationScoresOnRequest) {
    const auto fx = planted_bias_fixture(1, 300, 10);
    const auto loc = fairfl(fx.model, fx.repair_set, {Setting::diff, 1, std::nullopt, 1});
    const auto brief = to_json(loc);
    const auto full = to_json(loc, true);
    EXPECT_FALSE(brief.contains("scores"));
    ASSERT_TRUE(full.contains("scores"));
    EXPECT_EQ(full["scores"].size(), loc.scored.size());
    EXPECT_EQ(brief["pareto"].size(), loc.pareto.size());
}
