#include <gtest/gtest.h>

#include <random>

#include "fairfix/error.hpp"
#include "fairfix/fairness.hpp"
#include "fairfix/synthetic.hpp"
#include "oracles.hpp"

using namespace fairfix;

namespace {

// Group g has `n` samples of which `pos` are predicted positive; labels follow predictions.
GroupCounts rates(std::size_t n0, std::size_t pos0, std::size_t n1, std::size_t pos1) {
    GroupCounts c;
    c.group[0] = {pos0, 0, n0 - pos0, 0};
    c.group[1] = {pos1, 0, n1 - pos1, 0};
    return c;
}

GroupCounts swapped(GroupCounts c) {
    std::swap(c.group[0], c.group[1]);
    return c;
}

struct Rows {
    std::vector<int> y, s, y_hat;
};

Rows random_rows(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p_s = u(rng), p_y = u(rng), p_err = u(rng);
    Rows r;
    for (std::size_t i = 0; i < n; ++i) {
        r.s.push_back(u(rng) < p_s);
        r.y.push_back(u(rng) < p_y);
        r.y_hat.push_back(u(rng) < p_err ? 1 - r.y.back() : r.y.back());
    }
    return r;
}

}  // namespace

TEST(GroupCounts, AllTruePositivesInGroupZero) {
    const auto d = oracle::rows_dataset({1, 1, 1}, {0, 0, 0}, {1, 1, 1});
    const auto c = group_counts(d);
    EXPECT_EQ(c.group[0], (Confusion{3, 0, 0, 0}));
    EXPECT_EQ(c.group[1], Confusion{});
}

TEST(GroupCounts, GenderExample) {
    const auto c = group_counts(gender_example().dataset);
    // female (s0): 2 correct (label 0 predicted 0), 3 wrong (label 0 predicted 1)
    EXPECT_EQ(c.group[0], (Confusion{0, 3, 2, 0}));
    EXPECT_EQ(c.group[1], (Confusion{4, 0, 0, 1}));
    EXPECT_EQ(c.total(), 10u);
}

TEST(GroupCounts, RequiresPredictions) {
    EXPECT_THROW(group_counts(oracle::rows_dataset({1}, {0}, {})), PreconditionError);
}

TEST(Spd, Examples) {
    EXPECT_EQ(spd(rates(10, 4, 10, 4)), 0.0);
    EXPECT_NEAR(spd(rates(10, 4, 10, 5)), 0.1, 1e-15);
    EXPECT_EQ(spd(rates(5, 5, 5, 0)), 1.0);
    EXPECT_THROW(spd(rates(0, 0, 5, 1)), UndefinedMetric);
}

TEST(Di, Examples) {
    auto d = di(rates(10, 4, 10, 4));
    EXPECT_EQ(d.raw, 1.0);
    EXPECT_EQ(d.score, 0.0);
    d = di(rates(10, 4, 10, 5));
    EXPECT_NEAR(d.raw, 0.8, 1e-15);
    EXPECT_NEAR(d.score, 0.2, 1e-15);
    d = di(rates(10, 1, 10, 5));
    EXPECT_NEAR(d.raw, 0.2, 1e-15);
    EXPECT_NEAR(d.score, 0.8, 1e-15);
    d = di(rates(10, 0, 10, 5));
    EXPECT_EQ(d.raw, 0.0);
    EXPECT_EQ(d.score, 1.0);
    EXPECT_THROW(di(rates(10, 0, 10, 0)), UndefinedMetric);
}

TEST(Eod, Examples) {
    GroupCounts c;
    c.group[0] = {9, 0, 0, 1};
    c.group[1] = {6, 0, 0, 4};
    EXPECT_NEAR(eod(c), 0.3, 1e-15);
    c.group[1] = {9, 2, 3, 1};
    EXPECT_EQ(eod(c), 0.0);
    c.group[0] = {5, 0, 0, 0};
    c.group[1] = {0, 0, 0, 5};
    EXPECT_EQ(eod(c), 1.0);
    c.group[1] = {0, 1, 1, 0};
    EXPECT_THROW(eod(c), UndefinedMetric);
}

TEST(FprGap, Examples) {
    GroupCounts c;
    c.group[0] = {0, 4, 16, 0};
    c.group[1] = {0, 1, 19, 0};
    EXPECT_NEAR(fpr_gap(c), 0.15, 1e-15);
    EXPECT_EQ(fpr_gap(swapped(c)), fpr_gap(c));
    c.group[1] = {3, 4, 16, 2};
    EXPECT_EQ(fpr_gap(c), 0.0);
    c.group[1] = {3, 0, 0, 2};
    EXPECT_THROW(fpr_gap(c), UndefinedMetric);
}

TEST(Deprived, GenderExampleIsFemale) {
    const auto d = identify_deprived(gender_example().dataset);
    EXPECT_EQ(d.group, 0);
    EXPECT_FALSE(d.no_bias_signal);
    EXPECT_NEAR(d.misclassification_cost[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.misclassification_cost[1], 2.0, 1e-15);
}

TEST(Deprived, MirrorImageSwapsGroup) {
    const auto c = group_counts(gender_example().dataset);
    EXPECT_EQ(identify_deprived(swapped(c)).group, 1);
}

TEST(Deprived, EqualErrorRatesSetFlag) {
    GroupCounts c;
    c.group[0] = {3, 1, 5, 1};
    c.group[1] = {3, 1, 5, 1};
    const auto d = identify_deprived(c);
    EXPECT_EQ(d.group, 0);
    EXPECT_TRUE(d.no_bias_signal);
    c.group[0] = {5, 0, 5, 0};
    c.group[1] = {2, 0, 3, 0};
    EXPECT_TRUE(identify_deprived(c).no_bias_signal);
}

TEST(Deprived, InvariantUnderDuplication) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        Rows r = random_rows(rng, 40);
        r.s[0] = 0;
        r.s[1] = 1;
        const auto c = group_counts(r.y, r.s, r.y_hat);
        GroupCounts k = c;
        for (auto& g : k.group) g = {g.tp * 3, g.fp * 3, g.tn * 3, g.fn * 3};
        EXPECT_EQ(identify_deprived(k).group, identify_deprived(c).group);
        EXPECT_EQ(identify_deprived(k).no_bias_signal, identify_deprived(c).no_bias_signal);
    }
}

TEST(Report, PerfectBalancedFixture) {
    const auto d = oracle::rows_dataset({0, 1, 0, 1}, {0, 0, 1, 1}, {0, 1, 0, 1});
    const auto r = report(d);
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(*r.spd, 0.0);
    EXPECT_EQ(*r.di_score, 0.0);
    EXPECT_EQ(*r.eod, 0.0);
    EXPECT_EQ(*r.fpr_gap, 0.0);
}

TEST(Report, GenderExample) {
    const auto r = report(gender_example().dataset);
    EXPECT_DOUBLE_EQ(r.accuracy, 0.6);
    EXPECT_DOUBLE_EQ(*r.accuracy_per_group[0], 0.4);
    EXPECT_DOUBLE_EQ(*r.accuracy_per_group[1], 0.8);
    EXPECT_EQ(r.deprived->group, 0);
    // each group contains a single label, so the conditional rates are undefined
    EXPECT_FALSE(r.eod.has_value());
    EXPECT_FALSE(r.fpr_gap.has_value());
    EXPECT_TRUE(r.spd.has_value());
}

TEST(Report, UndefinedMetricsBecomeInfiniteFitness) {
    const auto r = report(oracle::rows_dataset({1, 1}, {0, 1}, {0, 0}));
    EXPECT_FALSE(r.di_raw.has_value());
    EXPECT_EQ(metric_value(r, Metric::di), std::numeric_limits<double>::infinity());
    EXPECT_EQ(metric_value(r, Metric::spd), 0.0);
}

TEST(Metrics, MatchBruteForceEnumeration) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(4, 200);
    for (int trial = 0; trial < 100; ++trial) {
        const Rows rows = random_rows(rng, size(rng));
        for (int positive : {1, 0}) {
            const auto r = report(group_counts(rows.y, rows.s, rows.y_hat, positive));
            const auto b = oracle::brute_metrics(rows.y, rows.s, rows.y_hat, positive);
            EXPECT_EQ(r.accuracy, b.accuracy);
            EXPECT_EQ(r.spd, b.spd);
            EXPECT_EQ(r.di_raw, b.di_raw);
            EXPECT_EQ(r.di_score, b.di_score);
            EXPECT_EQ(r.eod, b.eod);
            EXPECT_EQ(r.fpr_gap, b.fpr_gap);
        }
    }
}

TEST(Metrics, SwapInvarianceAndRanges) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const Rows rows = random_rows(rng, 30);
        const auto c = group_counts(rows.y, rows.s, rows.y_hat);
        const auto a = report(c), b = report(swapped(c));
        EXPECT_EQ(a.spd, b.spd);
        EXPECT_EQ(a.di_score, b.di_score);
        EXPECT_EQ(a.eod, b.eod);
        EXPECT_EQ(a.fpr_gap, b.fpr_gap);
        for (const auto& v : {a.spd, a.eod, a.fpr_gap, a.di_score}) {
            if (v) {
                EXPECT_GE(*v, 0.0);
                EXPECT_LE(*v, 1.0);
            }
        }
    }
}

TEST(Metrics, ParseNames) {
    EXPECT_EQ(parse_metric("spd"), Metric::spd);
    EXPECT_EQ(parse_metric("EOD"), Metric::eod);
    EXPECT_THROW(parse_metric("auc"), InputError);
}
