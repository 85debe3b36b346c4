#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fairfix/data.hpp"
#include "fairfix/error.hpp"
#include "fairfix/model.hpp"
#include "fairfix/synthetic.hpp"
#include "oracles.hpp"

using namespace fairfix;

namespace {

LabeledDataset load_text(const std::string& name, const std::string& text, CsvOptions options) {
    const auto dir = oracle::temp_dir("data_" + name);
    oracle::write_file(dir / "d.csv", text);
    return load_csv(dir / "d.csv", options);
}

std::string error_of(const std::string& name, const std::string& text, CsvOptions options) {
    try {
        load_text(name, text, options);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

// Random annotated dataset; with `same`, y == s for every row.
LabeledDataset random_annotated(std::mt19937_64& rng, std::size_t n, bool same) {
    std::bernoulli_distribution coin(0.5);
    std::vector<int> y, s, y_hat;
    for (std::size_t i = 0; i < n; ++i) {
        s.push_back(coin(rng));
        y.push_back(same ? s.back() : coin(rng));
        y_hat.push_back(coin(rng));
    }
    return oracle::rows_dataset(y, s, y_hat);
}

}  // namespace

TEST(LoadCsv, DirectParse) {
    const auto d = load_text("direct", "a,b,label,group\n1.5,2.0,0,x\n0,1,1,y\n", {"label", "group"});
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.feature_dim(), 2u);
    EXPECT_EQ(d[0].x, (std::vector<double>{1.5, 2.0}));
    EXPECT_EQ(d[1].x, (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(d[0].y, 0);
    EXPECT_EQ(d[1].y, 1);
    EXPECT_FALSE(d.annotated());
}

TEST(LoadCsv, SensitiveValuesMapLexicographically) {
    const auto d = load_text("lex", "f,sex,y\n1,male,1\n2,female,0\n3,male,0\n", {"y", "sex"});
    EXPECT_EQ(d.encoding().sensitive_values[0], "female");
    EXPECT_EQ(d.encoding().sensitive_values[1], "male");
    EXPECT_EQ(d[0].s, 1);
    EXPECT_EQ(d[1].s, 0);
}

TEST(LoadCsv, CategoricalFeatureIsOneHot) {
    const auto d = load_text("onehot", "c,v,y,s\nB,1,0,0\nA,2,1,1\nC,3,0,1\nB,4,1,0\n", {"y", "s"});
    ASSERT_EQ(d.feature_dim(), 4u);
    const auto& col = d.encoding().features[0];
    EXPECT_TRUE(col.categorical);
    EXPECT_EQ(col.categories, (std::vector<std::string>{"A", "B", "C"}));
    // hand-built table: B -> 010, A -> 100, C -> 001
    const std::vector<std::vector<double>> expected{{0, 1, 0, 1}, {1, 0, 0, 2}, {0, 0, 1, 3}, {0, 1, 0, 4}};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(d[i].x, expected[i]);
    EXPECT_EQ(d.encoding().feature_names(), (std::vector<std::string>{"c=A", "c=B", "c=C", "v"}));
}

TEST(LoadCsv, ExplicitFeatureColumnsMayIncludeSensitive) {
    const auto d = load_text("withs", "x,s,y\n0.5,1,0\n-1,0,1\n", {"y", "s", std::vector<std::string>{"x", "s"}});
    EXPECT_EQ(d.feature_dim(), 2u);
    EXPECT_EQ(d[0].x, (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(d[0].s, 1);
}

TEST(LoadCsv, Errors) {
    EXPECT_NE(error_of("missing", "a,y\n1,0\n", {"y", "s"}).find("'s'"), std::string::npos);
    EXPECT_NE(error_of("three", "a,y,s\n1,0,a\n2,1,b\n3,2,a\n", {"y", "s"}).find("y"), std::string::npos);
    const std::string bad = error_of("badnum", "a,y,s\n1,0,a\n2x,1,b\n", {"y", "s"});
    EXPECT_NE(bad.find("row"), std::string::npos);
    EXPECT_NE(bad.find("'a'"), std::string::npos);
    EXPECT_NE(error_of("empty", "a,y,s\n1,0,a\n,1,b\n", {"y", "s"}), "");
    EXPECT_NE(error_of("ragged", "a,y,s\n1,0,a\n2,1\n", {"y", "s"}), "");
    EXPECT_NE(error_of("onevalue", "a,y,s\n1,0,a\n2,0,b\n", {"y", "s"}), "");
    EXPECT_THROW(load_csv("/nonexistent/file.csv", {"y", "s"}), InputError);
}

TEST(LoadCsv, QuotedFieldsAndCrlf) {
    const auto d = load_text("quoted", "\"name, full\",y,s\r\n\"x,1\",0,a\r\n\"x\"\"2\",1,b\r\n", {"y", "s"});
    EXPECT_EQ(d.encoding().features[0].categories, (std::vector<std::string>{"x\"2", "x,1"}));
}

TEST(LoadCsv, ReferenceEncodingReused) {
    const auto train = load_text("ref_a", "c,y,s\nA,0,m\nB,1,f\n", {"y", "s"});
    CsvOptions options{"y", "s"};
    options.reference = &train.encoding();
    const auto test = load_text("ref_b", "c,y,s\nB,1,m\nB,1,m\n", options);
    EXPECT_EQ(test.encoding(), train.encoding());
    EXPECT_EQ(test[0].x, (std::vector<double>{0, 1}));
    EXPECT_EQ(test[0].s, 1);
    EXPECT_NE(error_of("ref_c", "c,y,s\nZ,1,m\n", options), "");
}

TEST(SaveCsv, RoundTripIsExact) {
    const auto dir = oracle::temp_dir("data_roundtrip");
    const auto fixture = planted_bias_fixture(4, 200, 10);
    save_csv(fixture.repair_set, dir / "a.csv");
    const CsvOptions options{"y", "s", std::vector<std::string>{"x1", "s"}};
    const auto back = load_csv(dir / "a.csv", options);
    EXPECT_EQ(back, fixture.repair_set);
    save_csv(back, dir / "b.csv");
    EXPECT_EQ(oracle::read_file(dir / "a.csv"), oracle::read_file(dir / "b.csv"));

    const auto cat = load_text("rt_cat", "c,v,y,s\nB,0.1,no,f\nA,1e-300,yes,m\nC,-3,no,m\n", {"y", "s"});
    save_csv(cat, dir / "c.csv");
    EXPECT_EQ(load_csv(dir / "c.csv", {"y", "s"}), cat);
}

TEST(SaveCsv, SharedLabelAndSensitiveColumn) {
    const auto ex = gender_example();
    const auto dir = oracle::temp_dir("data_shared");
    save_csv(ex.dataset, dir / "g.csv");
    auto back = load_csv(dir / "g.csv", {"gender", "gender"});
    EXPECT_EQ(back.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(back[i].x, ex.dataset[i].x);
        EXPECT_EQ(back[i].y, back[i].s);
    }
}

TEST(Encoding, JsonRoundTrip) {
    const auto d = load_text("enc", "c,v,y,s\nB,1,0,f\nA,2,1,m\n", {"y", "s"});
    const auto dir = oracle::temp_dir("data_enc");
    save_encoding(d.encoding(), dir / "e.json");
    EXPECT_EQ(load_encoding(dir / "e.json"), d.encoding());
}

TEST(Annotate, ConstantPerfectAndPerSample) {
    const auto fixture = planted_bias_fixture(1, 100, 10);
    // constant: a softmax layer whose only signal is the bias
    Model constant(2, {DenseLayer{2, 2, {0, 0, 0, 0}, {0, 1}, Activation::softmax}});
    for (const auto& s : annotate_predictions(fixture.repair_set, constant).samples()) EXPECT_EQ(*s.y_hat, 1);

    const auto ex = gender_example();
    const auto relabeled = annotate_predictions(ex.dataset, ex.model);
    EXPECT_EQ(relabeled, ex.dataset);

    std::mt19937_64 rng(9);
    const Model random = oracle::random_model(rng, {2, 5, 2});
    const auto annotated = annotate_predictions(fixture.repair_set, random);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(static_cast<std::size_t>(*annotated[i].y_hat), predict(random, fixture.repair_set[i].x));
        EXPECT_EQ(annotated[i].x, fixture.repair_set[i].x);
    }
    Model wrong_dim(3, {DenseLayer{3, 2, std::vector<double>(6), {0, 0}, Activation::softmax}});
    EXPECT_THROW(annotate_predictions(fixture.repair_set, wrong_dim), InputError);
}

TEST(PartitionSame, GenderExampleCounts) {
    const auto p = partition_settsame(gender_example().dataset);
    EXPECT_EQ(p.count(kNeg, 0), 3u);
    EXPECT_EQ(p.count(kNeg, 1), 1u);
    EXPECT_EQ(p.count(kPos, 0), 2u);
    EXPECT_EQ(p.count(kPos, 1), 4u);
    EXPECT_EQ(p.total(), 10u);
}

TEST(PartitionSame, AllCorrectHasNoNegatives) {
    const auto d = oracle::rows_dataset({0, 1, 1, 0}, {0, 1, 1, 0}, {0, 1, 1, 0});
    const auto p = partition_settsame(d);
    EXPECT_TRUE(p.cell(kNeg, 0).empty());
    EXPECT_TRUE(p.cell(kNeg, 1).empty());
}

TEST(PartitionSame, Preconditions) {
    EXPECT_THROW(partition_settsame(oracle::rows_dataset({0, 1}, {0, 0}, {0, 1})), SettingMismatch);
    EXPECT_THROW(partition_settsame(oracle::rows_dataset({0, 1}, {0, 1}, {})), PreconditionError);
    EXPECT_THROW(partition_settdiff(oracle::rows_dataset({0, 1}, {0, 1}, {})), PreconditionError);
}

TEST(PartitionSame, MatchesFourWayFilter) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = random_annotated(rng, 50, true);
        const auto p = partition_settsame(d);
        std::set<std::size_t> seen;
        for (int outcome = 0; outcome < 2; ++outcome) {
            for (int g = 0; g < 2; ++g) {
                std::vector<std::size_t> expected;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    const bool correct = *d[i].y_hat == d[i].y;
                    if (d[i].s == g && correct == (outcome == kPos)) expected.push_back(i);
                }
                EXPECT_EQ(p.cell(outcome, g), expected);
                seen.insert(expected.begin(), expected.end());
            }
        }
        EXPECT_EQ(seen.size(), d.size());
        EXPECT_EQ(p.total(), d.size());
    }
}

TEST(PartitionDiff, IncomeRaceExampleCounts) {
    const auto p = partition_settdiff(income_race_example().dataset);
    EXPECT_EQ(p.count(0, 0), 2u);  // (0, black)
    EXPECT_EQ(p.count(0, 1), 1u);  // (0, white)
    EXPECT_EQ(p.count(1, 0), 1u);  // (1, black)
    EXPECT_EQ(p.count(1, 1), 2u);  // (1, white)
}

TEST(PartitionDiff, NoCorrectPredictionsGivesEmptyCells) {
    const auto p = partition_settdiff(oracle::rows_dataset({0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}));
    EXPECT_EQ(p.total(), 0u);
}

TEST(PartitionDiff, MatchesFilterOverCorrectSamples) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = random_annotated(rng, 60, false);
        const auto p = partition_settdiff(d);
        const auto correct = correctly_classified(d);
        std::size_t covered = 0;
        for (int y = 0; y < 2; ++y) {
            for (int g = 0; g < 2; ++g) {
                std::vector<std::size_t> expected;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    if (d[i].y == y && d[i].s == g && *d[i].y_hat == y) expected.push_back(i);
                }
                EXPECT_EQ(p.cell(y, g), expected);
                covered += expected.size();
            }
        }
        EXPECT_EQ(covered, correct.size());
        EXPECT_EQ(partition_settdiff(d), p);
    }
}

TEST(Balance, SizeClampAndDeterminism) {
    const std::vector<std::size_t> pos{10, 11, 12, 13, 14, 15};
    const auto a = balance_positive_sample(pos, 4, 7);
    EXPECT_EQ(a.size(), 4u);
    EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 4u);
    for (auto i : a) EXPECT_NE(std::find(pos.begin(), pos.end(), i), pos.end());
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_EQ(balance_positive_sample(pos, 4, 7), a);

    const std::vector<std::size_t> two{3, 9};
    EXPECT_EQ(balance_positive_sample(two, 4, 1), two);
    EXPECT_THROW(balance_positive_sample(pos, 0, 1), NothingToLocalize);
}

TEST(Balance, EverySubsetReachable) {
    const std::vector<std::size_t> pos{0, 1, 2, 3};
    std::set<std::vector<std::size_t>> seen;
    for (std::uint64_t seed = 0; seed < 300; ++seed) seen.insert(balance_positive_sample(pos, 2, seed));
    EXPECT_EQ(seen.size(), 6u);
}
