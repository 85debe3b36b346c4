#include "fairfix/fairness.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fairfix/bias.hpp"
#include "fairfix/data.hpp"
#include "fairfix/error.hpp"

namespace fairfix {

namespace {

void tally(Confusion& c, int y, int y_hat, int positive_class) {
    const bool actual = y == positive_class;
    const bool predicted = y_hat == positive_class;
    if (actual && predicted) ++c.tp;
    else if (actual) ++c.fn;
    else if (predicted) ++c.fp;
    else ++c.tn;
}

double rate(std::size_t num, std::size_t den, const char* what, int group) {
    if (den == 0) {
        throw UndefinedMetric(std::string(what) + " undefined: group " + std::to_string(group) +
                              " has no conditioning samples");
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

GroupCounts group_counts(const LabeledDataset& dataset, int positive_class) {
    if (!dataset.annotated()) throw PreconditionError("dataset has no predictions; annotate it first");
    GroupCounts counts;
    for (const auto& s : dataset.samples()) tally(counts.group[s.s], s.y, *s.y_hat, positive_class);
    return counts;
}

GroupCounts group_counts(std::span<const int> y, std::span<const int> s, std::span<const int> y_hat,
                         int positive_class) {
    if (y.size() != s.size() || y.size() != y_hat.size()) {
        throw InputError("label, group and prediction arrays differ in length");
    }
    GroupCounts counts;
    for (std::size_t i = 0; i < y.size(); ++i) tally(counts.group[s[i]], y[i], y_hat[i], positive_class);
    return counts;
}

double spd(const GroupCounts& c) {
    const double r0 = rate(c.group[0].predicted_positive(), c.group[0].total(), "SPD", 0);
    const double r1 = rate(c.group[1].predicted_positive(), c.group[1].total(), "SPD", 1);
    return std::fabs(r0 - r1);
}

DisparateImpact di(const GroupCounts& c) {
    const double r0 = rate(c.group[0].predicted_positive(), c.group[0].total(), "DI", 0);
    const double r1 = rate(c.group[1].predicted_positive(), c.group[1].total(), "DI", 1);
    const double hi = std::max(r0, r1);
    if (hi == 0.0) throw UndefinedMetric("DI undefined: neither group receives a positive prediction");
    DisparateImpact out;
    out.raw = std::min(r0, r1) / hi;
    out.score = std::fabs(1.0 - out.raw);
    return out;
}

double eod(const GroupCounts& c) {
    const double t0 = rate(c.group[0].tp, c.group[0].actual_positive(), "EOD", 0);
    const double t1 = rate(c.group[1].tp, c.group[1].actual_positive(), "EOD", 1);
    return std::fabs(t0 - t1);
}

double fpr_gap(const GroupCounts& c) {
    const double f0 = rate(c.group[0].fp, c.group[0].actual_negative(), "FPR", 0);
    const double f1 = rate(c.group[1].fp, c.group[1].actual_negative(), "FPR", 1);
    return std::fabs(f0 - f1);
}

double accuracy(const GroupCounts& c) {
    const std::size_t n = c.total();
    if (n == 0) throw UndefinedMetric("accuracy undefined on an empty dataset");
    return static_cast<double>(c.group[0].correct() + c.group[1].correct()) / static_cast<double>(n);
}

DeprivedGroup identify_deprived(const GroupCounts& c) {
    const std::size_t n = c.total();
    if (c.group[0].total() == 0 || c.group[1].total() == 0) {
        throw PreconditionError("deprived group needs both sensitive groups to be present");
    }
    const std::size_t wrong = c.group[0].wrong() + c.group[1].wrong();
    DeprivedGroup out;
    for (int g = 0; g < 2; ++g) {
        out.misclassification_cost[g] =
            cost(p_exp(n, c.group[g].total(), wrong), p_obs(c.group[g].wrong(), n));
    }
    if (wrong == 0 || out.misclassification_cost[0] == out.misclassification_cost[1]) {
        out.group = 0;
        out.no_bias_signal = true;
        return out;
    }
    out.group = out.misclassification_cost[1] < out.misclassification_cost[0] ? 1 : 0;
    return out;
}

DeprivedGroup identify_deprived(const LabeledDataset& dataset) {
    return identify_deprived(group_counts(dataset));
}

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::spd: return "spd";
        case Metric::di: return "di";
        case Metric::eod: return "eod";
        case Metric::fpr: return "fpr";
    }
    return "spd";
}

Metric parse_metric(std::string_view name) {
    if (name == "spd" || name == "SPD") return Metric::spd;
    if (name == "di" || name == "DI") return Metric::di;
    if (name == "eod" || name == "EOD") return Metric::eod;
    if (name == "fpr" || name == "FPR") return Metric::fpr;
    throw InputError("unknown fairness metric '" + std::string(name) + "' (expected spd, di, eod or fpr)");
}

FairnessReport report(const GroupCounts& counts) {
    FairnessReport r;
    r.samples = counts.total();
    r.counts = counts;
    r.accuracy = accuracy(counts);
    auto maybe = [](auto&& f) -> std::optional<double> {
        try {
            return f();
        } catch (const UndefinedMetric&) {
            return std::nullopt;
        }
    };
    r.spd = maybe([&] { return spd(counts); });
    try {
        const DisparateImpact d = di(counts);
        r.di_raw = d.raw;
        r.di_score = d.score;
    } catch (const UndefinedMetric&) {
    }
    r.eod = maybe([&] { return eod(counts); });
    r.fpr_gap = maybe([&] { return fpr_gap(counts); });
    for (int g = 0; g < 2; ++g) {
        const Confusion& c = counts.group[g];
        if (c.total() > 0) {
            r.accuracy_per_group[g] = static_cast<double>(c.correct()) / static_cast<double>(c.total());
        }
    }
    if (counts.group[0].total() > 0 && counts.group[1].total() > 0) r.deprived = identify_deprived(counts);
    return r;
}

FairnessReport report(const LabeledDataset& dataset, int positive_class) {
    return report(group_counts(dataset, positive_class));
}

double metric_value(const FairnessReport& r, Metric metric) {
    std::optional<double> v;
    switch (metric) {
        case Metric::spd: v = r.spd; break;
        case Metric::di: v = r.di_score; break;
        case Metric::eod: v = r.eod; break;
        case Metric::fpr: v = r.fpr_gap; break;
    }
    return v ? *v : std::numeric_limits<double>::infinity();
}

}  // namespace fairfix
