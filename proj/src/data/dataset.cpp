#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "csv.hpp"
#include "fairfix/data.hpp"
#include "fairfix/error.hpp"
#include "fairfix/kernels.hpp"
#include "fairfix/model.hpp"

namespace fairfix {

std::size_t Encoding::feature_dim() const {
    std::size_t dim = 0;
    for (const auto& f : features) dim += f.width();
    return dim;
}

std::vector<std::string> Encoding::feature_names() const {
    std::vector<std::string> names;
    for (const auto& f : features) {
        if (!f.categorical) {
            names.push_back(f.name);
            continue;
        }
        for (const auto& c : f.categories) names.push_back(f.name + "=" + c);
    }
    return names;
}

nlohmann::ordered_json encoding_to_json(const Encoding& encoding) {
    nlohmann::ordered_json doc;
    doc["label"] = {{"name", encoding.label_name}, {"values", encoding.label_values}};
    doc["sensitive"] = {{"name", encoding.sensitive_name}, {"values", encoding.sensitive_values}};
    auto features = nlohmann::ordered_json::array();
    for (const auto& f : encoding.features) {
        nlohmann::ordered_json entry;
        entry["name"] = f.name;
        entry["kind"] = f.categorical ? "categorical" : "numeric";
        if (f.categorical) entry["categories"] = f.categories;
        features.push_back(std::move(entry));
    }
    doc["features"] = std::move(features);
    return doc;
}

Encoding encoding_from_json(const nlohmann::json& doc) {
    try {
        Encoding e;
        e.label_name = doc.at("label").at("name").get<std::string>();
        e.label_values = doc.at("label").at("values").get<std::array<std::string, 2>>();
        e.sensitive_name = doc.at("sensitive").at("name").get<std::string>();
        e.sensitive_values = doc.at("sensitive").at("values").get<std::array<std::string, 2>>();
        for (const auto& entry : doc.at("features")) {
            FeatureColumn f;
            f.name = entry.at("name").get<std::string>();
            f.categorical = entry.at("kind").get<std::string>() == "categorical";
            if (f.categorical) f.categories = entry.at("categories").get<std::vector<std::string>>();
            e.features.push_back(std::move(f));
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed encoding document: ") + ex.what());
    }
}

void save_encoding(const Encoding& encoding, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << encoding_to_json(encoding).dump(2) << '\n';
}

Encoding load_encoding(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open encoding file " + path.string());
    try {
        return encoding_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& ex) {
        throw InputError("encoding file " + path.string() + " is not valid JSON: " + ex.what());
    }
}

LabeledDataset::LabeledDataset(std::vector<LabeledSample> samples, Encoding encoding)
    : samples_(std::move(samples)), encoding_(std::move(encoding)) {
    const std::size_t dim = encoding_.feature_dim();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        auto bad = [&](const std::string& what) {
            return InputError("sample " + std::to_string(i) + ": " + what);
        };
        if (s.x.size() != dim) {
            throw bad("has " + std::to_string(s.x.size()) + " features, expected " + std::to_string(dim));
        }
        if (s.y != 0 && s.y != 1) throw bad("label must be 0 or 1");
        if (s.s != 0 && s.s != 1) throw bad("sensitive value must be 0 or 1");
        if (s.y_hat && *s.y_hat != 0 && *s.y_hat != 1) throw bad("prediction must be 0 or 1");
    }
}

bool LabeledDataset::annotated() const {
    return std::all_of(samples_.begin(), samples_.end(), [](const auto& s) { return s.y_hat.has_value(); });
}

LabeledDataset LabeledDataset::with_predictions(std::span<const int> y_hat) const {
    if (y_hat.size() != samples_.size()) {
        throw InputError("prediction count does not match dataset size");
    }
    auto samples = samples_;
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].y_hat = y_hat[i];
    return LabeledDataset(std::move(samples), encoding_);
}

namespace {

std::size_t column_index(const csv::Table& table, const std::string& name,
                         const std::filesystem::path& path) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
        throw InputError(path.string() + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - table.header.begin());
}

std::string cell_ref(std::size_t row, const std::string& column) {
    // data rows are numbered from 1; the header is line 1
    return "row " + std::to_string(row + 1) + " (line " + std::to_string(row + 2) + "), column '" +
           column + "'";
}

std::array<std::string, 2> binary_values(const csv::Table& table, std::size_t col,
                                         const std::filesystem::path& path) {
    std::set<std::string> distinct;
    for (const auto& row : table.rows) distinct.insert(row[col]);
    if (distinct.size() != 2) {
        throw InputError(path.string() + ": column '" + table.header[col] + "' has " +
                         std::to_string(distinct.size()) + " distinct values; expected exactly 2");
    }
    return {*distinct.begin(), *std::next(distinct.begin())};
}

int binary_index(const std::array<std::string, 2>& values, const std::string& raw, std::size_t row,
                 const std::string& column) {
    if (raw == values[0]) return 0;
    if (raw == values[1]) return 1;
    throw InputError(cell_ref(row, column) + ": value '" + raw + "' is not one of '" + values[0] +
                     "', '" + values[1] + "'");
}

}  // namespace

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    const csv::Table table = csv::read(path);
    const std::size_t label_col = column_index(table, options.label_col, path);
    const std::size_t sensitive_col = column_index(table, options.sensitive_col, path);

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (table.rows[r][c].empty()) {
                throw InputError(path.string() + " " + cell_ref(r, table.header[c]) + ": missing value");
            }
        }
    }

    Encoding enc;
    enc.label_name = options.label_col;
    enc.sensitive_name = options.sensitive_col;
    if (options.reference) {
        enc.label_values = options.reference->label_values;
        enc.sensitive_values = options.reference->sensitive_values;
        enc.features = options.reference->features;
    } else {
        enc.label_values = binary_values(table, label_col, path);
        enc.sensitive_values = binary_values(table, sensitive_col, path);
        std::vector<std::string> names;
        if (options.feature_cols) {
            names = *options.feature_cols;
        } else {
            for (std::size_t c = 0; c < table.header.size(); ++c) {
                if (c != label_col && c != sensitive_col) names.push_back(table.header[c]);
            }
        }
        for (const auto& name : names) {
            const std::size_t c = column_index(table, name, path);
            FeatureColumn f;
            f.name = name;
            double probe = 0.0;
            f.categorical = !table.rows.empty() && !csv::parse_double(table.rows.front()[c], probe);
            if (f.categorical) {
                std::set<std::string> distinct;
                for (const auto& row : table.rows) distinct.insert(row[c]);
                f.categories.assign(distinct.begin(), distinct.end());
            }
            enc.features.push_back(std::move(f));
        }
    }
    if (enc.features.empty()) throw InputError(path.string() + ": no feature columns selected");

    std::vector<std::size_t> feature_cols;
    for (const auto& f : enc.features) feature_cols.push_back(column_index(table, f.name, path));

    std::vector<LabeledSample> samples;
    samples.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        LabeledSample sample;
        sample.y = binary_index(enc.label_values, row[label_col], r, options.label_col);
        sample.s = binary_index(enc.sensitive_values, row[sensitive_col], r, options.sensitive_col);
        sample.x.reserve(enc.feature_dim());
        for (std::size_t k = 0; k < enc.features.size(); ++k) {
            const FeatureColumn& f = enc.features[k];
            const std::string& cell = row[feature_cols[k]];
            if (!f.categorical) {
                double value = 0.0;
                if (!csv::parse_double(cell, value)) {
                    throw InputError(path.string() + " " + cell_ref(r, f.name) + ": cannot parse '" +
                                     cell + "' as a number");
                }
                sample.x.push_back(value);
                continue;
            }
            const auto it = std::find(f.categories.begin(), f.categories.end(), cell);
            if (it == f.categories.end()) {
                throw InputError(path.string() + " " + cell_ref(r, f.name) + ": unknown category '" +
                                 cell + "'");
            }
            for (const auto& c : f.categories) sample.x.push_back(c == cell ? 1.0 : 0.0);
        }
        samples.push_back(std::move(sample));
    }
    return LabeledDataset(std::move(samples), std::move(enc));
}

void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
    const Encoding& enc = dataset.encoding();
    csv::Table table;
    for (const auto& f : enc.features) table.header.push_back(f.name);
    auto has_column = [&](const std::string& name) {
        return std::find(table.header.begin(), table.header.end(), name) != table.header.end();
    };
    const bool label_is_feature = has_column(enc.label_name);
    if (!label_is_feature) table.header.push_back(enc.label_name);
    const bool sensitive_written = has_column(enc.sensitive_name);
    if (!sensitive_written) table.header.push_back(enc.sensitive_name);

    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const LabeledSample& s = dataset[r];
        std::vector<std::string> row;
        std::size_t offset = 0;
        for (const auto& f : enc.features) {
            // A shared column is written with its label/sensitive raw value, which
            // parses back to the same feature value it was derived from.
            if (f.name == enc.label_name) {
                row.push_back(enc.label_values[s.y]);
            } else if (f.name == enc.sensitive_name) {
                row.push_back(enc.sensitive_values[s.s]);
            } else if (!f.categorical) {
                row.push_back(csv::format_double(s.x[offset]));
            } else {
                std::size_t hot = f.categories.size();
                for (std::size_t c = 0; c < f.categories.size(); ++c) {
                    if (s.x[offset + c] == 1.0) hot = c;
                }
                if (hot == f.categories.size()) {
                    throw InputError("sample " + std::to_string(r) + ": one-hot column '" + f.name +
                                     "' has no active category");
                }
                row.push_back(f.categories[hot]);
            }
            offset += f.width();
        }
        if (!label_is_feature) row.push_back(enc.label_values[s.y]);
        if (!sensitive_written) row.push_back(enc.sensitive_values[s.s]);
        table.rows.push_back(std::move(row));
    }
    csv::write(table, path);
}

Matrix feature_matrix(const LabeledDataset& dataset) {
    Matrix m(dataset.size(), dataset.feature_dim());
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        std::copy(dataset[r].x.begin(), dataset[r].x.end(), m.row(r).begin());
    }
    return m;
}

LabeledDataset annotate_predictions(const LabeledDataset& dataset, const Model& model) {
    if (dataset.feature_dim() != model.input_dim()) {
        throw InputError("dataset has " + std::to_string(dataset.feature_dim()) +
                         " features, model expects " + std::to_string(model.input_dim()));
    }
    if (model.num_classes() != 2) {
        throw InputError("binary datasets need a 2-class model, got " +
                         std::to_string(model.num_classes()) + " classes");
    }
    std::vector<int> y_hat(dataset.size());
    kernels::predict_rows(model.layers(), 0, feature_matrix(dataset), y_hat,
                          kernels::Execution::parallel);
    return dataset.with_predictions(y_hat);
}

}  // namespace fairfix
