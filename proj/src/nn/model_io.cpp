#include <fstream>

#include "fairfix/error.hpp"
#include "fairfix/model.hpp"

namespace fairfix {

using nlohmann::json;

json model_to_json(const Model& model) {
    json doc = json::object();
    doc["input_dim"] = model.input_dim();
    json layers = json::array();
    for (const DenseLayer& layer : model.layers()) {
        json entry = json::object();
        entry["in"] = layer.in_dim;
        entry["out"] = layer.out_dim;
        entry["activation"] = std::string(to_string(layer.activation));
        entry["weights"] = layer.weights;
        entry["biases"] = layer.biases;
        layers.push_back(std::move(entry));
    }
    doc["layers"] = std::move(layers);
    return doc;
}

namespace {

std::vector<double> number_array(const json& node, const char* what, std::size_t layer) {
    if (!node.is_array()) {
        throw InputError("layer " + std::to_string(layer) + ": '" + what + "' must be an array");
    }
    std::vector<double> values;
    values.reserve(node.size());
    for (const json& v : node) {
        if (!v.is_number()) {
            throw InputError("layer " + std::to_string(layer) + ": '" + what + "' has a non-numeric entry");
        }
        values.push_back(v.get<double>());
    }
    return values;
}

}  // namespace

Model model_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("input_dim") || !doc.contains("layers")) {
        throw InputError("model document needs 'input_dim' and 'layers'");
    }
    if (!doc["input_dim"].is_number_unsigned()) throw InputError("'input_dim' must be a positive integer");
    std::vector<DenseLayer> layers;
    std::size_t index = 0;
    for (const json& entry : doc["layers"]) {
        for (const char* key : {"in", "out", "activation", "weights", "biases"}) {
            if (!entry.contains(key)) {
                throw InputError("layer " + std::to_string(index) + ": missing '" + key + "'");
            }
        }
        DenseLayer layer;
        layer.in_dim = entry["in"].get<std::size_t>();
        layer.out_dim = entry["out"].get<std::size_t>();
        layer.activation = parse_activation(entry["activation"].get<std::string>());
        layer.weights = number_array(entry["weights"], "weights", index);
        layer.biases = number_array(entry["biases"], "biases", index);
        layers.push_back(std::move(layer));
        ++index;
    }
    return Model(doc["input_dim"].get<std::size_t>(), std::move(layers));
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("model file " + path.string() + " is not valid JSON: " + e.what());
    }
    return model_from_json(doc);
}

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model file " + path.string());
    out << model_to_json(model).dump(1) << '\n';
}

}  // namespace fairfix
