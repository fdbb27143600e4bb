#include "snrbench/nn/checkpoint.hpp"

#include <fstream>
#include <string>

#include "snrbench/error.hpp"

namespace snrbench::nn {

nlohmann::json checkpoint_to_json(const MlpModel& model) {
    validate(model);
    nlohmann::json doc;
    doc["format_version"] = kCheckpointFormatVersion;
    doc["layer_widths"] = model.layer_widths;
    doc["dropout_rate"] = model.dropout_rate;
    auto weights = nlohmann::json::array();
    auto biases = nlohmann::json::array();
    for (const auto& layer : model.layers) {
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(layer.weights.size()));
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                flat.push_back(layer.weights(r, c));
            }
        }
        weights.push_back(std::move(flat));
        biases.push_back(std::vector<double>(layer.biases.data(), layer.biases.data() + layer.biases.size()));
    }
    doc["weights"] = std::move(weights);
    doc["biases"] = std::move(biases);
    return doc;
}

MlpModel checkpoint_from_json(const nlohmann::json& doc) {
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kCheckpointFormatVersion) {
            fail(ErrorCode::version_mismatch, "checkpoint format_version " + std::to_string(version) +
                                                  " is not supported (expected " +
                                                  std::to_string(kCheckpointFormatVersion) + ")");
        }
        MlpModel model;
        model.layer_widths = doc.at("layer_widths").get<std::vector<std::size_t>>();
        model.dropout_rate = doc.at("dropout_rate").get<double>();
        model.mode = Mode::eval;
        const auto& weights = doc.at("weights");
        const auto& biases = doc.at("biases");
        if (model.layer_widths.size() < 2 || weights.size() + 1 != model.layer_widths.size() ||
            biases.size() != weights.size()) {
            fail(ErrorCode::schema_mismatch, "checkpoint layer count does not match layer_widths");
        }
        for (std::size_t l = 0; l < weights.size(); ++l) {
            const auto in = static_cast<Eigen::Index>(model.layer_widths[l]);
            const auto out = static_cast<Eigen::Index>(model.layer_widths[l + 1]);
            const auto flat = weights[l].get<std::vector<double>>();
            const auto bias = biases[l].get<std::vector<double>>();
            if (flat.size() != static_cast<std::size_t>(in * out) || bias.size() != static_cast<std::size_t>(out)) {
                fail(ErrorCode::schema_mismatch, "checkpoint layer " + std::to_string(l) + " has the wrong size");
            }
            DenseLayer layer;
            layer.weights.resize(out, in);
            for (Eigen::Index r = 0; r < out; ++r) {
                for (Eigen::Index c = 0; c < in; ++c) {
                    layer.weights(r, c) = flat[static_cast<std::size_t>(r * in + c)];
                }
            }
            layer.biases = Eigen::Map<const Vector>(bias.data(), out);
            model.layers.push_back(std::move(layer));
        }
        validate(model);
        return model;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::schema_mismatch, std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const MlpModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::io, "cannot write " + path.string());
    }
    out << checkpoint_to_json(model).dump(1) << '\n';
}

MlpModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::io, "cannot read " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, path.string() + ": " + e.what());
    }
    return checkpoint_from_json(doc);
}

}  // namespace snrbench::nn
