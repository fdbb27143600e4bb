#pragma once

#include <filesystem>

#include "snrbench/nn/mlp.hpp"
#include "json.hpp"

namespace snrbench::nn {

inline constexpr int kCheckpointFormatVersion = 1;

/// {"format_version", "layer_widths", "dropout_rate", "weights", "biases"};
/// each weight matrix is a flat row-major array (out x in).
nlohmann::json checkpoint_to_json(const MlpModel& model);
MlpModel checkpoint_from_json(const nlohmann::json& doc);

void save_checkpoint(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_checkpoint(const std::filesystem::path& path);

}  // namespace snrbench::nn
