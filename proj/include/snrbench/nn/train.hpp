#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snrbench/nn/mlp.hpp"
#include "snrbench/symfunc/dataset.hpp"

namespace snrbench::nn {

enum class Optimizer { sgd, adam };

struct TrainConfig {
    Optimizer optimizer = Optimizer::adam;
    double learning_rate = 1e-3;
    std::size_t epochs = 1000;
    std::size_t batch_size = 128;
    Loss loss = Loss::mse;
    std::uint64_t seed = 0;
    // When set, the epoch probe runs after every epoch e with (e + 1) % stride == 0.
    std::optional<std::size_t> record_attribution_every;
};

struct TrainReport {
    std::vector<double> per_epoch_loss;
    std::vector<std::size_t> recorded_epochs;                    // 1-based epoch numbers
    std::map<std::string, std::vector<double>> per_epoch_fprec;  // method -> value per recorded epoch
    double wall_time_s = 0.0;
    std::size_t peak_bytes = 0;  // estimate: parameters, optimizer state, one batch of activations
};

/// Called on recorded epochs with the current parameters; returns named
/// scores (typically FPrec per attribution method).
using EpochProbe = std::function<std::map<std::string, double>(const MlpModel&)>;

std::string_view to_string(Optimizer optimizer);
Optimizer optimizer_from_string(std::string_view text);
std::string_view to_string(Loss loss);
Loss loss_from_string(std::string_view text);

void validate(const TrainConfig& cfg);

/// Minibatch training on the train split of `data`. Shuffling and dropout
/// masks come only from cfg.seed. The model's mode is restored on return.
TrainReport train(MlpModel& model, const TabularDataset& data, const TrainConfig& cfg,
                  const EpochProbe& probe = {});

}  // namespace snrbench::nn
