#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "snrbench/attribution/attribution.hpp"
#include "snrbench/metrics/metrics.hpp"
#include "snrbench/nn/train.hpp"
#include "snrbench/symfunc/dataset.hpp"

namespace snrbench::rfe {

enum class Explainer { sa, ig, dl, fa, coef };
enum class Strategy { uni, bi };

std::string_view to_string(Explainer explainer);
Explainer explainer_from_string(std::string_view text);
std::string_view to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view text);

/// Hidden layer widths and dropout of the networks trained inside RFE.
struct NetworkSpec {
    std::vector<std::size_t> hidden_widths{100, 100, 100};
    double dropout_rate = 0.0;
};

struct RfeConfig {
    double drop_rate = 0.5;
    std::size_t target_k = 3;
    Explainer explainer = Explainer::sa;
    Strategy strategy = Strategy::uni;
    nn::TrainConfig inner_train;  // its seed is replaced by per-iteration seeds derived from `seed`
    NetworkSpec network;
    int ig_steps = attribution::kDefaultIgSteps;
    std::uint64_t seed = 0;
};

struct RfeIteration {
    std::vector<std::size_t> selected;  // original column indices, ascending
    std::vector<metrics::MetricRecord> validation_metrics;
    std::vector<double> importance;  // aligned with `selected`
};

struct RfeResult {
    std::vector<RfeIteration> iterations;
    std::vector<std::size_t> final_selected;
    std::vector<metrics::MetricRecord> final_model_metrics;
    double wall_time_s = 0.0;
};

struct FitResult {
    nn::MlpModel model;
    nn::TrainReport report;
    std::vector<metrics::MetricRecord> validation_metrics;
};

/// Number of features removed from a set of `current` features: ceil(dr * current),
/// clamped so that at least `target_k` remain.
std::size_t drop_count(std::size_t current, double drop_rate, std::size_t target_k);

/// Selected-set sizes visited by the elimination loop, from n down to target_k.
std::vector<std::size_t> elimination_schedule(std::size_t n, double drop_rate, std::size_t target_k);

/// Validation-split metrics: mae and uscore for regression, accuracy for
/// classification (sigmoid of the logit output).
std::vector<metrics::MetricRecord> validation_metrics(const nn::MlpModel& model, const TabularDataset& data,
                                                      nn::Loss loss);

/// Builds a fresh network (init seed = train.seed), trains it and scores it
/// on the validation split. Empty hidden_widths gives a linear model.
FitResult fit_and_evaluate(const TabularDataset& data, const NetworkSpec& network, const nn::TrainConfig& train);

/// Recursive feature elimination driven by a neural network and a post-hoc
/// attribution method. Importance is the mean |a_i| over validation rows.
RfeResult rfewna(const TabularDataset& data, const RfeConfig& cfg);

/// Classic RFE baseline: importance is |w_i| of a linear model trained with
/// the same loss. cfg.explainer must be coef.
RfeResult rfe_linear(const TabularDataset& data, const RfeConfig& cfg);

/// Trains a fresh network on the selected columns and returns its validation metrics.
std::vector<metrics::MetricRecord> bi_module_eval(std::span<const std::size_t> selected, const TabularDataset& data,
                                                  const nn::TrainConfig& inner_train,
                                                  const NetworkSpec& network = {});

/// {"iterations": [{size, selected, importance, metrics}], "final_selected", "final_metrics", "wall_time_s"}
nlohmann::json trajectory_json(const RfeResult& result);

}  // namespace snrbench::rfe
