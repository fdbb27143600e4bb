#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "snrbench/attribution/attribution.hpp"
#include "snrbench/nn/train.hpp"
#include "snrbench/symfunc/dataset.hpp"

namespace snrbench::bench {

inline constexpr int kResultsSchemaVersion = 1;

/// Sweep definition over (model x attribution x noise condition). Every
/// field has a JSON key of the same name; the resolved config, defaults
/// included, is written next to the results.
struct GridConfig {
    std::vector<int> function_ids{2};
    std::vector<NoiseSpec> noise_specs{NoiseSpec{100, FeatureDist::clipped_normal, 0.01, 0}};
    std::vector<std::size_t> n_samples{10000};
    double split_ratio = 0.8;
    std::vector<std::size_t> widths{100};
    std::vector<std::size_t> depths{3};
    std::vector<double> learning_rates{1e-3};
    std::vector<double> dropout_rates{0.0};
    std::vector<nn::Optimizer> optimizers{nn::Optimizer::adam};
    std::size_t epochs = 1000;
    std::size_t batch_size = 128;
    std::vector<attribution::Method> attribution_methods{attribution::Method::sa, attribution::Method::ig,
                                                         attribution::Method::dl, attribution::Method::fa};
    std::vector<std::string> metrics{"uscore", "fprec"};
    int ig_steps = attribution::kDefaultIgSteps;
    std::size_t attribution_samples = 0;  // validation rows attributed per cell; 0 = all
    std::optional<std::size_t> record_every;  // epoch stride of the FPrec curve
    std::size_t curve_samples = 100;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    std::filesystem::path output_dir = "results";
    std::size_t workers = 1;
};

/// Known metric names for GridConfig::metrics.
inline const std::vector<std::string> kGridMetrics{"uscore", "mae", "fprec", "consistency", "convergence_auc"};

/// Parses and validates a grid config; errors carry ErrorCode::config and
/// name the offending field.
GridConfig grid_config_from_json(const nlohmann::json& doc);
nlohmann::json grid_config_to_json(const GridConfig& cfg);
GridConfig load_grid_config(const std::filesystem::path& path);
void validate(const GridConfig& cfg);

/// Number of (model cell x attribution method x seed) executions.
std::size_t grid_size(const GridConfig& cfg);

/// One row of the long-form results file.
struct ResultRow {
    std::string cell_key;
    std::vector<std::string> tags;  // sweep-axis values in column order
    std::uint64_t seed = 0;
    std::string method;             // "-" for model-level metrics
    std::string metric;
    double value = 0.0;
    std::string status = "ok";
    std::string message;
    double wall_time_s = 0.0;       // written to timings.csv, not results.csv
};

struct RunOptions {
    // Test hook: visit jobs in a seeded random order. Output is unaffected.
    std::optional<std::uint64_t> execution_order_seed;
    bool quiet = false;
};

/// Runs every cell and seed, then writes results.csv, timings.csv,
/// summary.csv and resolved_config.json into cfg.output_dir.
/// Returns the path of results.csv.
std::filesystem::path run_grid(const GridConfig& cfg, const RunOptions& options = {});

/// Columns of results.csv, in order.
const std::vector<std::string>& result_columns();

}  // namespace snrbench::bench
