#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace snrbench {

/// Row-major so that one row is one contiguous sample.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class FeatureDist {
    std_normal,      // N(0, 1)
    clipped_normal,  // N(0, 0.33) clipped to [-1, 1]
};

enum class Split : std::uint8_t { train, validation };

enum class Task { regression, classification };

struct NoiseSpec {
    std::size_t n_noise = 0;
    FeatureDist feature_dist = FeatureDist::clipped_normal;
    double label_noise_std = 0.0;
    std::uint64_t seed = 0;
};

struct TabularDataset {
    FeatureMatrix features;
    std::vector<double> targets;
    std::vector<std::size_t> predictive_indices;
    std::vector<Split> split;
    std::vector<std::string> feature_names;
    Task task = Task::regression;

    // Provenance; present for synthesized data.
    std::optional<int> function_id;
    std::optional<NoiseSpec> noise;
    double split_ratio = 0.8;

    std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }

    std::vector<std::size_t> rows_in(Split which) const;
    std::vector<std::size_t> train_rows() const { return rows_in(Split::train); }
    std::vector<std::size_t> validation_rows() const { return rows_in(Split::validation); }

    bool operator==(const TabularDataset& other) const;
};

std::string_view to_string(FeatureDist dist);
FeatureDist feature_dist_from_string(std::string_view text);
std::string_view to_string(Task task);
Task task_from_string(std::string_view text);

/// Tags round(ratio * n) rows as train and the rest as validation, choosing
/// rows by a seeded permutation.
std::vector<Split> assign_split(std::size_t n_rows, double train_ratio, std::uint64_t seed);

/// Copies the given columns (in the given order). Predictive indices are
/// remapped; ones that fall out of the selection are dropped.
TabularDataset select_columns(const TabularDataset& data, std::span<const std::size_t> columns);

/// Gathers rows into a (cols x rows.size()) matrix, one sample per column.
Eigen::MatrixXd gather_columns(const TabularDataset& data, std::span<const std::size_t> rows);

/// Synthesizes a regression dataset from symbolic function `function_id`.
/// Predictive features occupy columns 0..m-1, noise features follow.
TabularDataset generate_dataset(int function_id, const NoiseSpec& noise, std::size_t n_samples,
                                double split_ratio);

}  // namespace snrbench
