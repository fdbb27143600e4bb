#include "snrbench/symfunc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "snrbench/error.hpp"
#include "snrbench/rng.hpp"
#include "snrbench/symfunc/symbolic.hpp"

namespace snrbench {

namespace {

// Variance 0.33, per the released dataset description.
constexpr double kClippedNormalStd = 0.574456264653803;  // sqrt(0.33)

bool same_noise(const std::optional<NoiseSpec>& a, const std::optional<NoiseSpec>& b) {
    if (a.has_value() != b.has_value()) {
        return false;
    }
    if (!a) {
        return true;
    }
    return a->n_noise == b->n_noise && a->feature_dist == b->feature_dist &&
           a->label_noise_std == b->label_noise_std && a->seed == b->seed;
}

}  // namespace

std::vector<std::size_t> TabularDataset::rows_in(Split which) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < split.size(); ++r) {
        if (split[r] == which) {
            out.push_back(r);
        }
    }
    return out;
}

bool TabularDataset::operator==(const TabularDataset& other) const {
    return features.rows() == other.features.rows() && features.cols() == other.features.cols() &&
           features == other.features && targets == other.targets &&
           predictive_indices == other.predictive_indices && split == other.split &&
           feature_names == other.feature_names && task == other.task && function_id == other.function_id &&
           same_noise(noise, other.noise) && split_ratio == other.split_ratio;
}

std::string_view to_string(FeatureDist dist) {
    return dist == FeatureDist::std_normal ? "std_normal" : "clipped_normal";
}

FeatureDist feature_dist_from_string(std::string_view text) {
    if (text == "std_normal") return FeatureDist::std_normal;
    if (text == "clipped_normal") return FeatureDist::clipped_normal;
    fail(ErrorCode::parameter, "unknown feature distribution '" + std::string(text) + "'");
}

std::string_view to_string(Task task) {
    return task == Task::regression ? "regression" : "classification";
}

Task task_from_string(std::string_view text) {
    if (text == "regression") return Task::regression;
    if (text == "classification") return Task::classification;
    fail(ErrorCode::parameter, "unknown task '" + std::string(text) + "'");
}

std::vector<Split> assign_split(std::size_t n_rows, double train_ratio, std::uint64_t seed) {
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
        fail(ErrorCode::parameter, "split ratio must lie in (0, 1)");
    }
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_train = static_cast<std::size_t>(std::llround(train_ratio * static_cast<double>(n_rows)));
    std::vector<Split> split(n_rows, Split::validation);
    for (std::size_t i = 0; i < n_train; ++i) {
        split[order[i]] = Split::train;
    }
    return split;
}

TabularDataset select_columns(const TabularDataset& data, std::span<const std::size_t> columns) {
    TabularDataset out;
    out.features.resize(data.features.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] >= data.cols()) {
            fail(ErrorCode::index, "column " + std::to_string(columns[j]) + " out of range");
        }
        out.features.col(static_cast<Eigen::Index>(j)) = data.features.col(static_cast<Eigen::Index>(columns[j]));
        if (!data.feature_names.empty()) {
            out.feature_names.push_back(data.feature_names[columns[j]]);
        }
        if (std::find(data.predictive_indices.begin(), data.predictive_indices.end(), columns[j]) !=
            data.predictive_indices.end()) {
            out.predictive_indices.push_back(j);
        }
    }
    out.targets = data.targets;
    out.split = data.split;
    out.task = data.task;
    out.function_id = data.function_id;
    out.noise = data.noise;
    out.split_ratio = data.split_ratio;
    return out;
}

Eigen::MatrixXd gather_columns(const TabularDataset& data, std::span<const std::size_t> rows) {
    Eigen::MatrixXd out(data.features.cols(), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = data.features.row(static_cast<Eigen::Index>(rows[j])).transpose();
    }
    return out;
}

TabularDataset generate_dataset(int function_id, const NoiseSpec& noise, std::size_t n_samples,
                                double split_ratio) {
    const std::size_t m = symfunc::arity(function_id);
    if (n_samples < 1) {
        fail(ErrorCode::parameter, "n_samples must be at least 1");
    }
    if (!(noise.label_noise_std >= 0.0)) {
        fail(ErrorCode::parameter, "label_noise_std must be nonnegative");
    }
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        fail(ErrorCode::parameter, "split ratio must lie in (0, 1)");
    }

    const std::size_t n = m + noise.n_noise;
    TabularDataset data;
    data.features.resize(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(n));
    data.targets.resize(n_samples);
    data.predictive_indices.resize(m);
    std::iota(data.predictive_indices.begin(), data.predictive_indices.end(), std::size_t{0});
    data.task = Task::regression;
    data.function_id = function_id;
    data.noise = noise;
    data.split_ratio = split_ratio;

    Rng rng(noise.seed);
    std::normal_distribution<double> standard(0.0, 1.0);
    const bool clipped = noise.feature_dist == FeatureDist::clipped_normal;
    for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
            double v = standard(rng);
            if (clipped) {
                v = std::clamp(v * kClippedNormalStd, -1.0, 1.0);
            }
            data.features(r, c) = v;
        }
    }

    std::normal_distribution<double> label_noise(0.0, 1.0);
    for (std::size_t r = 0; r < n_samples; ++r) {
        const auto row = data.features.row(static_cast<Eigen::Index>(r));
        const std::span<const double> predictive(row.data(), m);
        double y = symfunc::eval_function(function_id, predictive);
        if (!std::isfinite(y)) {
            fail(ErrorCode::domain, "function " + std::to_string(function_id) + " is not finite at row " +
                                        std::to_string(r) + "; use clipped_normal features");
        }
        if (noise.label_noise_std > 0.0) {
            y += noise.label_noise_std * label_noise(rng);
        }
        data.targets[r] = y;
    }

    data.split = assign_split(n_samples, split_ratio, derive_seed(noise.seed, "split"));
    return data;
}

}  // namespace snrbench
