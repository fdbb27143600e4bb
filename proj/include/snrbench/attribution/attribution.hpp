#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snrbench/differentiable.hpp"
#include "snrbench/nn/mlp.hpp"

namespace snrbench::attribution {

enum class Method { sa, ig, dl, fa };

inline constexpr Method kAllMethods[] = {Method::sa, Method::ig, Method::dl, Method::fa};
inline constexpr int kDefaultIgSteps = 10;

std::string_view to_string(Method method);
Method method_from_string(std::string_view text);

/// Per-feature importance for one instance. The baseline is always the
/// all-zeros input.
struct AttributionVector {
    std::vector<double> values;
    Method method = Method::sa;
    std::size_t target_index = 0;
    std::string baseline_id = "zeros";
};

struct FeatureGroup {
    std::string name;
    std::vector<std::size_t> indices;
};

// Saliency: the raw signed input gradient.
AttributionVector saliency(const ScalarFunction& f, std::span<const double> x);
AttributionVector saliency(const nn::MlpModel& model, std::span<const double> x, std::size_t target);

/// Integrated gradients from the zero baseline with the midpoint rule:
/// a_i = x_i * mean_s dF/dx_i((s - 0.5)/S * x), s = 1..S.
AttributionVector integrated_gradients(const ScalarFunction& f, std::span<const double> x,
                                       int steps = kDefaultIgSteps);
AttributionVector integrated_gradients(const nn::MlpModel& model, std::span<const double> x, int steps,
                                       std::size_t target);

/// DeepLift with the rescale rule against the zero baseline. Linear layers
/// pass multipliers through W^T; each ReLU scales by da/dz computed from the
/// input and baseline passes, falling back to the local gradient when
/// |dz| < kDeepLiftEpsilon. Sums to F(x) - F(0).
inline constexpr double kDeepLiftEpsilon = 1e-7;
AttributionVector deeplift_rescale(const nn::MlpModel& model, std::span<const double> x, std::size_t target);

/// Feature ablation against the zero baseline. With groups, each group is
/// zeroed as a whole and all its members receive the group delta; indices
/// outside every group are ablated on their own. Groups must be disjoint.
AttributionVector feature_ablation(const ScalarFunction& f, std::span<const double> x,
                                   std::span<const FeatureGroup> groups = {});
AttributionVector feature_ablation(const nn::MlpModel& model, std::span<const double> x,
                                   std::span<const FeatureGroup> groups, std::size_t target);

/// Share of absolute attribution mass per group; the groups must partition
/// the attribution indices. An all-zero attribution scores 1/C per group.
std::vector<double> aggregate_group_importance(const AttributionVector& attrib,
                                               std::span<const FeatureGroup> groups);

/// Indices of the k largest |a_i| in descending order, ties to the lower index.
std::vector<std::size_t> topk_features(std::span<const double> values, std::size_t k);
std::vector<std::size_t> topk_features(const AttributionVector& attrib, std::size_t k);

/// Attributions for every column of `inputs` (n x B), batched where the
/// method allows it.
std::vector<AttributionVector> attribute_batch(const nn::MlpModel& model, const Eigen::MatrixXd& inputs,
                                               Method method, std::size_t target,
                                               int ig_steps = kDefaultIgSteps);

AttributionVector attribute(const nn::MlpModel& model, std::span<const double> x, Method method,
                            std::size_t target, int ig_steps = kDefaultIgSteps);

}  // namespace snrbench::attribution
