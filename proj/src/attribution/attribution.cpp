#include "snrbench/attribution/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "snrbench/error.hpp"

namespace snrbench::attribution {

using nn::Matrix;

namespace {

Eigen::VectorXd to_vector(std::span<const double> x) {
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

void check_width(std::size_t expected, std::size_t got) {
    if (expected != got) {
        fail(ErrorCode::shape, "input has " + std::to_string(got) + " features, expected " +
                                   std::to_string(expected));
    }
}

void check_steps(int steps) {
    if (steps < 1) {
        fail(ErrorCode::parameter, "integrated gradients needs at least one step");
    }
}

// Resolves groups into the list of index sets that get ablated together.
// Uncovered indices become singletons, in index order after the groups.
std::vector<std::vector<std::size_t>> ablation_sets(std::size_t n, std::span<const FeatureGroup> groups) {
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::size_t>> sets;
    for (const auto& group : groups) {
        for (std::size_t i : group.indices) {
            if (i >= n) {
                fail(ErrorCode::invalid_group, "group '" + group.name + "' has index " + std::to_string(i) +
                                                   " outside [0, " + std::to_string(n) + ")");
            }
            if (seen[i]) {
                fail(ErrorCode::invalid_group, "feature " + std::to_string(i) + " appears in more than one group");
            }
            seen[i] = true;
        }
        sets.push_back(group.indices);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen[i]) {
            sets.push_back({i});
        }
    }
    return sets;
}

template <typename Evaluate>
std::vector<double> ablate(std::span<const double> x, std::span<const FeatureGroup> groups, Evaluate&& evaluate) {
    const std::size_t n = x.size();
    const auto sets = ablation_sets(n, groups);
    Matrix batch(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(sets.size() + 1));
    for (Eigen::Index c = 0; c < batch.cols(); ++c) {
        batch.col(c) = to_vector(x);
    }
    for (std::size_t s = 0; s < sets.size(); ++s) {
        for (std::size_t i : sets[s]) {
            batch(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s + 1)) = 0.0;
        }
    }
    const Eigen::VectorXd values = evaluate(batch);
    std::vector<double> out(n, 0.0);
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const double delta = values(0) - values(static_cast<Eigen::Index>(s + 1));
        for (std::size_t i : sets[s]) {
            out[i] = delta;
        }
    }
    return out;
}

Matrix ig_path(std::span<const double> x, int steps) {
    Matrix path(static_cast<Eigen::Index>(x.size()), steps);
    const Eigen::VectorXd v = to_vector(x);
    for (int s = 1; s <= steps; ++s) {
        path.col(s - 1) = ((static_cast<double>(s) - 0.5) / steps) * v;
    }
    return path;
}

// Multiplier-form DeepLift over a batch (one sample per column).
Matrix deeplift_batch(const nn::MlpModel& model, const Matrix& inputs, std::size_t target) {
    nn::validate(model);
    if (target >= model.output_width()) {
        fail(ErrorCode::index, "target index out of range");
    }
    nn::ForwardCache actual;
    nn::ForwardCache reference;
    nn::forward_batch(model, inputs, nn::Mode::eval, nullptr, &actual);
    nn::forward_batch(model, Matrix::Zero(inputs.rows(), 1), nn::Mode::eval, nullptr, &reference);

    Matrix multipliers = Matrix::Zero(static_cast<Eigen::Index>(model.output_width()), inputs.cols());
    multipliers.row(static_cast<Eigen::Index>(target)).setOnes();
    for (std::size_t l = model.layers.size(); l-- > 0;) {
        Matrix upstream = model.layers[l].weights.transpose() * multipliers;
        if (l == 0) {
            return upstream.cwiseProduct(inputs);
        }
        const Matrix& z = actual.preactivations[l - 1];
        const Matrix& a = actual.activations[l];
        const Eigen::VectorXd z_ref = reference.preactivations[l - 1].col(0);
        const Eigen::VectorXd a_ref = reference.activations[l].col(0);
        for (Eigen::Index c = 0; c < upstream.cols(); ++c) {
            for (Eigen::Index r = 0; r < upstream.rows(); ++r) {
                const double dz = z(r, c) - z_ref(r);
                const double ratio =
                    std::abs(dz) >= kDeepLiftEpsilon ? (a(r, c) - a_ref(r)) / dz : (z(r, c) > 0.0 ? 1.0 : 0.0);
                upstream(r, c) *= ratio;
            }
        }
        multipliers = std::move(upstream);
    }
    return multipliers;  // unreachable: the loop returns at l == 0
}

AttributionVector make(std::vector<double> values, Method method, std::size_t target) {
    AttributionVector out;
    out.values = std::move(values);
    out.method = method;
    out.target_index = target;
    return out;
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::sa: return "sa";
        case Method::ig: return "ig";
        case Method::dl: return "dl";
        case Method::fa: return "fa";
    }
    return "?";
}

Method method_from_string(std::string_view text) {
    for (Method m : kAllMethods) {
        if (to_string(m) == text) {
            return m;
        }
    }
    fail(ErrorCode::parameter, "unknown attribution method '" + std::string(text) + "'");
}

AttributionVector saliency(const ScalarFunction& f, std::span<const double> x) {
    check_width(f.input_width(), x.size());
    return make(f.gradient(x), Method::sa, 0);
}

AttributionVector saliency(const nn::MlpModel& model, std::span<const double> x, std::size_t target) {
    return make(nn::input_gradient(model, x, target), Method::sa, target);
}

AttributionVector integrated_gradients(const ScalarFunction& f, std::span<const double> x, int steps) {
    check_steps(steps);
    check_width(f.input_width(), x.size());
    const Matrix path = ig_path(x, steps);
    std::vector<double> sum(x.size(), 0.0);
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXd point = path.col(s);
        const std::vector<double> g = f.gradient(std::span<const double>(point.data(), x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) {
            sum[i] += g[i];
        }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum[i] = x[i] * (sum[i] / steps);
    }
    return make(std::move(sum), Method::ig, 0);
}

AttributionVector integrated_gradients(const nn::MlpModel& model, std::span<const double> x, int steps,
                                       std::size_t target) {
    check_steps(steps);
    check_width(model.input_width(), x.size());
    const Matrix grads = nn::input_gradient_batch(model, ig_path(x, steps), target);
    const Eigen::VectorXd mean = grads.rowwise().sum() / static_cast<double>(steps);
    return make(to_std(mean.cwiseProduct(to_vector(x))), Method::ig, target);
}

AttributionVector deeplift_rescale(const nn::MlpModel& model, std::span<const double> x, std::size_t target) {
    check_width(model.input_width(), x.size());
    const Matrix out = deeplift_batch(model, to_vector(x), target);
    return make(to_std(out.col(0)), Method::dl, target);
}

AttributionVector feature_ablation(const ScalarFunction& f, std::span<const double> x,
                                   std::span<const FeatureGroup> groups) {
    check_width(f.input_width(), x.size());
    auto values = ablate(x, groups, [&](const Matrix& batch) {
        Eigen::VectorXd v(batch.cols());
        for (Eigen::Index c = 0; c < batch.cols(); ++c) {
            const Eigen::VectorXd column = batch.col(c);
            v(c) = f.value(std::span<const double>(column.data(), x.size()));
        }
        return v;
    });
    return make(std::move(values), Method::fa, 0);
}

AttributionVector feature_ablation(const nn::MlpModel& model, std::span<const double> x,
                                   std::span<const FeatureGroup> groups, std::size_t target) {
    check_width(model.input_width(), x.size());
    if (target >= model.output_width()) {
        fail(ErrorCode::index, "target index out of range");
    }
    auto values = ablate(x, groups, [&](const Matrix& batch) {
        return Eigen::VectorXd(nn::predict_batch(model, batch).row(static_cast<Eigen::Index>(target)).transpose());
    });
    return make(std::move(values), Method::fa, target);
}

std::vector<double> aggregate_group_importance(const AttributionVector& attrib, std::span<const FeatureGroup> groups) {
    const std::size_t n = attrib.values.size();
    if (groups.empty()) {
        fail(ErrorCode::invalid_group, "no groups given");
    }
    std::vector<int> hits(n, 0);
    for (const auto& group : groups) {
        for (std::size_t i : group.indices) {
            if (i >= n) {
                fail(ErrorCode::invalid_group, "group '" + group.name + "' has out-of-range index " +
                                                   std::to_string(i));
            }
            ++hits[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (hits[i] != 1) {
            fail(ErrorCode::invalid_group, "groups do not partition the features (index " + std::to_string(i) +
                                               " covered " + std::to_string(hits[i]) + " times)");
        }
    }

    std::vector<double> mass(groups.size(), 0.0);
    double total = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i : groups[g].indices) {
            mass[g] += std::abs(attrib.values[i]);
        }
        total += mass[g];
    }
    if (total <= 0.0) {
        return std::vector<double>(groups.size(), 1.0 / static_cast<double>(groups.size()));
    }
    for (double& m : mass) {
        m /= total;
    }
    return mass;
}

std::vector<std::size_t> topk_features(std::span<const double> values, std::size_t k) {
    if (k < 1 || k > values.size()) {
        fail(ErrorCode::parameter, "k=" + std::to_string(k) + " must lie in [1, " + std::to_string(values.size()) +
                                       "]");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double ma = std::abs(values[a]);
                          const double mb = std::abs(values[b]);
                          return ma != mb ? ma > mb : a < b;
                      });
    order.resize(k);
    return order;
}

std::vector<std::size_t> topk_features(const AttributionVector& attrib, std::size_t k) {
    return topk_features(attrib.values, k);
}

std::vector<AttributionVector> attribute_batch(const nn::MlpModel& model, const Eigen::MatrixXd& inputs,
                                               Method method, std::size_t target, int ig_steps) {
    check_width(model.input_width(), static_cast<std::size_t>(inputs.rows()));
    std::vector<AttributionVector> out;
    out.reserve(static_cast<std::size_t>(inputs.cols()));
    if (method == Method::sa || method == Method::dl) {
        const Matrix values = method == Method::sa ? nn::input_gradient_batch(model, inputs, target)
                                                   : deeplift_batch(model, inputs, target);
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            out.push_back(make(to_std(values.col(c)), method, target));
        }
        return out;
    }
    for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
        const Eigen::VectorXd column = inputs.col(c);
        out.push_back(attribute(model, std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
                                method, target, ig_steps));
    }
    return out;
}

AttributionVector attribute(const nn::MlpModel& model, std::span<const double> x, Method method, std::size_t target,
                            int ig_steps) {
    switch (method) {
        case Method::sa: return saliency(model, x, target);
        case Method::ig: return integrated_gradients(model, x, ig_steps, target);
        case Method::dl: return deeplift_rescale(model, x, target);
        case Method::fa: return feature_ablation(model, x, {}, target);
    }
    fail(ErrorCode::parameter, "unknown attribution method");
}

}  // namespace snrbench::attribution
