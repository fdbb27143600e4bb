// Helpers shared by the unit tests and the acceptance binary: random
// networks and finite-difference oracles that only use forward passes.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "snrbench/nn/mlp.hpp"

namespace snrbench::testing {

inline double rel_err(double a, double b, double floor = 1e-6) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Random ReLU network with 1..max_depth hidden layers of width 1..max_width
// and nonzero biases, so the bias path is exercised too.
inline nn::MlpModel random_mlp(std::mt19937_64& rng, std::size_t max_width = 32, std::size_t max_depth = 3,
                               std::size_t outputs = 1) {
    std::uniform_int_distribution<std::size_t> width(1, max_width);
    std::uniform_int_distribution<std::size_t> depth(1, max_depth);
    std::vector<std::size_t> widths{std::uniform_int_distribution<std::size_t>(1, 12)(rng)};
    const std::size_t hidden = depth(rng);
    for (std::size_t h = 0; h < hidden; ++h) widths.push_back(width(rng));
    widths.push_back(outputs);
    auto model = nn::mlp_new(widths, 0.0, rng());
    std::uniform_real_distribution<double> bias(-0.3, 0.3);
    for (auto& layer : model.layers) {
        for (Eigen::Index i = 0; i < layer.biases.size(); ++i) layer.biases(i) = bias(rng);
    }
    model.mode = nn::Mode::eval;
    return model;
}

inline std::vector<double> random_input(std::mt19937_64& rng, std::size_t n, double bound = 1.0) {
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    return x;
}

inline nn::Matrix column(const std::vector<double>& x) {
    return Eigen::Map<const nn::Matrix>(x.data(), static_cast<Eigen::Index>(x.size()), 1);
}

// Smallest |preactivation| over the hidden layers at x.
inline double kink_margin(const nn::MlpModel& model, const std::vector<double>& x) {
    nn::ForwardCache cache;
    nn::forward_batch(model, column(x), nn::Mode::eval, nullptr, &cache);
    double margin = INFINITY;
    for (std::size_t l = 0; l + 1 < cache.preactivations.size(); ++l) {
        margin = std::min(margin, cache.preactivations[l].cwiseAbs().minCoeff());
    }
    return margin;
}

inline double output_at(const nn::MlpModel& model, const std::vector<double>& x, std::size_t out = 0) {
    return nn::predict(model, x)(static_cast<Eigen::Index>(out));
}

// Worst relative error between input_gradient and central differences.
inline double input_gradient_error(const nn::MlpModel& model, std::vector<double> x, double h = 1e-4) {
    const auto analytic = nn::input_gradient(model, x, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double up = output_at(model, x);
        x[i] = saved - h;
        const double down = output_at(model, x);
        x[i] = saved;
        worst = std::max(worst, rel_err(analytic[i], (up - down) / (2 * h)));
    }
    return worst;
}

// Worst relative error between loss_gradients and central differences of
// loss_value, over every weight and bias.
inline double parameter_gradient_error(nn::MlpModel model, const nn::Matrix& inputs, const nn::Vector& targets,
                                       nn::Loss loss, double h = 1e-4) {
    const auto lg = nn::loss_gradients(model, inputs, targets, loss, nn::Mode::eval, nullptr);
    auto loss_at = [&](const nn::MlpModel& m) {
        return nn::loss_value(nn::predict_batch(m, inputs), targets, loss);
    };
    double worst = 0.0;
    auto probe = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = loss_at(model);
        param = saved - h;
        const double down = loss_at(model);
        param = saved;
        worst = std::max(worst, rel_err(analytic, (up - down) / (2 * h)));
    };
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        const auto& grad = lg.gradients.layers[l];
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) probe(layer.weights(r, c), grad.weights(r, c));
            probe(layer.biases(r), grad.biases(r));
        }
    }
    return worst;
}

}  // namespace snrbench::testing
