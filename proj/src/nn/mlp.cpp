#include "snrbench/nn/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "snrbench/error.hpp"

namespace snrbench::nn {

namespace {

Matrix as_column(std::span<const double> x) {
    Matrix column(static_cast<Eigen::Index>(x.size()), 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        column(static_cast<Eigen::Index>(i), 0) = x[i];
    }
    return column;
}

void check_input_rows(const MlpModel& model, const Matrix& inputs) {
    if (static_cast<std::size_t>(inputs.rows()) != model.input_width()) {
        fail(ErrorCode::shape, "input has " + std::to_string(inputs.rows()) + " features, model expects " +
                                   std::to_string(model.input_width()));
    }
}

// Backpropagates `seed` (output_width x batch) from the network output down to
// the input. Parameter gradients are accumulated into `grads` when non-null.
Matrix backward(const MlpModel& model, const ForwardCache& cache, Matrix delta, Gradients* grads) {
    const std::size_t depth = model.layers.size();
    for (std::size_t l = depth; l-- > 0;) {
        const DenseLayer& layer = model.layers[l];
        if (grads != nullptr) {
            grads->layers[l].weights.noalias() = delta * cache.activations[l].transpose();
            grads->layers[l].biases = delta.rowwise().sum();
        }
        Matrix upstream = layer.weights.transpose() * delta;
        if (l == 0) {
            return upstream;
        }
        // Hidden layer l-1 (0-based): undo dropout, then ReLU.
        const Matrix& mask = cache.masks[l - 1];
        if (mask.size() != 0) {
            upstream.array() *= mask.array();
        }
        upstream.array() *= (cache.preactivations[l - 1].array() > 0.0).cast<double>();
        delta = std::move(upstream);
    }
    return delta;
}

}  // namespace

std::size_t MlpModel::parameter_count() const {
    std::size_t count = 0;
    for (const auto& layer : layers) {
        count += static_cast<std::size_t>(layer.weights.size() + layer.biases.size());
    }
    return count;
}

MlpModel mlp_new(std::span<const std::size_t> layer_widths, double dropout_rate, std::uint64_t seed) {
    if (layer_widths.size() < 2) {
        fail(ErrorCode::invalid_architecture, "layer_widths needs at least an input and an output width");
    }
    for (std::size_t w : layer_widths) {
        if (w == 0) {
            fail(ErrorCode::invalid_architecture, "layer widths must be positive");
        }
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        fail(ErrorCode::invalid_architecture, "dropout_rate must lie in [0, 1)");
    }

    MlpModel model;
    model.layer_widths.assign(layer_widths.begin(), layer_widths.end());
    model.dropout_rate = dropout_rate;
    model.mode = Mode::train;

    Rng rng(seed);
    for (std::size_t l = 1; l < layer_widths.size(); ++l) {
        const auto fan_in = static_cast<Eigen::Index>(layer_widths[l - 1]);
        const auto fan_out = static_cast<Eigen::Index>(layer_widths[l]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> init(-bound, bound);

        DenseLayer layer;
        layer.weights.resize(fan_out, fan_in);
        for (Eigen::Index r = 0; r < fan_out; ++r) {
            for (Eigen::Index c = 0; c < fan_in; ++c) {
                layer.weights(r, c) = init(rng);
            }
        }
        layer.biases = Vector::Zero(fan_out);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

void validate(const MlpModel& model) {
    if (model.layer_widths.size() < 2 || model.layers.size() + 1 != model.layer_widths.size()) {
        fail(ErrorCode::invalid_architecture, "layer count does not match layer_widths");
    }
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const auto& layer = model.layers[l];
        const auto in = static_cast<Eigen::Index>(model.layer_widths[l]);
        const auto out = static_cast<Eigen::Index>(model.layer_widths[l + 1]);
        if (in == 0 || out == 0) {
            fail(ErrorCode::invalid_architecture, "layer widths must be positive");
        }
        if (layer.weights.rows() != out || layer.weights.cols() != in || layer.biases.size() != out) {
            fail(ErrorCode::invalid_architecture, "parameter shapes of layer " + std::to_string(l) +
                                                      " do not chain with layer_widths");
        }
    }
    if (!(model.dropout_rate >= 0.0 && model.dropout_rate < 1.0)) {
        fail(ErrorCode::invalid_architecture, "dropout_rate must lie in [0, 1)");
    }
}

Matrix forward_batch(const MlpModel& model, const Matrix& inputs, Mode mode, Rng* rng, ForwardCache* cache) {
    check_input_rows(model, inputs);
    const bool use_dropout = mode == Mode::train && model.dropout_rate > 0.0;
    if (use_dropout && rng == nullptr) {
        fail(ErrorCode::parameter, "train-mode forward with dropout needs a generator");
    }
    if (cache != nullptr) {
        cache->preactivations.clear();
        cache->activations.clear();
        cache->masks.clear();
        cache->activations.push_back(inputs);
    }

    const double keep = 1.0 - model.dropout_rate;
    std::bernoulli_distribution keep_unit(keep);
    Matrix current = inputs;
    const std::size_t depth = model.layers.size();
    for (std::size_t l = 0; l < depth; ++l) {
        const auto& layer = model.layers[l];
        Matrix z = layer.weights * current;
        z.colwise() += layer.biases;
        if (l + 1 == depth) {
            if (cache != nullptr) {
                cache->preactivations.push_back(z);
                cache->activations.push_back(z);
            }
            return z;
        }
        Matrix a = z.cwiseMax(0.0);
        Matrix mask;
        if (use_dropout) {
            mask.resize(a.rows(), a.cols());
            for (Eigen::Index c = 0; c < mask.cols(); ++c) {
                for (Eigen::Index r = 0; r < mask.rows(); ++r) {
                    mask(r, c) = keep_unit(*rng) ? 1.0 / keep : 0.0;
                }
            }
            a.array() *= mask.array();
        }
        if (cache != nullptr) {
            cache->preactivations.push_back(std::move(z));
            cache->activations.push_back(a);
            cache->masks.push_back(std::move(mask));
        }
        current = std::move(a);
    }
    return current;
}

Vector forward(const MlpModel& model, std::span<const double> x, Mode mode, Rng* rng, ForwardCache* cache) {
    return forward_batch(model, as_column(x), mode, rng, cache).col(0);
}

Vector predict(const MlpModel& model, std::span<const double> x) {
    return forward(model, x, Mode::eval, nullptr);
}

Matrix predict_batch(const MlpModel& model, const Matrix& inputs) {
    return forward_batch(model, inputs, Mode::eval, nullptr);
}

Matrix input_gradient_batch(const MlpModel& model, const Matrix& inputs, std::size_t output_index) {
    if (output_index >= model.output_width()) {
        fail(ErrorCode::index, "output index " + std::to_string(output_index) + " out of range for " +
                                   std::to_string(model.output_width()) + " outputs");
    }
    ForwardCache cache;
    forward_batch(model, inputs, Mode::eval, nullptr, &cache);
    Matrix seed = Matrix::Zero(static_cast<Eigen::Index>(model.output_width()), inputs.cols());
    seed.row(static_cast<Eigen::Index>(output_index)).setOnes();
    return backward(model, cache, std::move(seed), nullptr);
}

std::vector<double> input_gradient(const MlpModel& model, std::span<const double> x, std::size_t output_index) {
    const Matrix g = input_gradient_batch(model, as_column(x), output_index);
    return {g.data(), g.data() + g.size()};
}

double loss_value(const Matrix& outputs, const Vector& targets, Loss loss) {
    const auto n = static_cast<double>(targets.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        const double z = outputs(0, i);
        const double y = targets(i);
        if (loss == Loss::mse) {
            total += (z - y) * (z - y);
        } else {
            // softplus(z) - y z, computed without overflow
            total += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - y * z;
        }
    }
    return total / n;
}

LossAndGradients loss_gradients(const MlpModel& model, const Matrix& inputs, const Vector& targets, Loss loss,
                                Mode mode, Rng* rng) {
    if (model.output_width() != 1) {
        fail(ErrorCode::shape, "loss_gradients needs a single output unit");
    }
    if (targets.size() != inputs.cols() || targets.size() == 0) {
        fail(ErrorCode::shape, "targets must match the batch size");
    }
    ForwardCache cache;
    const Matrix outputs = forward_batch(model, inputs, mode, rng, &cache);

    const auto n = static_cast<double>(targets.size());
    Matrix delta(1, targets.size());
    for (Eigen::Index i = 0; i < targets.size(); ++i) {
        const double z = outputs(0, i);
        delta(0, i) = loss == Loss::mse ? 2.0 * (z - targets(i)) / n : (sigmoid(z) - targets(i)) / n;
    }

    LossAndGradients result;
    result.loss = loss_value(outputs, targets, loss);
    result.gradients.layers.resize(model.layers.size());
    backward(model, cache, std::move(delta), &result.gradients);
    return result;
}

MlpOutput::MlpOutput(const MlpModel& model, std::size_t output_index)
    : model_(&model), output_index_(output_index) {
    if (output_index >= model.output_width()) {
        fail(ErrorCode::index, "output index out of range");
    }
}

double MlpOutput::value(std::span<const double> x) const {
    return predict(*model_, x)(static_cast<Eigen::Index>(output_index_));
}

std::vector<double> MlpOutput::gradient(std::span<const double> x) const {
    return input_gradient(*model_, x, output_index_);
}

}  // namespace snrbench::nn
