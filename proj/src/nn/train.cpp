#include "snrbench/nn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "snrbench/error.hpp"

namespace snrbench::nn {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

class Stepper {
public:
    Stepper(const MlpModel& model, const TrainConfig& cfg) : cfg_(cfg) {
        if (cfg.optimizer == Optimizer::adam) {
            for (const auto& layer : model.layers) {
                first_.push_back({Matrix::Zero(layer.weights.rows(), layer.weights.cols()),
                                  Vector::Zero(layer.biases.size())});
                second_.push_back(first_.back());
            }
        }
    }

    void apply(MlpModel& model, const Gradients& grads) {
        const double lr = cfg_.learning_rate;
        if (cfg_.optimizer == Optimizer::sgd) {
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                model.layers[l].weights -= lr * grads.layers[l].weights;
                model.layers[l].biases -= lr * grads.layers[l].biases;
            }
            return;
        }
        ++step_;
        const double correction1 = 1.0 - std::pow(kBeta1, static_cast<double>(step_));
        const double correction2 = 1.0 - std::pow(kBeta2, static_cast<double>(step_));
        const double step_size = lr / correction1;
        const double sqrt_c2 = std::sqrt(correction2);
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            update(model.layers[l].weights, grads.layers[l].weights, first_[l].weights, second_[l].weights,
                   step_size, sqrt_c2);
            update(model.layers[l].biases, grads.layers[l].biases, first_[l].biases, second_[l].biases, step_size,
                   sqrt_c2);
        }
    }

private:
    template <typename Param>
    static void update(Param& param, const Param& grad, Param& m, Param& v, double step_size, double sqrt_c2) {
        m = kBeta1 * m + (1.0 - kBeta1) * grad;
        v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
        param.array() -= step_size * m.array() / (v.array().sqrt() / sqrt_c2 + kAdamEps);
    }

    const TrainConfig& cfg_;
    std::vector<DenseLayer> first_;
    std::vector<DenseLayer> second_;
    std::size_t step_ = 0;
};

std::size_t estimate_peak_bytes(const MlpModel& model, const TrainConfig& cfg, std::size_t batch) {
    const std::size_t state = cfg.optimizer == Optimizer::adam ? 3 : 1;
    std::size_t activations = 0;
    for (std::size_t w : model.layer_widths) {
        activations += 3 * w * batch;  // preactivation, activation, mask
    }
    return sizeof(double) * (model.parameter_count() * (state + 1) + activations);
}

}  // namespace

std::string_view to_string(Optimizer optimizer) {
    return optimizer == Optimizer::sgd ? "sgd" : "adam";
}

Optimizer optimizer_from_string(std::string_view text) {
    if (text == "sgd") return Optimizer::sgd;
    if (text == "adam") return Optimizer::adam;
    fail(ErrorCode::parameter, "unknown optimizer '" + std::string(text) + "'");
}

std::string_view to_string(Loss loss) {
    return loss == Loss::mse ? "mse" : "bce";
}

Loss loss_from_string(std::string_view text) {
    if (text == "mse") return Loss::mse;
    if (text == "bce") return Loss::bce;
    fail(ErrorCode::parameter, "unknown loss '" + std::string(text) + "'");
}

void validate(const TrainConfig& cfg) {
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
        fail(ErrorCode::parameter, "learning_rate must be positive");
    }
    if (cfg.batch_size == 0) {
        fail(ErrorCode::parameter, "batch_size must be positive");
    }
    if (cfg.record_attribution_every && *cfg.record_attribution_every == 0) {
        fail(ErrorCode::parameter, "record_attribution_every must be positive");
    }
}

TrainReport train(MlpModel& model, const TabularDataset& data, const TrainConfig& cfg, const EpochProbe& probe) {
    validate(cfg);
    validate(model);
    if (model.output_width() != 1) {
        fail(ErrorCode::shape, "training needs a single output unit");
    }
    if (data.cols() != model.input_width()) {
        fail(ErrorCode::shape, "dataset has " + std::to_string(data.cols()) + " features, model expects " +
                                   std::to_string(model.input_width()));
    }
    if (data.targets.size() != data.rows() || data.split.size() != data.rows()) {
        fail(ErrorCode::shape, "targets and split must have one entry per row");
    }
    if (cfg.loss == Loss::bce) {
        for (double y : data.targets) {
            if (y != 0.0 && y != 1.0) {
                fail(ErrorCode::invalid_target, "binary cross-entropy needs targets in {0, 1}");
            }
        }
    }
    std::vector<std::size_t> rows = data.train_rows();
    if (rows.empty()) {
        fail(ErrorCode::empty_data, "train split is empty");
    }

    const auto started = std::chrono::steady_clock::now();
    const Mode entry_mode = model.mode;
    model.mode = Mode::train;

    TrainReport report;
    report.per_epoch_loss.reserve(cfg.epochs);
    Rng rng(cfg.seed);
    Stepper stepper(model, cfg);
    const std::size_t batch = std::min(cfg.batch_size, rows.size());
    const auto n_inputs = static_cast<Eigen::Index>(data.cols());

    Matrix inputs;
    Vector targets;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(rows.begin(), rows.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < rows.size(); start += batch) {
            const std::size_t count = std::min(batch, rows.size() - start);
            inputs.resize(n_inputs, static_cast<Eigen::Index>(count));
            targets.resize(static_cast<Eigen::Index>(count));
            for (std::size_t j = 0; j < count; ++j) {
                const auto r = static_cast<Eigen::Index>(rows[start + j]);
                inputs.col(static_cast<Eigen::Index>(j)) = data.features.row(r).transpose();
                targets(static_cast<Eigen::Index>(j)) = data.targets[rows[start + j]];
            }
            const LossAndGradients step = loss_gradients(model, inputs, targets, cfg.loss, Mode::train, &rng);
            stepper.apply(model, step.gradients);
            epoch_loss += step.loss * static_cast<double>(count);
        }
        report.per_epoch_loss.push_back(epoch_loss / static_cast<double>(rows.size()));

        if (probe && cfg.record_attribution_every && (epoch + 1) % *cfg.record_attribution_every == 0) {
            model.mode = Mode::eval;
            for (const auto& [name, value] : probe(model)) {
                report.per_epoch_fprec[name].push_back(value);
            }
            model.mode = Mode::train;
            report.recorded_epochs.push_back(epoch + 1);
        }
    }

    model.mode = entry_mode;
    report.peak_bytes = estimate_peak_bytes(model, cfg, batch);
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace snrbench::nn
