#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "snrbench/differentiable.hpp"
#include "snrbench/rng.hpp"

namespace snrbench::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Mode { train, eval };

enum class Loss { mse, bce };

/// One affine map. `weights` is out x in, so a layer computes W a + b.
struct DenseLayer {
    Matrix weights;
    Vector biases;
};

/// Fully connected network: ReLU on every hidden layer, identity on the output.
/// Dropout acts on hidden activations only, and only in train mode.
struct MlpModel {
    std::vector<std::size_t> layer_widths;
    std::vector<DenseLayer> layers;
    double dropout_rate = 0.0;
    Mode mode = Mode::train;

    std::size_t input_width() const { return layer_widths.front(); }
    std::size_t output_width() const { return layer_widths.back(); }
    std::size_t parameter_count() const;
};

/// Per-layer activations kept for a backward pass. Columns are samples.
/// activations[0] is the input; activations[l] (l >= 1) is the post-ReLU,
/// post-dropout output of layer l, except the last entry which is the raw
/// network output. masks[l-1] holds the scaled dropout mask of hidden layer l
/// and is empty when no dropout was applied.
struct ForwardCache {
    std::vector<Matrix> preactivations;
    std::vector<Matrix> activations;
    std::vector<Matrix> masks;
};

/// Parameter gradients, shaped like MlpModel::layers.
struct Gradients {
    std::vector<DenseLayer> layers;
};

struct LossAndGradients {
    double loss = 0.0;
    Gradients gradients;
};

/// Builds a network with weights drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in))
/// and zero biases. Throws ErrorCode::invalid_architecture on an empty width
/// list, a zero width, or a dropout rate outside [0, 1).
MlpModel mlp_new(std::span<const std::size_t> layer_widths, double dropout_rate, std::uint64_t seed);

/// Checks that the parameter shapes chain with layer_widths.
void validate(const MlpModel& model);

/// Forward pass over a batch (input_width x batch). In train mode with a
/// nonzero dropout rate `rng` must be non-null. `cache` is filled when given.
Matrix forward_batch(const MlpModel& model, const Matrix& inputs, Mode mode, Rng* rng,
                     ForwardCache* cache = nullptr);

Vector forward(const MlpModel& model, std::span<const double> x, Mode mode, Rng* rng,
               ForwardCache* cache = nullptr);

/// Eval-mode forward pass; never touches a generator.
Vector predict(const MlpModel& model, std::span<const double> x);
Matrix predict_batch(const MlpModel& model, const Matrix& inputs);

/// Exact dF_out/dx by reverse mode, evaluated with eval-mode semantics
/// (no dropout), regardless of `model.mode`. ReLU'(0) is taken as 0.
std::vector<double> input_gradient(const MlpModel& model, std::span<const double> x,
                                   std::size_t output_index);

/// Column j of the result is the input gradient at column j of `inputs`.
Matrix input_gradient_batch(const MlpModel& model, const Matrix& inputs, std::size_t output_index);

/// Mean loss over the batch and its exact parameter gradients. Requires a
/// single output unit. For Loss::bce the output is a logit and the loss is
/// sigmoid cross-entropy.
LossAndGradients loss_gradients(const MlpModel& model, const Matrix& inputs, const Vector& targets,
                                Loss loss, Mode mode, Rng* rng);

/// Loss value only, same conventions as loss_gradients.
double loss_value(const Matrix& outputs, const Vector& targets, Loss loss);

/// Adapts one output unit of a network to the ScalarFunction interface.
/// The model must outlive the adapter.
class MlpOutput final : public ScalarFunction {
public:
    MlpOutput(const MlpModel& model, std::size_t output_index);

    std::size_t input_width() const override { return model_->input_width(); }
    double value(std::span<const double> x) const override;
    std::vector<double> gradient(std::span<const double> x) const override;

private:
    const MlpModel* model_;
    std::size_t output_index_;
};

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace snrbench::nn
