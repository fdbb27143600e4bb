#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "snrbench/differentiable.hpp"

namespace snrbench::symfunc {

inline constexpr int function_count = 15;

/// Number of predictive features of function `id` (1..15).
std::size_t arity(int id);

/// Human-readable formula, variables named a, b, c, ... in column order.
std::string_view formula(int id);

double eval_function(int id, std::span<const double> x);

/// Closed-form partial derivatives, one per argument.
std::vector<double> eval_gradient(int id, std::span<const double> x);

/// f(x) - f(x with x_i set to baseline_i), for every i.
std::vector<double> ground_truth_fa(int id, std::span<const double> x, std::span<const double> baseline);
std::vector<double> ground_truth_fa(int id, std::span<const double> x);

/// Sum of per-segment single-feature ablation deltas along the straight path
/// from `baseline` to `x`, cut into `steps` equal segments.
std::vector<double> ground_truth_ig(int id, std::span<const double> x, std::span<const double> baseline,
                                    int steps);
std::vector<double> ground_truth_ig(int id, std::span<const double> x, int steps);

/// Exposes function `id` as a ScalarFunction over `input_width` >= arity(id)
/// inputs; columns past the arity are ignored (zero gradient).
class SymbolicEvaluator final : public ScalarFunction {
public:
    explicit SymbolicEvaluator(int id);
    SymbolicEvaluator(int id, std::size_t input_width);

    std::size_t input_width() const override { return width_; }
    double value(std::span<const double> x) const override;
    std::vector<double> gradient(std::span<const double> x) const override;

private:
    int id_;
    std::size_t width_;
};

}  // namespace snrbench::symfunc
