#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace snrbench {

/// A scalar-valued function of a real vector with an exact gradient.
///
/// Attribution methods that only need forward values and input gradients
/// (saliency, integrated gradients, feature ablation) are written against
/// this interface, so the same code runs on a trained network output and on
/// an analytic symbolic evaluator.
class ScalarFunction {
public:
    virtual ~ScalarFunction() = default;

    virtual std::size_t input_width() const = 0;
    virtual double value(std::span<const double> x) const = 0;
    virtual std::vector<double> gradient(std::span<const double> x) const = 0;
};

}  // namespace snrbench
