#include "snrbench/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snrbench/error.hpp"

namespace snrbench::metrics {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) {
        fail(ErrorCode::shape, "length mismatch: " + std::to_string(a) + " predictions vs " + std::to_string(b) +
                                   " targets");
    }
    if (a == 0) {
        fail(ErrorCode::empty_data, "no samples to score");
    }
}

std::size_t overlap(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::size_t hits = 0;
    for (std::size_t i : a) {
        if (std::find(b.begin(), b.end(), i) != b.end()) {
            ++hits;
        }
    }
    return hits;
}

}  // namespace

double uscore(std::span<const double> preds, std::span<const double> targets, double eps) {
    check_lengths(preds.size(), targets.size());
    if (!(eps > 0.0)) {
        fail(ErrorCode::parameter, "uscore eps must be positive");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        total += 1.0 - std::abs(preds[i] - targets[i]) / (std::abs(preds[i]) + std::abs(targets[i]) + eps);
    }
    return total / static_cast<double>(preds.size());
}

double fprec(std::span<const std::size_t> topk, std::span<const std::size_t> annotated) {
    if (topk.size() != annotated.size() || topk.empty()) {
        fail(ErrorCode::parameter, "fprec needs two index sets of equal size k >= 1 (got " +
                                       std::to_string(topk.size()) + " and " + std::to_string(annotated.size()) +
                                       ")");
    }
    return static_cast<double>(overlap(topk, annotated)) / static_cast<double>(topk.size());
}

double mean_fprec(std::span<const attribution::AttributionVector> attribs, std::span<const std::size_t> annotated) {
    if (attribs.empty()) {
        fail(ErrorCode::empty_data, "no attributions to score");
    }
    double total = 0.0;
    for (const auto& a : attribs) {
        total += fprec(attribution::topk_features(a, annotated.size()), annotated);
    }
    return total / static_cast<double>(attribs.size());
}

double consistency(std::span<const attribution::AttributionVector> per_sample, std::size_t k) {
    if (per_sample.empty()) {
        fail(ErrorCode::empty_data, "consistency needs at least one sample");
    }
    const std::size_t n = per_sample.front().values.size();
    std::vector<double> mean_abs(n, 0.0);
    for (const auto& a : per_sample) {
        if (a.values.size() != n) {
            fail(ErrorCode::shape, "attribution vectors differ in length");
        }
        for (std::size_t i = 0; i < n; ++i) {
            mean_abs[i] += std::abs(a.values[i]);
        }
    }
    for (double& v : mean_abs) {
        v /= static_cast<double>(per_sample.size());
    }
    const auto reference = attribution::topk_features(mean_abs, k);

    double total = 0.0;
    for (const auto& a : per_sample) {
        total += static_cast<double>(overlap(attribution::topk_features(a, k), reference)) / static_cast<double>(k);
    }
    return total / static_cast<double>(per_sample.size());
}

double convergence_auc(std::span<const double> curve) {
    if (curve.size() < 2) {
        fail(ErrorCode::parameter, "convergence_auc needs at least two points");
    }
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        area += 0.5 * (curve[i - 1] + curve[i]);
    }
    return area / static_cast<double>(curve.size() - 1);
}

double mean_absolute_error(std::span<const double> preds, std::span<const double> targets) {
    check_lengths(preds.size(), targets.size());
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        total += std::abs(preds[i] - targets[i]);
    }
    return total / static_cast<double>(preds.size());
}

double accuracy(std::span<const double> probabilities, std::span<const double> labels) {
    check_lengths(probabilities.size(), labels.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double predicted = probabilities[i] >= 0.5 ? 1.0 : 0.0;
        correct += predicted == labels[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

std::vector<MetricRecord> basic_metrics(std::span<const double> preds, std::span<const double> targets, Task task) {
    if (task == Task::regression) {
        return {MetricRecord{"mae", mean_absolute_error(preds, targets), {}}};
    }
    return {MetricRecord{"accuracy", accuracy(preds, targets), {}}};
}

}  // namespace snrbench::metrics
