#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snrbench/attribution/attribution.hpp"
#include "snrbench/symfunc/dataset.hpp"

namespace snrbench::metrics {

inline constexpr double kUScoreEps = 1e-8;

struct MetricRecord {
    std::string name;
    double value = 0.0;
    std::map<std::string, std::string> context;
};

/// Mean of 1 - |p - t| / (|p| + |t| + eps); lies in (0, 1].
double uscore(std::span<const double> preds, std::span<const double> targets, double eps = kUScoreEps);

/// |topk ∩ annotated| / k; both sets must have the same size k >= 1.
double fprec(std::span<const std::size_t> topk, std::span<const std::size_t> annotated);

/// Mean per-sample FPrec with k = |annotated|.
double mean_fprec(std::span<const attribution::AttributionVector> attribs, std::span<const std::size_t> annotated);

/// Mean over samples of |topk(sample) ∩ topk(mean |a|)| / k.
double consistency(std::span<const attribution::AttributionVector> per_sample, std::size_t k);

/// Trapezoidal area under a curve on unit epoch spacing, divided by E - 1.
double convergence_auc(std::span<const double> curve);

/// MAE for regression; accuracy at threshold 0.5 for classification, where
/// `preds` are probabilities.
std::vector<MetricRecord> basic_metrics(std::span<const double> preds, std::span<const double> targets, Task task);

double mean_absolute_error(std::span<const double> preds, std::span<const double> targets);
double accuracy(std::span<const double> probabilities, std::span<const double> labels);

}  // namespace snrbench::metrics
