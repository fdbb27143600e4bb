#include "snrbench/rfe/rfe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "snrbench/error.hpp"
#include "snrbench/rng.hpp"

namespace snrbench::rfe {

namespace {

void validate(const TabularDataset& data, const RfeConfig& cfg) {
    if (!(cfg.drop_rate > 0.0 && cfg.drop_rate < 1.0)) {
        fail(ErrorCode::parameter, "drop_rate must lie in (0, 1)");
    }
    if (cfg.target_k < 1) {
        fail(ErrorCode::parameter, "target_k must be at least 1");
    }
    if (cfg.target_k > data.cols()) {
        fail(ErrorCode::parameter, "target_k=" + std::to_string(cfg.target_k) + " exceeds the " +
                                       std::to_string(data.cols()) + " available features");
    }
    nn::validate(cfg.inner_train);
}

std::vector<double> network_importance(const nn::MlpModel& model, const TabularDataset& data,
                                       attribution::Method method, int ig_steps) {
    const auto rows = data.validation_rows();
    if (rows.empty()) {
        fail(ErrorCode::empty_data, "feature importance needs a nonempty validation split");
    }
    const auto attribs = attribution::attribute_batch(model, gather_columns(data, rows), method, 0, ig_steps);
    std::vector<double> importance(data.cols(), 0.0);
    for (const auto& a : attribs) {
        for (std::size_t i = 0; i < importance.size(); ++i) {
            importance[i] += std::abs(a.values[i]);
        }
    }
    for (double& v : importance) {
        v /= static_cast<double>(attribs.size());
    }
    return importance;
}

std::vector<double> coefficient_importance(const nn::MlpModel& model) {
    const auto& w = model.layers.front().weights;
    std::vector<double> importance(static_cast<std::size_t>(w.cols()));
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        importance[static_cast<std::size_t>(c)] = std::abs(w(0, c));
    }
    return importance;
}

attribution::Method to_method(Explainer explainer) {
    switch (explainer) {
        case Explainer::sa: return attribution::Method::sa;
        case Explainer::ig: return attribution::Method::ig;
        case Explainer::dl: return attribution::Method::dl;
        case Explainer::fa: return attribution::Method::fa;
        case Explainer::coef: break;
    }
    fail(ErrorCode::parameter, "coef is not a post-hoc attribution method");
}

nn::TrainConfig seeded(const nn::TrainConfig& base, std::uint64_t seed) {
    nn::TrainConfig cfg = base;
    cfg.seed = seed;
    cfg.record_attribution_every.reset();
    return cfg;
}

void append_fprec(const TabularDataset& data, const std::vector<std::size_t>& selected,
                  std::vector<metrics::MetricRecord>& out) {
    if (!data.predictive_indices.empty() && data.predictive_indices.size() == selected.size()) {
        out.push_back({"fprec", metrics::fprec(selected, data.predictive_indices), {}});
    }
}

RfeResult run(const TabularDataset& data, const RfeConfig& cfg, bool linear) {
    validate(data, cfg);
    const auto started = std::chrono::steady_clock::now();
    const NetworkSpec linear_spec{{}, 0.0};
    const NetworkSpec& selector = linear ? linear_spec : cfg.network;

    RfeResult result;
    std::vector<std::size_t> selected(data.cols());
    std::iota(selected.begin(), selected.end(), std::size_t{0});

    for (std::size_t t = 0; selected.size() > cfg.target_k; ++t) {
        const TabularDataset subset = select_columns(data, selected);
        const auto train_cfg = seeded(cfg.inner_train, derive_seed(cfg.seed, "iteration/" + std::to_string(t)));
        FitResult fit = fit_and_evaluate(subset, selector, train_cfg);

        std::vector<double> importance =
            linear ? coefficient_importance(fit.model)
                   : network_importance(fit.model, subset, to_method(cfg.explainer), cfg.ig_steps);

        const std::size_t keep = selected.size() - drop_count(selected.size(), cfg.drop_rate, cfg.target_k);
        std::vector<std::size_t> kept_positions = attribution::topk_features(importance, keep);
        std::sort(kept_positions.begin(), kept_positions.end());

        result.iterations.push_back({selected, std::move(fit.validation_metrics), std::move(importance)});

        std::vector<std::size_t> next;
        next.reserve(keep);
        for (std::size_t p : kept_positions) {
            next.push_back(selected[p]);
        }
        selected = std::move(next);
    }

    result.final_selected = selected;
    const auto final_cfg = seeded(cfg.inner_train, derive_seed(cfg.seed, "final"));
    if (cfg.strategy == Strategy::bi) {
        result.final_model_metrics = bi_module_eval(selected, data, final_cfg, cfg.network);
    } else {
        result.final_model_metrics =
            fit_and_evaluate(select_columns(data, selected), selector, final_cfg).validation_metrics;
    }
    append_fprec(data, selected, result.final_model_metrics);
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace

std::string_view to_string(Explainer explainer) {
    switch (explainer) {
        case Explainer::sa: return "sa";
        case Explainer::ig: return "ig";
        case Explainer::dl: return "dl";
        case Explainer::fa: return "fa";
        case Explainer::coef: return "coef";
    }
    return "?";
}

Explainer explainer_from_string(std::string_view text) {
    for (Explainer e : {Explainer::sa, Explainer::ig, Explainer::dl, Explainer::fa, Explainer::coef}) {
        if (to_string(e) == text) {
            return e;
        }
    }
    fail(ErrorCode::parameter, "unknown explainer '" + std::string(text) + "'");
}

std::string_view to_string(Strategy strategy) {
    return strategy == Strategy::uni ? "uni" : "bi";
}

Strategy strategy_from_string(std::string_view text) {
    if (text == "uni") return Strategy::uni;
    if (text == "bi") return Strategy::bi;
    fail(ErrorCode::parameter, "unknown strategy '" + std::string(text) + "'");
}

std::size_t drop_count(std::size_t current, double drop_rate, std::size_t target_k) {
    if (current <= target_k) {
        return 0;
    }
    const auto wanted = static_cast<std::size_t>(std::ceil(drop_rate * static_cast<double>(current)));
    return std::clamp<std::size_t>(wanted, 1, current - target_k);
}

std::vector<std::size_t> elimination_schedule(std::size_t n, double drop_rate, std::size_t target_k) {
    if (!(drop_rate > 0.0 && drop_rate < 1.0) || target_k < 1 || target_k > n) {
        fail(ErrorCode::parameter, "invalid elimination schedule parameters");
    }
    std::vector<std::size_t> sizes{n};
    while (sizes.back() > target_k) {
        sizes.push_back(sizes.back() - drop_count(sizes.back(), drop_rate, target_k));
    }
    return sizes;
}

std::vector<metrics::MetricRecord> validation_metrics(const nn::MlpModel& model, const TabularDataset& data,
                                                      nn::Loss loss) {
    const auto rows = data.validation_rows();
    if (rows.empty()) {
        fail(ErrorCode::empty_data, "validation split is empty");
    }
    const Eigen::MatrixXd outputs = nn::predict_batch(model, gather_columns(data, rows));
    std::vector<double> preds(rows.size());
    std::vector<double> targets(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const double z = outputs(0, static_cast<Eigen::Index>(j));
        preds[j] = loss == nn::Loss::bce ? nn::sigmoid(z) : z;
        targets[j] = data.targets[rows[j]];
    }
    if (loss == nn::Loss::bce) {
        return metrics::basic_metrics(preds, targets, Task::classification);
    }
    auto out = metrics::basic_metrics(preds, targets, Task::regression);
    out.push_back({"uscore", metrics::uscore(preds, targets), {}});
    return out;
}

FitResult fit_and_evaluate(const TabularDataset& data, const NetworkSpec& network, const nn::TrainConfig& train) {
    std::vector<std::size_t> widths{data.cols()};
    widths.insert(widths.end(), network.hidden_widths.begin(), network.hidden_widths.end());
    widths.push_back(1);
    FitResult fit{nn::mlp_new(widths, network.dropout_rate, train.seed), {}, {}};
    fit.report = nn::train(fit.model, data, train);
    fit.model.mode = nn::Mode::eval;
    fit.validation_metrics = validation_metrics(fit.model, data, train.loss);
    return fit;
}

RfeResult rfewna(const TabularDataset& data, const RfeConfig& cfg) {
    if (cfg.explainer == Explainer::coef) {
        fail(ErrorCode::parameter, "rfewna needs a post-hoc explainer (sa, ig, dl or fa)");
    }
    return run(data, cfg, false);
}

RfeResult rfe_linear(const TabularDataset& data, const RfeConfig& cfg) {
    if (cfg.explainer != Explainer::coef) {
        fail(ErrorCode::parameter, "rfe_linear uses coefficient importance (explainer=coef)");
    }
    return run(data, cfg, true);
}

std::vector<metrics::MetricRecord> bi_module_eval(std::span<const std::size_t> selected, const TabularDataset& data,
                                                  const nn::TrainConfig& inner_train, const NetworkSpec& network) {
    if (selected.empty()) {
        fail(ErrorCode::parameter, "bi-module evaluation needs a nonempty selection");
    }
    return fit_and_evaluate(select_columns(data, selected), network, inner_train).validation_metrics;
}

nlohmann::json trajectory_json(const RfeResult& result) {
    const auto metrics_json = [](const std::vector<metrics::MetricRecord>& records) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& r : records) {
            out[r.name] = r.value;
        }
        return out;
    };
    nlohmann::json doc;
    auto iterations = nlohmann::json::array();
    for (const auto& it : result.iterations) {
        iterations.push_back({{"size", it.selected.size()},
                              {"selected", it.selected},
                              {"importance", it.importance},
                              {"metrics", metrics_json(it.validation_metrics)}});
    }
    doc["iterations"] = std::move(iterations);
    doc["final_selected"] = result.final_selected;
    doc["final_metrics"] = metrics_json(result.final_model_metrics);
    doc["wall_time_s"] = result.wall_time_s;
    return doc;
}

}  // namespace snrbench::rfe
