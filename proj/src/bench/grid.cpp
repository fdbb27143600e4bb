#include "snrbench/bench/grid.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <tuple>

#include "snrbench/bench/dataset_io.hpp"
#include "snrbench/error.hpp"
#include "snrbench/metrics/metrics.hpp"
#include "snrbench/rng.hpp"
#include "snrbench/symfunc/symbolic.hpp"

namespace snrbench::bench {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Cell {
    int function_id = 0;
    NoiseSpec noise;
    std::size_t n_samples = 0;
    std::size_t width = 0;
    std::size_t depth = 0;
    double learning_rate = 0.0;
    double dropout = 0.0;
    nn::Optimizer optimizer = nn::Optimizer::adam;
};

struct Job {
    std::size_t cell_index = 0;
    std::uint64_t seed = 0;
};

struct Timing {
    std::string phase;
    double wall_time_s = 0.0;
    std::size_t bytes = 0;
};

struct JobOutput {
    std::vector<ResultRow> rows;
    std::vector<Timing> timings;
};

const std::vector<std::string> kTagColumns{"function_id", "n_noise",  "feature_dist", "label_noise_std", "n_samples",
                                           "split_ratio", "width",    "depth",        "learning_rate",   "dropout",
                                           "optimizer",   "epochs",   "batch_size",   "ig_steps"};

std::vector<std::string> cell_tags(const Cell& cell, const GridConfig& cfg) {
    return {std::to_string(cell.function_id),
            std::to_string(cell.noise.n_noise),
            std::string(to_string(cell.noise.feature_dist)),
            format_double(cell.noise.label_noise_std),
            std::to_string(cell.n_samples),
            format_double(cfg.split_ratio),
            std::to_string(cell.width),
            std::to_string(cell.depth),
            format_double(cell.learning_rate),
            format_double(cell.dropout),
            std::string(nn::to_string(cell.optimizer)),
            std::to_string(cfg.epochs),
            std::to_string(cfg.batch_size),
            std::to_string(cfg.ig_steps)};
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<Cell> expand_cells(const GridConfig& cfg) {
    std::vector<Cell> cells;
    for (int id : cfg.function_ids)
        for (const auto& noise : cfg.noise_specs)
            for (std::size_t n : cfg.n_samples)
                for (std::size_t width : cfg.widths)
                    for (std::size_t depth : cfg.depths)
                        for (double lr : cfg.learning_rates)
                            for (double dropout : cfg.dropout_rates)
                                for (nn::Optimizer opt : cfg.optimizers) {
                                    cells.push_back({id, noise, n, width, depth, lr, dropout, opt});
                                }
    return cells;
}

bool wants(const GridConfig& cfg, const std::string& metric) {
    return std::find(cfg.metrics.begin(), cfg.metrics.end(), metric) != cfg.metrics.end();
}

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    return out + "\"";
}

// Rough working-set size of one attribution call: activations for every
// network evaluation done at once.
std::size_t attribution_bytes(attribution::Method method, const std::vector<std::size_t>& widths, int ig_steps) {
    const std::size_t units = std::accumulate(widths.begin(), widths.end(), std::size_t{0});
    std::size_t columns = 1;
    switch (method) {
        case attribution::Method::sa: columns = 1; break;
        case attribution::Method::ig: columns = static_cast<std::size_t>(ig_steps); break;
        case attribution::Method::dl: columns = 2; break;
        case attribution::Method::fa: columns = widths.front() + 1; break;
    }
    return 2 * sizeof(double) * units * columns;
}

JobOutput run_job(const Cell& cell, std::uint64_t seed, const GridConfig& cfg) {
    JobOutput out;
    const auto tags = cell_tags(cell, cfg);
    const std::string cell_key = join(tags, '|');
    const std::string data_key = join({tags[0], tags[1], tags[2], tags[3], tags[4], tags[5]}, '|');

    const auto add = [&](std::string method, std::string metric, double value, double wall) {
        out.rows.push_back({cell_key, tags, seed, std::move(method), std::move(metric), value, "ok", "", wall});
    };

    NoiseSpec noise = cell.noise;
    noise.seed = derive_seed(seed, "data/" + data_key);
    const TabularDataset data = generate_dataset(cell.function_id, noise, cell.n_samples, cfg.split_ratio);
    const std::size_t m = symfunc::arity(cell.function_id);

    std::vector<std::size_t> widths{data.cols()};
    widths.insert(widths.end(), cell.depth, cell.width);
    widths.push_back(1);
    nn::MlpModel model = nn::mlp_new(widths, cell.dropout, derive_seed(seed, "init/" + cell_key));

    nn::TrainConfig train_cfg;
    train_cfg.optimizer = cell.optimizer;
    train_cfg.learning_rate = cell.learning_rate;
    train_cfg.epochs = cfg.epochs;
    train_cfg.batch_size = cfg.batch_size;
    train_cfg.loss = nn::Loss::mse;
    train_cfg.seed = derive_seed(seed, "train/" + cell_key);

    const auto validation = data.validation_rows();
    if (validation.empty()) {
        fail(ErrorCode::empty_data, "validation split is empty");
    }
    std::vector<std::size_t> attributed = validation;
    if (cfg.attribution_samples > 0 && attributed.size() > cfg.attribution_samples) {
        attributed.resize(cfg.attribution_samples);
    }

    nn::EpochProbe probe;
    if (wants(cfg, "convergence_auc")) {
        train_cfg.record_attribution_every = cfg.record_every;
        std::vector<std::size_t> curve_rows = validation;
        curve_rows.resize(std::min(curve_rows.size(), cfg.curve_samples));
        const Eigen::MatrixXd curve_inputs = gather_columns(data, curve_rows);
        probe = [&cfg, curve_inputs, &data](const nn::MlpModel& current) {
            std::map<std::string, double> scores;
            for (auto method : cfg.attribution_methods) {
                const auto attribs = attribution::attribute_batch(current, curve_inputs, method, 0, cfg.ig_steps);
                scores[std::string(attribution::to_string(method))] =
                    metrics::mean_fprec(attribs, data.predictive_indices);
            }
            return scores;
        };
    }

    const nn::TrainReport report = nn::train(model, data, train_cfg, probe);
    model.mode = nn::Mode::eval;
    out.timings.push_back({"train", report.wall_time_s, report.peak_bytes});

    const Eigen::MatrixXd val_inputs = gather_columns(data, validation);
    const Eigen::MatrixXd outputs = nn::predict_batch(model, val_inputs);
    std::vector<double> preds(validation.size());
    std::vector<double> clean(validation.size());
    for (std::size_t j = 0; j < validation.size(); ++j) {
        preds[j] = outputs(0, static_cast<Eigen::Index>(j));
        const auto row = data.features.row(static_cast<Eigen::Index>(validation[j]));
        clean[j] = symfunc::eval_function(cell.function_id, std::span<const double>(row.data(), m));
    }
    if (wants(cfg, "uscore")) add("-", "uscore", metrics::uscore(preds, clean), report.wall_time_s);
    if (wants(cfg, "mae")) add("-", "mae", metrics::mean_absolute_error(preds, clean), report.wall_time_s);

    const bool per_sample = wants(cfg, "fprec") || wants(cfg, "consistency");
    const Eigen::MatrixXd attr_inputs = gather_columns(data, attributed);
    for (auto method : cfg.attribution_methods) {
        const std::string name(attribution::to_string(method));
        double wall = 0.0;
        std::vector<attribution::AttributionVector> attribs;
        if (per_sample) {
            const auto started = Clock::now();
            attribs = attribution::attribute_batch(model, attr_inputs, method, 0, cfg.ig_steps);
            wall = std::chrono::duration<double>(Clock::now() - started).count();
            out.timings.push_back({"attribute/" + name, wall, attribution_bytes(method, widths, cfg.ig_steps)});
        }
        if (wants(cfg, "fprec")) add(name, "fprec", metrics::mean_fprec(attribs, data.predictive_indices), wall);
        if (wants(cfg, "consistency")) add(name, "consistency", metrics::consistency(attribs, m), wall);
        if (wants(cfg, "convergence_auc")) {
            const auto it = report.per_epoch_fprec.find(name);
            if (it == report.per_epoch_fprec.end() || it->second.size() < 2) {
                fail(ErrorCode::parameter, "FPrec curve for " + name + " has fewer than two points");
            }
            add(name, "convergence_auc", metrics::convergence_auc(it->second), wall);
        }
    }
    return out;
}

template <typename T>
std::vector<T> get_list(const json& doc, const char* key, std::vector<T> fallback) {
    if (!doc.contains(key)) {
        return fallback;
    }
    const json& value = doc.at(key);
    if (!value.is_array()) {
        fail(ErrorCode::config, std::string("field '") + key + "' must be an array");
    }
    return value.get<std::vector<T>>();
}

template <typename T>
T get_value(const json& doc, const char* key, T fallback) {
    return doc.contains(key) ? doc.at(key).get<T>() : fallback;
}

}  // namespace

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> columns = [] {
        std::vector<std::string> c = kTagColumns;
        for (const char* extra : {"seed", "method", "metric", "value", "status", "message"}) {
            c.emplace_back(extra);
        }
        return c;
    }();
    return columns;
}

void validate(const GridConfig& cfg) {
    const auto nonempty = [](bool ok, const char* field) {
        if (!ok) fail(ErrorCode::config, std::string("field '") + field + "' must not be empty");
    };
    nonempty(!cfg.function_ids.empty(), "function_ids");
    nonempty(!cfg.noise_specs.empty(), "noise_specs");
    nonempty(!cfg.n_samples.empty(), "n_samples");
    nonempty(!cfg.widths.empty(), "widths");
    nonempty(!cfg.depths.empty(), "depths");
    nonempty(!cfg.learning_rates.empty(), "learning_rates");
    nonempty(!cfg.dropout_rates.empty(), "dropout_rates");
    nonempty(!cfg.optimizers.empty(), "optimizers");
    nonempty(!cfg.attribution_methods.empty(), "attribution_methods");
    nonempty(!cfg.metrics.empty(), "metrics");
    nonempty(!cfg.seeds.empty(), "seeds");

    for (int id : cfg.function_ids) {
        if (id < 1 || id > symfunc::function_count) {
            fail(ErrorCode::config, "field 'function_ids': unknown function id " + std::to_string(id));
        }
    }
    for (const auto& noise : cfg.noise_specs) {
        if (!(noise.label_noise_std >= 0.0)) {
            fail(ErrorCode::config, "field 'noise_specs': label_noise_std must be nonnegative");
        }
    }
    for (std::size_t n : cfg.n_samples) {
        if (n < 2) fail(ErrorCode::config, "field 'n_samples': need at least 2 samples");
    }
    if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0)) {
        fail(ErrorCode::config, "field 'split_ratio' must lie in (0, 1)");
    }
    for (std::size_t w : cfg.widths) {
        if (w == 0) fail(ErrorCode::config, "field 'widths': widths must be positive");
    }
    for (double lr : cfg.learning_rates) {
        if (!(lr > 0.0)) fail(ErrorCode::config, "field 'learning_rates': rates must be positive");
    }
    for (double p : cfg.dropout_rates) {
        if (!(p >= 0.0 && p < 1.0)) fail(ErrorCode::config, "field 'dropout_rates': rates must lie in [0, 1)");
    }
    if (cfg.batch_size == 0) fail(ErrorCode::config, "field 'batch_size' must be positive");
    if (cfg.ig_steps < 1) fail(ErrorCode::config, "field 'ig_steps' must be at least 1");
    if (cfg.workers == 0) fail(ErrorCode::config, "field 'workers' must be at least 1");
    for (const auto& metric : cfg.metrics) {
        if (std::find(kGridMetrics.begin(), kGridMetrics.end(), metric) == kGridMetrics.end()) {
            fail(ErrorCode::config, "field 'metrics': unknown metric '" + metric + "'");
        }
    }
    if (wants(cfg, "convergence_auc")) {
        if (!cfg.record_every || *cfg.record_every == 0) {
            fail(ErrorCode::config, "field 'record_every' must be set when convergence_auc is requested");
        }
        if (cfg.epochs / *cfg.record_every < 2) {
            fail(ErrorCode::config, "field 'record_every': convergence_auc needs at least two recorded epochs");
        }
    }
}

GridConfig grid_config_from_json(const json& doc) {
    static const std::set<std::string> known{
        "function_ids", "noise_specs",  "n_samples",   "split_ratio",         "widths",
        "depths",       "learning_rates", "dropout_rates", "optimizers",      "epochs",
        "batch_size",   "attribution_methods", "metrics", "ig_steps",         "attribution_samples",
        "record_every", "curve_samples", "seeds",      "output_dir",          "workers"};
    if (!doc.is_object()) {
        fail(ErrorCode::config, "grid config must be a JSON object");
    }
    for (const auto& [key, _] : doc.items()) {
        if (!known.contains(key)) {
            fail(ErrorCode::config, "unknown field '" + key + "'");
        }
    }

    GridConfig cfg;
    std::string field;
    try {
        field = "function_ids";
        cfg.function_ids = get_list(doc, "function_ids", cfg.function_ids);
        field = "noise_specs";
        if (doc.contains("noise_specs")) {
            cfg.noise_specs.clear();
            for (const auto& spec : doc.at("noise_specs")) {
                for (const auto& [key, _] : spec.items()) {
                    if (key != "n_noise" && key != "feature_dist" && key != "label_noise_std") {
                        fail(ErrorCode::config, "unknown field 'noise_specs." + key + "'");
                    }
                }
                NoiseSpec noise;
                noise.n_noise = spec.at("n_noise").get<std::size_t>();
                noise.feature_dist = feature_dist_from_string(
                    get_value<std::string>(spec, "feature_dist", std::string(to_string(noise.feature_dist))));
                noise.label_noise_std = get_value(spec, "label_noise_std", 0.01);
                cfg.noise_specs.push_back(noise);
            }
        }
        field = "n_samples";
        cfg.n_samples = get_list(doc, "n_samples", cfg.n_samples);
        field = "split_ratio";
        cfg.split_ratio = get_value(doc, "split_ratio", cfg.split_ratio);
        field = "widths";
        cfg.widths = get_list(doc, "widths", cfg.widths);
        field = "depths";
        cfg.depths = get_list(doc, "depths", cfg.depths);
        field = "learning_rates";
        cfg.learning_rates = get_list(doc, "learning_rates", cfg.learning_rates);
        field = "dropout_rates";
        cfg.dropout_rates = get_list(doc, "dropout_rates", cfg.dropout_rates);
        field = "optimizers";
        if (doc.contains("optimizers")) {
            cfg.optimizers.clear();
            for (const auto& name : get_list<std::string>(doc, "optimizers", {})) {
                cfg.optimizers.push_back(nn::optimizer_from_string(name));
            }
        }
        field = "epochs";
        cfg.epochs = get_value(doc, "epochs", cfg.epochs);
        field = "batch_size";
        cfg.batch_size = get_value(doc, "batch_size", cfg.batch_size);
        field = "attribution_methods";
        if (doc.contains("attribution_methods")) {
            cfg.attribution_methods.clear();
            for (const auto& name : get_list<std::string>(doc, "attribution_methods", {})) {
                cfg.attribution_methods.push_back(attribution::method_from_string(name));
            }
        }
        field = "metrics";
        cfg.metrics = get_list(doc, "metrics", cfg.metrics);
        field = "ig_steps";
        cfg.ig_steps = get_value(doc, "ig_steps", cfg.ig_steps);
        field = "attribution_samples";
        cfg.attribution_samples = get_value(doc, "attribution_samples", cfg.attribution_samples);
        field = "record_every";
        if (doc.contains("record_every") && !doc.at("record_every").is_null()) {
            cfg.record_every = doc.at("record_every").get<std::size_t>();
        }
        field = "curve_samples";
        cfg.curve_samples = get_value(doc, "curve_samples", cfg.curve_samples);
        field = "seeds";
        cfg.seeds = get_list(doc, "seeds", cfg.seeds);
        field = "output_dir";
        cfg.output_dir = get_value<std::string>(doc, "output_dir", cfg.output_dir.string());
        field = "workers";
        cfg.workers = get_value(doc, "workers", cfg.workers);
    } catch (const json::exception& e) {
        fail(ErrorCode::config, "field '" + field + "': " + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        fail(ErrorCode::config, "field '" + field + "': " + e.what());
    }
    validate(cfg);
    return cfg;
}

json grid_config_to_json(const GridConfig& cfg) {
    json doc;
    doc["function_ids"] = cfg.function_ids;
    auto noise = json::array();
    for (const auto& n : cfg.noise_specs) {
        noise.push_back({{"n_noise", n.n_noise},
                         {"feature_dist", std::string(to_string(n.feature_dist))},
                         {"label_noise_std", n.label_noise_std}});
    }
    doc["noise_specs"] = noise;
    doc["n_samples"] = cfg.n_samples;
    doc["split_ratio"] = cfg.split_ratio;
    doc["widths"] = cfg.widths;
    doc["depths"] = cfg.depths;
    doc["learning_rates"] = cfg.learning_rates;
    doc["dropout_rates"] = cfg.dropout_rates;
    auto optimizers = json::array();
    for (auto o : cfg.optimizers) optimizers.push_back(std::string(nn::to_string(o)));
    doc["optimizers"] = optimizers;
    doc["epochs"] = cfg.epochs;
    doc["batch_size"] = cfg.batch_size;
    auto methods = json::array();
    for (auto m : cfg.attribution_methods) methods.push_back(std::string(attribution::to_string(m)));
    doc["attribution_methods"] = methods;
    doc["metrics"] = cfg.metrics;
    doc["ig_steps"] = cfg.ig_steps;
    doc["attribution_samples"] = cfg.attribution_samples;
    doc["record_every"] = cfg.record_every ? json(*cfg.record_every) : json(nullptr);
    doc["curve_samples"] = cfg.curve_samples;
    doc["seeds"] = cfg.seeds;
    doc["output_dir"] = cfg.output_dir.string();
    doc["workers"] = cfg.workers;
    return doc;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::io, "cannot read " + path.string());
    }
    try {
        return grid_config_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        fail(ErrorCode::config, path.string() + ": " + e.what());
    }
}

std::size_t grid_size(const GridConfig& cfg) {
    return cfg.function_ids.size() * cfg.noise_specs.size() * cfg.n_samples.size() * cfg.widths.size() *
           cfg.depths.size() * cfg.learning_rates.size() * cfg.dropout_rates.size() * cfg.optimizers.size() *
           cfg.attribution_methods.size() * cfg.seeds.size();
}

std::filesystem::path run_grid(const GridConfig& cfg, const RunOptions& options) {
    validate(cfg);
    const std::vector<Cell> cells = expand_cells(cfg);
    std::vector<Job> jobs;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::uint64_t seed : cfg.seeds) {
            jobs.push_back({c, seed});
        }
    }
    if (!options.quiet) {
        std::cerr << "grid: " << cells.size() << " model cells x " << cfg.attribution_methods.size()
                  << " methods x " << cfg.seeds.size() << " seeds = " << grid_size(cfg) << " executions\n";
    }

    std::vector<std::size_t> order(jobs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options.execution_order_seed) {
        Rng rng(*options.execution_order_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    std::vector<JobOutput> outputs(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < order.size(); i = next++) {
            const Job& job = jobs[order[i]];
            const Cell& cell = cells[job.cell_index];
            try {
                outputs[order[i]] = run_job(cell, job.seed, cfg);
            } catch (const std::exception& e) {
                const auto tags = cell_tags(cell, cfg);
                JobOutput failed;
                failed.rows.push_back(
                    {join(tags, '|'), tags, job.seed, "-", "error", std::nan(""), "failed", e.what(), 0.0});
                outputs[order[i]] = std::move(failed);
                if (!options.quiet) {
                    std::lock_guard lock(log_mutex);
                    std::cerr << "grid: cell " << join(tags, '|') << " seed " << job.seed << " failed: " << e.what()
                              << '\n';
                }
            }
        }
    };
    const std::size_t n_threads = std::min(cfg.workers, std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n_threads; ++t) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }

    std::filesystem::create_directories(cfg.output_dir);
    const auto results_path = cfg.output_dir / "results.csv";
    {
        std::ofstream out(results_path);
        if (!out) {
            fail(ErrorCode::io, "cannot write " + results_path.string());
        }
        out << "# snrbench results schema v" << kResultsSchemaVersion << '\n';
        out << join(result_columns(), ',') << '\n';
        for (const auto& job : outputs) {
            for (const auto& row : job.rows) {
                out << join(row.tags, ',') << ',' << row.seed << ',' << row.method << ',' << row.metric << ','
                    << (std::isnan(row.value) ? std::string("nan") : format_double(row.value)) << ',' << row.status
                    << ',' << csv_escape(row.message) << '\n';
            }
        }
    }
    {
        std::ofstream out(cfg.output_dir / "timings.csv");
        out << "cell_key,seed,phase,wall_time_s,bytes\n";
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            const auto key = join(cell_tags(cells[jobs[j].cell_index], cfg), '|');
            for (const auto& t : outputs[j].timings) {
                out << key << ',' << jobs[j].seed << ',' << t.phase << ',' << t.wall_time_s << ',' << t.bytes
                    << '\n';
            }
        }
    }
    {
        // Mean over seeds per (cell, method, metric), plus the ratio to SA
        // for attribution metrics.
        struct Acc {
            std::vector<std::string> tags;
            std::vector<double> values;
        };
        std::map<std::tuple<std::size_t, std::string, std::string>, Acc> groups;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            for (const auto& row : outputs[j].rows) {
                if (row.status != "ok") continue;
                auto& acc = groups[{jobs[j].cell_index, row.method, row.metric}];
                acc.tags = row.tags;
                acc.values.push_back(row.value);
            }
        }
        const auto mean_of = [](const std::vector<double>& v) {
            return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        };
        std::ofstream out(cfg.output_dir / "summary.csv");
        out << join(kTagColumns, ',') << ",method,metric,mean,std,n,relative_to_sa\n";
        for (const auto& [key, acc] : groups) {
            const auto& [cell_index, method, metric] = key;
            const double mean = mean_of(acc.values);
            double var = 0.0;
            for (double v : acc.values) var += (v - mean) * (v - mean);
            const double sd = acc.values.size() > 1 ? std::sqrt(var / static_cast<double>(acc.values.size() - 1)) : 0.0;
            std::string relative;
            if (method != "-") {
                const auto sa = groups.find({cell_index, "sa", metric});
                if (sa != groups.end() && mean_of(sa->second.values) != 0.0) {
                    relative = format_double(mean / mean_of(sa->second.values));
                }
            }
            out << join(acc.tags, ',') << ',' << method << ',' << metric << ',' << format_double(mean) << ','
                << format_double(sd) << ',' << acc.values.size() << ',' << relative << '\n';
        }
    }
    {
        std::ofstream out(cfg.output_dir / "resolved_config.json");
        out << grid_config_to_json(cfg).dump(2) << '\n';
    }
    return results_path;
}

}  // namespace snrbench::bench
