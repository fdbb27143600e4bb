// snrbench command line: dataset synthesis, training, attribution, grid
// sweeps, RFE and CSV ingestion.
//
// Every subcommand except `grid` accepts --config <json>: a flat object whose
// keys are long option names ("n-noise": 10). Flags given on the command
// line win over the file. For `grid`, --config is the grid definition itself.
//
// Failures exit nonzero and print one line on stderr:
//   error: {"code":"config_error","message":"..."}

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snrbench/attribution/attribution.hpp"
#include "snrbench/bench/dataset_io.hpp"
#include "snrbench/bench/grid.hpp"
#include "snrbench/error.hpp"
#include "snrbench/metrics/metrics.hpp"
#include "snrbench/nn/checkpoint.hpp"
#include "snrbench/nn/train.hpp"
#include "snrbench/rfe/rfe.hpp"
#include "snrbench/symfunc/dataset.hpp"

namespace {

using nlohmann::json;
using namespace snrbench;

void print_error(std::string_view code, std::string_view message) {
    std::cerr << "error: " << json{{"code", code}, {"message", message}}.dump() << '\n';
}

// Splices `--key value` pairs from a JSON config file into argv, skipping
// keys already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    if (args.size() < 2 || args[1] == "grid") {
        return args;
    }
    std::optional<std::string> path;
    std::set<std::string> given;
    for (std::size_t i = 2; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            --i;
            continue;
        }
        if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            --i;
            continue;
        }
        if (a.rfind("--", 0) == 0) {
            given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
        }
    }
    if (!path) {
        return args;
    }
    std::ifstream in(*path);
    if (!in) {
        fail(ErrorCode::io, "cannot read " + *path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorCode::config, *path + ": " + e.what());
    }
    if (!doc.is_object()) {
        fail(ErrorCode::config, *path + ": config must be a JSON object");
    }
    const auto scalar = [&](const std::string& key, const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number() || v.is_boolean()) return v.dump();
        fail(ErrorCode::config, "field '" + key + "' must be a scalar or a list of scalars");
    };
    for (const auto& [key, value] : doc.items()) {
        if (given.contains(key)) {
            continue;
        }
        args.push_back("--" + key);
        if (value.is_array()) {
            for (const auto& v : value) args.push_back(scalar(key, v));
        } else {
            args.push_back(scalar(key, value));
        }
    }
    return args;
}

struct TrainOptions {
    std::vector<std::size_t> hidden{100, 100, 100};
    double dropout = 0.0;
    std::size_t epochs = 1000;
    double learning_rate = 1e-3;
    std::size_t batch_size = 128;
    std::string optimizer = "adam";
    std::string loss = "mse";

    nn::TrainConfig config(std::uint64_t seed) const {
        nn::TrainConfig cfg;
        cfg.optimizer = nn::optimizer_from_string(optimizer);
        cfg.learning_rate = learning_rate;
        cfg.epochs = epochs;
        cfg.batch_size = batch_size;
        cfg.loss = nn::loss_from_string(loss);
        cfg.seed = seed;
        nn::validate(cfg);
        return cfg;
    }
};

void add_train_options(CLI::App* cmd, TrainOptions& t) {
    cmd->add_option("--hidden", t.hidden, "hidden layer widths")->capture_default_str();
    cmd->add_option("--dropout", t.dropout, "dropout rate on hidden layers")->capture_default_str();
    cmd->add_option("--epochs", t.epochs)->capture_default_str();
    cmd->add_option("--learning-rate", t.learning_rate)->capture_default_str();
    cmd->add_option("--batch-size", t.batch_size)->capture_default_str();
    cmd->add_option("--optimizer", t.optimizer)->check(CLI::IsMember({"adam", "sgd"}))->capture_default_str();
    cmd->add_option("--loss", t.loss)->check(CLI::IsMember({"mse", "bce"}))->capture_default_str();
}

json metrics_json(const std::vector<metrics::MetricRecord>& records) {
    json out = json::object();
    for (const auto& r : records) out[r.name] = r.value;
    return out;
}

std::vector<std::size_t> rows_of(const TabularDataset& data, const std::string& which) {
    if (which == "train") return data.train_rows();
    if (which == "validation") return data.validation_rows();
    std::vector<std::size_t> all(data.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

int run(int argc, char** argv) {
    CLI::App app{"snrbench: attribution benchmarks on synthetic and tabular data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "snrbench 0.1.0");

    std::uint64_t seed = 0;
    std::string out;

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize a dataset from a symbolic formula");
    int function_id = 0;
    NoiseSpec noise{10, FeatureDist::clipped_normal, 0.01, 0};
    std::string feature_dist = "clipped_normal";
    std::size_t n_samples = 1000;
    double split_ratio = 0.8;
    gen->add_option("--function-id", function_id, "formula id 1..15")->required();
    gen->add_option("--n-noise", noise.n_noise)->capture_default_str();
    gen->add_option("--feature-dist", feature_dist)
        ->check(CLI::IsMember({"std_normal", "clipped_normal"}))
        ->capture_default_str();
    gen->add_option("--label-noise-std", noise.label_noise_std)->capture_default_str();
    gen->add_option("--n-samples", n_samples)->capture_default_str();
    gen->add_option("--split-ratio", split_ratio)->capture_default_str();
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--out", out, "CSV path; the annotation sidecar goes next to it")->required();
    gen->callback([&] {
        noise.feature_dist = feature_dist_from_string(feature_dist);
        noise.seed = seed;
        const auto data = generate_dataset(function_id, noise, n_samples, split_ratio);
        bench::save_dataset(data, out);
        std::cout << json{{"csv", out},
                          {"sidecar", bench::sidecar_path(out).string()},
                          {"rows", data.rows()},
                          {"features", data.cols()},
                          {"predictive_indices", data.predictive_indices}}
                         .dump()
                  << '\n';
    });

    // train
    auto* tr = app.add_subcommand("train", "train a network on a saved dataset");
    std::string data_path;
    TrainOptions topts;
    tr->add_option("--data", data_path, "dataset CSV with sidecar")->required();
    add_train_options(tr, topts);
    tr->add_option("--seed", seed, "initialization, shuffling and dropout seed")->capture_default_str();
    tr->add_option("--out", out, "checkpoint JSON path")->required();
    tr->callback([&] {
        const auto data = bench::load_dataset(data_path, bench::AnnotationPolicy::optional);
        const rfe::NetworkSpec network{topts.hidden, topts.dropout};
        auto fit = rfe::fit_and_evaluate(data, network, topts.config(seed));
        nn::save_checkpoint(fit.model, out);
        std::cout << json{{"checkpoint", out},
                          {"final_loss", fit.report.per_epoch_loss.empty() ? json(nullptr)
                                                                            : json(fit.report.per_epoch_loss.back())},
                          {"validation", metrics_json(fit.validation_metrics)},
                          {"wall_time_s", fit.report.wall_time_s},
                          {"peak_bytes", fit.report.peak_bytes}}
                         .dump()
                  << '\n';
    });

    // attribute
    auto* at = app.add_subcommand("attribute", "attribute predictions of a checkpoint");
    std::string model_path;
    std::vector<std::string> methods{"sa", "ig", "dl", "fa"};
    int ig_steps = attribution::kDefaultIgSteps;
    std::string which_rows = "validation";
    std::size_t target = 0;
    at->add_option("--model", model_path, "checkpoint JSON")->required();
    at->add_option("--data", data_path, "dataset CSV")->required();
    at->add_option("--method", methods)->check(CLI::IsMember({"sa", "ig", "dl", "fa"}))->capture_default_str();
    at->add_option("--ig-steps", ig_steps)->capture_default_str();
    at->add_option("--rows", which_rows)->check(CLI::IsMember({"train", "validation", "all"}))->capture_default_str();
    at->add_option("--target", target, "output unit")->capture_default_str();
    at->add_option("--out", out, "attribution CSV (sample_id,method,feature_index,value)")->required();
    at->callback([&] {
        auto model = nn::load_checkpoint(model_path);
        const auto data = bench::load_dataset(data_path, bench::AnnotationPolicy::optional);
        const auto rows = rows_of(data, which_rows);
        if (rows.empty()) fail(ErrorCode::empty_data, "no rows in the '" + which_rows + "' split");
        const Eigen::MatrixXd inputs = gather_columns(data, rows);
        std::ofstream csv(out);
        if (!csv) fail(ErrorCode::io, "cannot write " + out);
        bench::write_attribution_header(csv);
        json summary = json::object();
        for (const auto& name : methods) {
            const auto method = attribution::method_from_string(name);
            const auto attribs = attribution::attribute_batch(model, inputs, method, target, ig_steps);
            for (std::size_t j = 0; j < attribs.size(); ++j) bench::write_attribution_rows(csv, rows[j], attribs[j]);
            if (!data.predictive_indices.empty()) {
                summary[name] = {{"fprec", metrics::mean_fprec(attribs, data.predictive_indices)},
                                 {"consistency", metrics::consistency(attribs, data.predictive_indices.size())}};
            }
        }
        std::cout << json{{"attributions", out}, {"rows", rows.size()}, {"summary", summary}}.dump() << '\n';
    });

    // grid
    auto* grid = app.add_subcommand("grid", "run a (model x attribution x noise) sweep");
    std::string config_path;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> grid_seed;
    grid->add_option("--config", config_path, "grid definition JSON")->required();
    grid->add_option("--workers", workers, "override the worker count");
    grid->add_option("--seed", grid_seed, "run a single seed instead of the configured list");
    grid->add_option("--out", out, "override the output directory");
    grid->callback([&] {
        auto cfg = bench::load_grid_config(config_path);
        if (workers) cfg.workers = *workers;
        if (grid_seed) cfg.seeds = {*grid_seed};
        if (!out.empty()) cfg.output_dir = out;
        bench::validate(cfg);
        const auto results = bench::run_grid(cfg);
        std::cout << json{{"results", results.string()}, {"executions", bench::grid_size(cfg)}}.dump() << '\n';
    });

    // rfe
    auto* rf = app.add_subcommand("rfe", "recursive feature elimination");
    std::string explainer = "sa";
    std::string strategy = "uni";
    double drop_rate = 0.5;
    std::size_t target_k = 3;
    TrainOptions ropts;
    rf->add_option("--data", data_path, "dataset CSV")->required();
    rf->add_option("--explainer", explainer, "sa, ig, dl, fa, or coef for the linear baseline")
        ->check(CLI::IsMember({"sa", "ig", "dl", "fa", "coef"}))
        ->capture_default_str();
    rf->add_option("--strategy", strategy)->check(CLI::IsMember({"uni", "bi"}))->capture_default_str();
    rf->add_option("--drop-rate", drop_rate)->capture_default_str();
    rf->add_option("--k", target_k, "number of features to keep")->capture_default_str();
    rf->add_option("--ig-steps", ig_steps)->capture_default_str();
    add_train_options(rf, ropts);
    rf->add_option("--seed", seed)->capture_default_str();
    rf->add_option("--out", out, "trajectory JSON path")->required();
    rf->callback([&] {
        const auto data = bench::load_dataset(data_path, bench::AnnotationPolicy::optional);
        rfe::RfeConfig cfg;
        cfg.drop_rate = drop_rate;
        cfg.target_k = target_k;
        cfg.explainer = rfe::explainer_from_string(explainer);
        cfg.strategy = rfe::strategy_from_string(strategy);
        cfg.inner_train = ropts.config(seed);
        cfg.network = {ropts.hidden, ropts.dropout};
        cfg.ig_steps = ig_steps;
        cfg.seed = seed;
        const auto result = cfg.explainer == rfe::Explainer::coef ? rfe::rfe_linear(data, cfg) : rfe::rfewna(data, cfg);
        std::ofstream file(out);
        if (!file) fail(ErrorCode::io, "cannot write " + out);
        file << rfe::trajectory_json(result).dump(2) << '\n';
        std::cout << json{{"trajectory", out},
                          {"final_selected", result.final_selected},
                          {"final_metrics", metrics_json(result.final_model_metrics)}}
                         .dump()
                  << '\n';
    });

    // ingest
    auto* ing = app.add_subcommand("ingest", "convert an external numeric CSV into the dataset format");
    std::string input;
    bench::IngestOptions iopts;
    std::string scaling = "minmax";
    std::string balance = "none";
    ing->add_option("--input", input, "CSV with a header row")->required();
    ing->add_option("--label-column", iopts.label_column, "defaults to the last column");
    ing->add_option("--scaling", scaling)->check(CLI::IsMember({"minmax", "none"}))->capture_default_str();
    ing->add_option("--balance", balance)->check(CLI::IsMember({"undersample", "none"}))->capture_default_str();
    ing->add_option("--split-ratio", iopts.split_ratio)->capture_default_str();
    ing->add_option("--seed", seed)->capture_default_str();
    ing->add_option("--out", out, "output CSV path")->required();
    ing->callback([&] {
        iopts.scaling = bench::scaling_from_string(scaling);
        iopts.balance = bench::balance_from_string(balance);
        iopts.seed = seed;
        const auto data = bench::load_tabular_csv(input, iopts);
        bench::save_dataset(data, out);
        std::cout << json{{"csv", out},
                          {"rows", data.rows()},
                          {"features", data.cols()},
                          {"task", std::string(to_string(data.task))}}
                         .dump()
                  << '\n';
    });

    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> expanded;
    for (const auto& a : args) expanded.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(expanded.size()), expanded.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage_error", e.what());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const snrbench::Error& e) {
        print_error(snrbench::to_string(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal_error", e.what());
        return 1;
    }
}
