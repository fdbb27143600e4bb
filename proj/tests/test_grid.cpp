#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "snrbench/bench/grid.hpp"
#include "snrbench/error.hpp"

using namespace snrbench;
using namespace snrbench::bench;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("snrbench_grid_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    lines.erase(lines.begin());  // header
    return lines;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

GridConfig tiny_config(const fs::path& out) {
    return grid_config_from_json(json{{"function_ids", {2, 7}},
                                      {"noise_specs", {{{"n_noise", 3}}, {{"n_noise", 5}, {"label_noise_std", 0.0}}}},
                                      {"n_samples", {120}},
                                      {"widths", {8}},
                                      {"depths", {2}},
                                      {"epochs", 4},
                                      {"batch_size", 32},
                                      {"metrics", {"uscore", "mae", "fprec", "consistency", "convergence_auc"}},
                                      {"record_every", 2},
                                      {"curve_samples", 10},
                                      {"seeds", {0, 1}},
                                      {"output_dir", out.string()}});
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::io;
}

}  // namespace

TEST_CASE("grid size is the product of the sweep axes") {
    GridConfig cfg;
    cfg.function_ids = {1, 2};
    cfg.noise_specs = {NoiseSpec{10}, NoiseSpec{20}, NoiseSpec{50}};
    CHECK(cfg.attribution_methods.size() == 4);
    CHECK(cfg.seeds.size() == 5);
    CHECK(grid_size(cfg) == 120);
    cfg.learning_rates = {1e-3, 1e-2};
    CHECK(grid_size(cfg) == 240);
}

TEST_CASE("config parsing rejects bad fields by name") {
    const auto message_of = [](const json& doc) {
        try {
            grid_config_from_json(doc);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::config);
            return std::string(e.what());
        }
        FAIL("config accepted");
        return std::string();
    };
    CHECK(message_of(json{{"widthz", {3}}}).find("widthz") != std::string::npos);
    CHECK(message_of(json{{"function_ids", {16}}}).find("function_ids") != std::string::npos);
    CHECK(message_of(json{{"seeds", json::array()}}).find("seeds") != std::string::npos);
    CHECK(message_of(json{{"learning_rates", {-1.0}}}).find("learning_rates") != std::string::npos);
    CHECK(message_of(json{{"epochs", "many"}}).find("epochs") != std::string::npos);
    CHECK(message_of(json{{"attribution_methods", {"lime"}}}).find("attribution_methods") != std::string::npos);
    CHECK(message_of(json{{"metrics", {"iou"}}}).find("metrics") != std::string::npos);
    CHECK(message_of(json{{"metrics", {"convergence_auc"}}}).find("record_every") != std::string::npos);
    CHECK(message_of(json{{"noise_specs", {{{"n_noise", 3}, {"sigma", 1}}}}}).find("noise_specs.sigma") !=
          std::string::npos);
    CHECK(message_of(json::array()).find("object") != std::string::npos);
}

TEST_CASE("config round trips through JSON with defaults echoed") {
    const GridConfig defaults = grid_config_from_json(json::object());
    const json doc = grid_config_to_json(defaults);
    CHECK(doc.at("epochs") == 1000);
    CHECK(doc.at("widths") == json{100});
    CHECK(doc.at("noise_specs")[0].at("feature_dist") == "clipped_normal");
    CHECK(grid_config_to_json(grid_config_from_json(doc)) == doc);
}

TEST_CASE("grid output is deterministic and independent of execution order") {
    TempDir dir;
    auto cfg = tiny_config(dir.path / "a");
    const auto first = run_grid(cfg, {std::nullopt, true});
    cfg.output_dir = dir.path / "b";
    const auto second = run_grid(cfg, {std::nullopt, true});
    cfg.output_dir = dir.path / "c";
    cfg.workers = 3;
    const auto shuffled = run_grid(cfg, {12345, true});

    const std::string a = slurp(first);
    CHECK(a == slurp(second));
    CHECK(a == slurp(shuffled));
    CHECK(a.rfind("# snrbench results schema v1\n", 0) == 0);
    CHECK(slurp(dir.path / "a" / "summary.csv") == slurp(dir.path / "c" / "summary.csv"));
    CHECK(fs::exists(dir.path / "a" / "timings.csv"));
    CHECK(json::parse(slurp(dir.path / "a" / "resolved_config.json")).at("epochs") == 4);

    // 4 model cells x 2 seeds; each job emits 2 model rows and 3 rows per method
    const auto lines = data_lines(a);
    CHECK(lines.size() == 4 * 2 * (2 + 3 * 4));
    for (const auto& line : lines) {
        const auto fields = split(line);
        REQUIRE(fields.size() == result_columns().size());
        CHECK(fields[fields.size() - 2] == "ok");
    }
}

TEST_CASE("a failing cell is isolated") {
    TempDir dir;
    auto cfg = tiny_config(dir.path);
    cfg.function_ids = {2};
    cfg.noise_specs = {NoiseSpec{2}};
    cfg.n_samples = {2, 60};  // two samples leave an empty validation split
    cfg.metrics = {"uscore", "fprec"};
    cfg.record_every.reset();
    const auto lines = data_lines(slurp(run_grid(cfg, {std::nullopt, true})));
    std::size_t failed = 0, ok = 0;
    for (const auto& line : lines) {
        const auto fields = split(line);
        if (fields[4] == "2") {
            CHECK(fields[fields.size() - 2] == "failed");
            CHECK(fields[fields.size() - 4] == "error");
            CHECK(fields[fields.size() - 3] == "nan");
            CHECK(fields.back().find("validation") != std::string::npos);
            ++failed;
        } else {
            CHECK(fields[fields.size() - 2] == "ok");
            ++ok;
        }
    }
    CHECK(failed == 2);
    CHECK(ok == 2 * (1 + 4));
}

TEST_CASE("the default cell emits UScore and four FPrec rows per seed") {
    TempDir dir;
    GridConfig cfg;  // 10,000 samples, 100 noise features, width 100, depth 3, lr 1e-3
    cfg.epochs = 1;
    cfg.attribution_samples = 50;
    cfg.seeds = {0};
    cfg.output_dir = dir.path;
    const auto lines = data_lines(slurp(run_grid(cfg, {std::nullopt, true})));
    REQUIRE(lines.size() == 5);
    const auto first = split(lines[0]);
    CHECK(first[0] == "2");
    CHECK(first[1] == "100");
    CHECK(first[4] == "10000");
    CHECK(first[6] == "100");
    CHECK(first[7] == "3");
    CHECK(first[8] == "0.001");
    CHECK(first[first.size() - 4] == "uscore");
    std::vector<std::string> methods;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i]);
        CHECK(f[f.size() - 4] == "fprec");
        methods.push_back(f[f.size() - 5]);
    }
    CHECK(methods == std::vector<std::string>{"sa", "ig", "dl", "fa"});
}

TEST_CASE("load_grid_config reports io and parse problems") {
    TempDir dir;
    CHECK(code_of([&] { load_grid_config(dir.path / "missing.json"); }) == ErrorCode::io);
    std::ofstream(dir.path / "bad.json") << "{ not json";
    CHECK(code_of([&] { load_grid_config(dir.path / "bad.json"); }) == ErrorCode::config);
}
