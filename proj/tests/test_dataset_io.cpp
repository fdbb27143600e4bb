#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "snrbench/bench/dataset_io.hpp"
#include "snrbench/error.hpp"

using namespace snrbench;
using namespace snrbench::bench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("snrbench_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
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

TEST_CASE("format_double round trips") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1e3);
    for (int i = 0; i < 10000; ++i) {
        const double v = n(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
    CHECK(code_of([] { parse_double("1.5x"); }) == ErrorCode::parse);
}

TEST_CASE("save_dataset and load_dataset round trip bit-exactly") {
    TempDir dir;
    for (int id : {2, 10, 15}) {
        const auto data = generate_dataset(id, NoiseSpec{6, FeatureDist::std_normal, 0.01, 7}, 120, 0.8);
        const auto path = dir.path / ("f" + std::to_string(id) + ".csv");
        save_dataset(data, path);
        CHECK(fs::exists(sidecar_path(path)));
        const auto loaded = load_dataset(path);
        CHECK(loaded == data);
    }
}

TEST_CASE("missing or mismatched sidecars") {
    TempDir dir;
    const auto data = generate_dataset(7, NoiseSpec{2, FeatureDist::clipped_normal, 0.0, 7}, 30, 0.8);
    const auto path = dir.path / "d.csv";
    save_dataset(data, path);

    fs::remove(sidecar_path(path));
    CHECK(code_of([&] { load_dataset(path); }) == ErrorCode::missing_annotation);

    const auto degraded = load_dataset(path, AnnotationPolicy::optional);
    CHECK(degraded.predictive_indices.empty());
    CHECK(degraded.features == data.features);
    CHECK(degraded.targets == data.targets);
    CHECK(degraded.validation_rows().empty());

    save_dataset(data, path);
    auto text = [&] {
        std::ifstream in(sidecar_path(path));
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }();
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "\"format_version\": 7");
    write_file(sidecar_path(path), text);
    CHECK(code_of([&] { load_dataset(path); }) == ErrorCode::version_mismatch);
}

TEST_CASE("load_tabular_csv scales with training rows only") {
    TempDir dir;
    std::string csv = "a,b,const,label\n";
    for (int r = 0; r < 50; ++r) {
        csv += std::to_string(r * 3 - 40) + "," + std::to_string(r % 7) + ",5," + std::to_string(r % 2) + "\n";
    }
    write_file(dir.path / "t.csv", csv);
    IngestOptions opts;
    opts.seed = 4;
    const auto data = load_tabular_csv(dir.path / "t.csv", opts);
    CHECK(data.cols() == 3);
    CHECK(data.feature_names == std::vector<std::string>{"a", "b", "const"});
    CHECK(data.task == Task::classification);
    CHECK(data.predictive_indices.empty());
    for (std::size_t r : data.train_rows()) {
        for (Eigen::Index c = 0; c < 3; ++c) {
            const double v = data.features(static_cast<Eigen::Index>(r), c);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(data.features(static_cast<Eigen::Index>(r), 2) == 0.0);
    }
    double lo = 1.0, hi = 0.0;
    for (std::size_t r : data.train_rows()) {
        lo = std::min(lo, data.features(static_cast<Eigen::Index>(r), 0));
        hi = std::max(hi, data.features(static_cast<Eigen::Index>(r), 0));
    }
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);

    opts.label_column = "b";
    opts.scaling = Scaling::none;
    const auto by_name = load_tabular_csv(dir.path / "t.csv", opts);
    CHECK(by_name.feature_names == std::vector<std::string>{"a", "const", "label"});
    CHECK(by_name.task == Task::regression);
    CHECK(by_name.targets[3] == 3.0);
}

TEST_CASE("undersampling balances the classes") {
    TempDir dir;
    // 3,008 positives at a 4% minority rate: 75,200 rows in total.
    const int total = 75200;
    const int positives = 3008;
    std::string csv = "f0,f1,target\n";
    csv.reserve(static_cast<std::size_t>(total) * 16);
    std::mt19937_64 rng(3);
    std::vector<int> labels(total, 0);
    std::fill(labels.begin(), labels.begin() + positives, 1);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (int r = 0; r < total; ++r) {
        csv += std::to_string(r % 97) + "," + std::to_string(r % 13) + "," + std::to_string(labels[r]) + "\n";
    }
    write_file(dir.path / "imb.csv", csv);
    IngestOptions opts;
    opts.balance = Balance::undersample;
    opts.seed = 9;
    const auto data = load_tabular_csv(dir.path / "imb.csv", opts);
    CHECK(data.rows() == 6016);
    const auto ones = std::count(data.targets.begin(), data.targets.end(), 1.0);
    CHECK(ones == 3008);
    CHECK(data.rows() - static_cast<std::size_t>(ones) == 3008);
}

TEST_CASE("parse errors name the row and column") {
    TempDir dir;
    write_file(dir.path / "bad.csv", "a,b,y\n1,2,0\n3,oops,1\n");
    try {
        load_tabular_csv(dir.path / "bad.csv", IngestOptions{});
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse);
        const std::string msg = e.what();
        CHECK(msg.find("oops") != std::string::npos);
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("column") != std::string::npos);
    }
    write_file(dir.path / "ragged.csv", "a,b,y\n1,2\n");
    CHECK(code_of([&] { load_tabular_csv(dir.path / "ragged.csv", IngestOptions{}); }) == ErrorCode::parse);
    write_file(dir.path / "ms.csv", "a,y\n1,0\n2,1\n3,0.5\n");
    IngestOptions opts;
    opts.balance = Balance::undersample;
    CHECK(code_of([&] { load_tabular_csv(dir.path / "ms.csv", opts); }) == ErrorCode::invalid_target);
    CHECK(code_of([&] { load_tabular_csv(dir.path / "none.csv", IngestOptions{}); }) == ErrorCode::io);
}

TEST_CASE("attribution rows") {
    std::ostringstream out;
    write_attribution_header(out);
    attribution::AttributionVector a;
    a.values = {0.5, -1.25};
    a.method = attribution::Method::ig;
    write_attribution_rows(out, 3, a);
    CHECK(out.str() == "sample_id,method,feature_index,value\n3,ig,0,0.5\n3,ig,1,-1.25\n");
}
