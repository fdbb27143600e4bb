#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>

#include "snrbench/error.hpp"
#include "snrbench/nn/checkpoint.hpp"
#include "snrbench/nn/mlp.hpp"
#include "support.hpp"

using namespace snrbench;
using namespace snrbench::nn;
using snrbench::testing::column;

namespace {

MlpModel linear_model(std::vector<double> w, double b = 0.0) {
    const std::vector<std::size_t> widths{w.size(), 1};
    auto model = mlp_new(widths, 0.0, 0);
    for (std::size_t i = 0; i < w.size(); ++i) model.layers[0].weights(0, static_cast<Eigen::Index>(i)) = w[i];
    model.layers[0].biases(0) = b;
    model.mode = Mode::eval;
    return model;
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

TEST_CASE("mlp_new shapes and initialization range") {
    const std::vector<std::size_t> tiny{2, 1};
    const auto m = mlp_new(tiny, 0.0, 3);
    REQUIRE(m.layers.size() == 1);
    CHECK(m.layers[0].weights.rows() == 1);
    CHECK(m.layers[0].weights.cols() == 2);
    CHECK(m.layers[0].biases.size() == 1);

    const std::vector<std::size_t> deep{11, 100, 100, 100, 1};
    const auto d = mlp_new(deep, 0.0, 3);
    REQUIRE(d.layers.size() == 4);
    CHECK(d.layers[1].weights.rows() == 100);
    CHECK(d.layers[3].weights.cols() == 100);
    CHECK(d.parameter_count() == 11 * 100 + 100 + 2 * (100 * 100 + 100) + 100 + 1);
    for (const auto& layer : d.layers) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.weights.cols()));
        CHECK(layer.weights.cwiseAbs().maxCoeff() <= bound);
        CHECK(layer.biases.isZero());
    }
}

TEST_CASE("mlp_new is deterministic in the seed") {
    const std::vector<std::size_t> widths{5, 7, 3, 1};
    const auto a = mlp_new(widths, 0.1, 42);
    const auto b = mlp_new(widths, 0.1, 42);
    const auto c = mlp_new(widths, 0.1, 43);
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        CHECK(a.layers[l].weights == b.layers[l].weights);
    }
    CHECK(a.layers[0].weights != c.layers[0].weights);
}

TEST_CASE("mlp_new rejects bad architectures") {
    CHECK(code_of([] { mlp_new(std::vector<std::size_t>{}, 0.0, 0); }) == ErrorCode::invalid_architecture);
    CHECK(code_of([] { mlp_new(std::vector<std::size_t>{3}, 0.0, 0); }) == ErrorCode::invalid_architecture);
    CHECK(code_of([] { mlp_new(std::vector<std::size_t>{3, 0, 1}, 0.0, 0); }) == ErrorCode::invalid_architecture);
    CHECK(code_of([] { mlp_new(std::vector<std::size_t>{3, 1}, 1.0, 0); }) == ErrorCode::invalid_architecture);
}

TEST_CASE("forward on a linear layer") {
    const auto m = linear_model({2.0, -1.0});
    CHECK(predict(m, std::vector<double>{1.0, 1.0})(0) == 1.0);
    CHECK(code_of([&] { predict(m, std::vector<double>{1.0}); }) == ErrorCode::shape);
}

TEST_CASE("eval-mode forward ignores the generator") {
    const std::vector<std::size_t> widths{4, 16, 16, 1};
    const auto m = mlp_new(widths, 0.5, 1);
    const std::vector<double> x{0.3, -0.2, 0.9, 0.1};
    Rng r1(1), r2(999);
    const auto a = forward(m, x, Mode::eval, &r1);
    const auto b = forward(m, x, Mode::eval, &r2);
    const auto c = forward(m, x, Mode::eval, nullptr);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(code_of([&] { forward(m, x, Mode::train, nullptr); }) == ErrorCode::parameter);
}

TEST_CASE("all-negative preactivations leave only the output bias") {
    const std::vector<std::size_t> widths{3, 5, 4, 1};
    auto m = mlp_new(widths, 0.0, 7);
    m.layers[0].weights.setZero();
    m.layers[0].biases.setConstant(-1.0);
    m.layers[1].biases.setConstant(-0.5);
    m.layers[2].biases(0) = 0.125;
    m.mode = Mode::eval;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        CHECK(predict(m, snrbench::testing::random_input(rng, 3))(0) == 0.125);
    }
    // and a dead network has zero input gradient
    CHECK(input_gradient(m, std::vector<double>{0.1, 0.2, 0.3}, 0) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("input_gradient on a linear model") {
    const auto m = linear_model({2.0, -1.0}, 0.3);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        CHECK(input_gradient(m, snrbench::testing::random_input(rng, 2, 5.0), 0) == std::vector<double>{2.0, -1.0});
    }
    CHECK(code_of([&] { input_gradient(m, std::vector<double>{1.0, 1.0}, 1); }) == ErrorCode::index);
}

TEST_CASE("input_gradient is pure") {
    std::mt19937_64 rng(8);
    const auto m = snrbench::testing::random_mlp(rng);
    const auto x = snrbench::testing::random_input(rng, m.input_width());
    CHECK(input_gradient(m, x, 0) == input_gradient(m, x, 0));
}

TEST_CASE("input_gradient matches central differences") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int net = 0; net < 10; ++net) {
        const auto m = snrbench::testing::random_mlp(rng);
        for (int p = 0; p < 100; ++p) {
            const auto x = snrbench::testing::random_input(rng, m.input_width());
            if (snrbench::testing::kink_margin(m, x) < 2e-3) continue;
            CHECK(snrbench::testing::input_gradient_error(m, x) < 1e-4);
            ++checked;
        }
    }
    CHECK(checked > 200);
}

TEST_CASE("input_gradient_batch agrees with the single-sample path") {
    std::mt19937_64 rng(31);
    const auto m = snrbench::testing::random_mlp(rng, 16, 3, 2);
    Matrix inputs = Matrix::Random(static_cast<Eigen::Index>(m.input_width()), 6);
    const Matrix batch = input_gradient_batch(m, inputs, 1);
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
        const std::vector<double> x(inputs.col(j).data(), inputs.col(j).data() + inputs.rows());
        const auto single = input_gradient(m, x, 1);
        for (std::size_t i = 0; i < single.size(); ++i) {
            CHECK(batch(static_cast<Eigen::Index>(i), j) == doctest::Approx(single[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("parameter gradients match central differences") {
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int net = 0; net < 40; ++net) {
        const auto m = snrbench::testing::random_mlp(rng, 12, 3);
        const Eigen::Index batch = 3;
        Matrix inputs(static_cast<Eigen::Index>(m.input_width()), batch);
        bool safe = true;
        for (Eigen::Index j = 0; j < batch; ++j) {
            const auto x = snrbench::testing::random_input(rng, m.input_width());
            inputs.col(j) = column(x);
            safe = safe && snrbench::testing::kink_margin(m, x) > 2e-3;
        }
        if (!safe) continue;
        Vector regression = Vector::Random(batch);
        Vector labels(batch);
        for (Eigen::Index j = 0; j < batch; ++j) labels(j) = j % 2;
        CHECK(snrbench::testing::parameter_gradient_error(m, inputs, regression, Loss::mse) < 1e-4);
        CHECK(snrbench::testing::parameter_gradient_error(m, inputs, labels, Loss::bce) < 1e-4);
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("bce loss is numerically stable for large logits") {
    Matrix out(1, 2);
    out << 800.0, -800.0;
    Vector y(2);
    y << 0.0, 1.0;
    CHECK(loss_value(out, y, Loss::bce) == doctest::Approx(800.0));
    y << 1.0, 0.0;
    CHECK(loss_value(out, y, Loss::bce) == doctest::Approx(0.0));
}

TEST_CASE("train-mode dropout matches eval-mode output in expectation") {
    // One hidden layer: the output is linear in the masked activations, so
    // the expectation over masks is exactly the eval-mode output.
    const std::vector<std::size_t> widths{3, 8, 1};
    auto m = mlp_new(widths, 0.5, 12);
    for (auto& layer : m.layers) layer.biases.setConstant(0.05);
    const std::vector<double> x{0.7, -0.4, 0.9};
    const double expected = predict(m, x)(0);

    Rng rng(2);
    const int draws = 20000;
    double sum = 0.0, sum_sq = 0.0;
    const Matrix input = column(x);
    for (int d = 0; d < draws; ++d) {
        const double y = forward_batch(m, input, Mode::train, &rng)(0, 0);
        sum += y;
        sum_sq += y * y;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
    CAPTURE(mean);
    CAPTURE(expected);
    CAPTURE(se);
    CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("checkpoint round trip is bit exact") {
    const std::vector<std::size_t> widths{4, 9, 2};
    const auto m = mlp_new(widths, 0.25, 5);
    const auto path = std::filesystem::temp_directory_path() / "snrbench_test_checkpoint.json";
    save_checkpoint(m, path);
    const auto loaded = load_checkpoint(path);
    std::filesystem::remove(path);
    CHECK(loaded.layer_widths == m.layer_widths);
    CHECK(loaded.dropout_rate == m.dropout_rate);
    CHECK(loaded.mode == Mode::eval);
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        CHECK(loaded.layers[l].weights == m.layers[l].weights);
        CHECK(loaded.layers[l].biases == m.layers[l].biases);
    }

    auto doc = checkpoint_to_json(m);
    doc["format_version"] = 99;
    CHECK(code_of([&] { checkpoint_from_json(doc); }) == ErrorCode::version_mismatch);
    doc = checkpoint_to_json(m);
    doc["weights"][0].erase(0);
    CHECK(code_of([&] { checkpoint_from_json(doc); }) == ErrorCode::schema_mismatch);
}
