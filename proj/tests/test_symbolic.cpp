#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "snrbench/error.hpp"
#include "snrbench/symfunc/symbolic.hpp"

using namespace snrbench;
using namespace snrbench::symfunc;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, std::size_t m, double bound = 0.95) {
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<double> x(m);
    for (auto& v : x) v = u(rng);
    return x;
}

// Central differences of eval_function; independent of eval_gradient.
std::vector<double> finite_difference(int id, std::vector<double> x, double h) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double up = eval_function(id, x);
        x[i] = saved - h;
        const double down = eval_function(id, x);
        x[i] = saved;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-2});
}

}  // namespace

TEST_CASE("arity follows the formula table") {
    const std::size_t expected[] = {1, 1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    for (int id = 1; id <= function_count; ++id) {
        CHECK(arity(id) == expected[id - 1]);
    }
    CHECK_THROWS_AS(arity(0), Error);
    CHECK_THROWS_AS(arity(16), Error);
}

TEST_CASE("eval_function on hand-computed points") {
    CHECK(eval_function(1, std::vector<double>{0.7}) == 0.7);
    CHECK(eval_function(2, std::vector<double>{-0.5}) == 0.25);
    CHECK(eval_function(7, std::vector<double>{1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_function(3, std::vector<double>{1.0}) == doctest::Approx(0.0));
    CHECK(eval_function(5, std::vector<double>{0.0}) == doctest::Approx(-0.5));
    CHECK(eval_function(10, std::vector<double>{1, 0, 1, 0, 0}) == doctest::Approx(0.5 + 0.2 - 0.5));
    // a + b^2/2 + ... + h^8/8 at all ones
    double harmonic = 0.0;
    for (int j = 1; j <= 8; ++j) harmonic += 1.0 / j;
    CHECK(eval_function(13, std::vector<double>(8, 1.0)) == doctest::Approx(harmonic));
}

TEST_CASE("eval_function rejects wrong arity and unknown ids") {
    CHECK_THROWS_AS(eval_function(7, std::vector<double>{1.0}), Error);
    CHECK_THROWS_AS(eval_function(99, std::vector<double>{1.0}), Error);
    try {
        eval_gradient(2, std::vector<double>{1.0, 2.0});
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::domain);
    }
}

TEST_CASE("eval_gradient on hand-computed points") {
    CHECK(eval_gradient(2, std::vector<double>{0.5}) == std::vector<double>{1.0});
    CHECK(eval_gradient(1, std::vector<double>{-0.3}) == std::vector<double>{1.0});
    const auto g = eval_gradient(7, std::vector<double>{1.0, 1.0});
    CHECK(g[0] == doctest::Approx(0.75));
    CHECK(g[1] == doctest::Approx(1.5));
}

TEST_CASE("eval_gradient matches central differences for every formula") {
    std::mt19937_64 rng(1234);
    for (int id = 1; id <= function_count; ++id) {
        CAPTURE(id);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto x = random_point(rng, arity(id));
            const auto analytic = eval_gradient(id, x);
            const auto numeric = finite_difference(id, x, 1e-5);
            for (std::size_t i = 0; i < x.size(); ++i) {
                worst = std::max(worst, rel_err(analytic[i], numeric[i]));
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("ground_truth_fa") {
    CHECK(ground_truth_fa(2, std::vector<double>{0.5}) == std::vector<double>{0.25});
    const auto fa7 = ground_truth_fa(7, std::vector<double>{1.0, 1.0});
    CHECK(fa7[0] == doctest::Approx(0.25));
    CHECK(fa7[1] == doctest::Approx(0.75));

    std::mt19937_64 rng(5);
    for (int id = 1; id <= function_count; ++id) {
        const auto x = random_point(rng, arity(id));
        const auto self = ground_truth_fa(id, x, x);
        for (double v : self) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(ground_truth_fa(7, std::vector<double>{1.0, 1.0}, std::vector<double>{0.0}), Error);
}

TEST_CASE("ground_truth_ig with one step equals ground_truth_fa exactly") {
    std::mt19937_64 rng(77);
    for (int id = 1; id <= function_count; ++id) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto x = random_point(rng, arity(id));
            const auto baseline = random_point(rng, arity(id));
            CHECK(ground_truth_ig(id, x, baseline, 1) == ground_truth_fa(id, x, baseline));
            CHECK(ground_truth_ig(id, x, 1) == ground_truth_fa(id, x));
        }
    }
}

TEST_CASE("ground_truth_ig telescopes for single-feature formulas") {
    CHECK(ground_truth_ig(2, std::vector<double>{0.5}, 1) == std::vector<double>{0.25});
    CHECK(ground_truth_ig(2, std::vector<double>{0.5}, 7) == std::vector<double>{0.25});
    CHECK(ground_truth_ig(2, std::vector<double>{0.5}, 1000) == std::vector<double>{0.25});

    std::mt19937_64 rng(9);
    for (int id = 1; id <= 6; ++id) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto x = random_point(rng, 1, 1.0);
            const auto reference = ground_truth_ig(id, x, 1);
            for (int steps : {2, 3, 10, 64, 333}) {
                CHECK(ground_truth_ig(id, x, steps) == reference);
            }
        }
    }
}

TEST_CASE("ground_truth_ig is complete on an additive formula") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_point(rng, 8);
        const std::vector<double> zero(8, 0.0);
        for (int steps : {1, 5, 50}) {
            const auto ig = ground_truth_ig(13, x, steps);
            double sum = 0.0;
            for (double v : ig) sum += v;
            CHECK(sum == doctest::Approx(eval_function(13, x) - eval_function(13, zero)).epsilon(1e-12));
        }
    }
}

TEST_CASE("ground_truth_ig validates steps") {
    try {
        ground_truth_ig(2, std::vector<double>{0.5}, 0);
        FAIL("expected a parameter error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parameter);
    }
}

TEST_CASE("SymbolicEvaluator ignores trailing columns") {
    SymbolicEvaluator f(2, 4);
    const std::vector<double> x{0.5, 3.0, -2.0, 1.0};
    CHECK(f.input_width() == 4);
    CHECK(f.value(x) == 0.25);
    CHECK(f.gradient(x) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(SymbolicEvaluator(7, 1), Error);
}
