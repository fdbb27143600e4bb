#include "snrbench/symfunc/symbolic.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "snrbench/error.hpp"

namespace snrbench::symfunc {

namespace {

constexpr std::array<std::size_t, function_count> kArity{1, 1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

// Formula 13 is printed with a repeated symbol and a stray brace in its source
// table; it is read here as the monomial sum a + b^2/2 + ... + h^8/8 over
// eight distinct variables.
constexpr std::array<std::string_view, function_count> kFormula{
    "a",
    "a^2",
    "2/(a^2+1) - 1",
    "sin(a)",
    "exp(a) - 1.5",
    "2*log(a^2+1) - 1",
    "0.25*a^3 + 0.75*b^2",
    "0.5*a^3 + 0.75*b^2 + a*c",
    "0.5*exp(a)*sin(b) - 0.25*cos(d)^5/(c^2+1)",
    "0.5*(a-b)^2 + 0.2*(c+d*e)^3 - 0.5",
    "0.5*cos(a)*tan(b) - log((c-d)^2+1)/((e+f+1)^2+1)",
    "0.5*(b-c)^2/(a^2+1) + tan(d)*log(e^2+1) + 0.5*cos(f)*sin(g)",
    "a + b^2/2 + c^3/3 + d^4/4 + e^5/5 + f^6/6 + g^7/7 + h^8/8",
    "0.5*(a-1)/(b^2+1) - 0.5*c^3/(d^2+1) + 0.5*e^5/(f^2+1) - 0.5*g^7/(h^2+1) + 0.5*tan(i) + 0.5",
    "0.5*sin(a) - 0.5*b^3 - log(c^2+1) + 0.5*sqrt((d+e)^2+1) - 0.5*cos(f)*g + h*i^2/((1-j)^2+1) - 0.5",
};

void check_id(int id) {
    if (id < 1 || id > function_count) {
        fail(ErrorCode::domain, "unknown symbolic function id " + std::to_string(id));
    }
}

void check_args(int id, std::span<const double> x) {
    check_id(id);
    if (x.size() != kArity[static_cast<std::size_t>(id - 1)]) {
        fail(ErrorCode::domain, "function " + std::to_string(id) + " takes " +
                                    std::to_string(kArity[static_cast<std::size_t>(id - 1)]) + " arguments, got " +
                                    std::to_string(x.size()));
    }
}

double sq(double v) { return v * v; }

// Exact running sum of doubles kept as non-overlapping partials; result() is
// the correctly rounded total. Same scheme as Python's math.fsum.
class ExactSum {
public:
    void add(double x) {
        std::size_t used = 0;
        for (double y : partials_) {
            if (std::abs(x) < std::abs(y)) {
                std::swap(x, y);
            }
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) {
                partials_[used++] = lo;
            }
            x = hi;
        }
        partials_.resize(used);
        partials_.push_back(x);
    }

    double result() const {
        std::size_t n = partials_.size();
        if (n == 0) {
            return 0.0;
        }
        double hi = partials_[--n];
        double lo = 0.0;
        while (n > 0) {
            const double x = hi;
            const double y = partials_[--n];
            hi = x + y;
            lo = y - (hi - x);
            if (lo != 0.0) {
                break;
            }
        }
        // Round half-way cases the way a single correctly rounded add would.
        if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
            const double y = lo * 2.0;
            const double x = hi + y;
            if (y == x - hi) {
                hi = x;
            }
        }
        return hi;
    }

private:
    std::vector<double> partials_;
};
double sec2(double v) { return 1.0 / sq(std::cos(v)); }

}  // namespace

std::size_t arity(int id) {
    check_id(id);
    return kArity[static_cast<std::size_t>(id - 1)];
}

std::string_view formula(int id) {
    check_id(id);
    return kFormula[static_cast<std::size_t>(id - 1)];
}

double eval_function(int id, std::span<const double> x) {
    check_args(id, x);
    switch (id) {
        case 1: return x[0];
        case 2: return sq(x[0]);
        case 3: return 2.0 / (sq(x[0]) + 1.0) - 1.0;
        case 4: return std::sin(x[0]);
        case 5: return std::exp(x[0]) - 1.5;
        case 6: return 2.0 * std::log(sq(x[0]) + 1.0) - 1.0;
        case 7: {
            const double a = x[0], b = x[1];
            return 0.25 * a * a * a + 0.75 * b * b;
        }
        case 8: {
            const double a = x[0], b = x[1], c = x[2];
            return 0.5 * a * a * a + 0.75 * b * b + a * c;
        }
        case 9: {
            const double a = x[0], b = x[1], c = x[2], d = x[3];
            return 0.5 * std::exp(a) * std::sin(b) - 0.25 * std::pow(std::cos(d), 5) / (c * c + 1.0);
        }
        case 10: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4];
            return 0.5 * sq(a - b) + 0.2 * std::pow(c + d * e, 3) - 0.5;
        }
        case 11: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5];
            return 0.5 * std::cos(a) * std::tan(b) - std::log(sq(c - d) + 1.0) / (sq(e + f + 1.0) + 1.0);
        }
        case 12: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5], g = x[6];
            return 0.5 * sq(b - c) / (a * a + 1.0) + std::tan(d) * std::log(e * e + 1.0) +
                   0.5 * std::cos(f) * std::sin(g);
        }
        case 13: {
            double sum = 0.0;
            for (std::size_t j = 0; j < 8; ++j) {
                const double power = static_cast<double>(j + 1);
                sum += std::pow(x[j], power) / power;
            }
            return sum;
        }
        case 14: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5], g = x[6], h = x[7], i = x[8];
            return 0.5 * (a - 1.0) / (b * b + 1.0) - 0.5 * std::pow(c, 3) / (d * d + 1.0) +
                   0.5 * std::pow(e, 5) / (f * f + 1.0) - 0.5 * std::pow(g, 7) / (h * h + 1.0) + 0.5 * std::tan(i) +
                   0.5;
        }
        case 15: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5], g = x[6], h = x[7], i = x[8],
                         j = x[9];
            return 0.5 * std::sin(a) - 0.5 * std::pow(b, 3) - std::log(c * c + 1.0) +
                   0.5 * std::sqrt(sq(d + e) + 1.0) - 0.5 * std::cos(f) * g + h * i * i / (sq(1.0 - j) + 1.0) - 0.5;
        }
    }
    return 0.0;  // unreachable, id checked above
}

std::vector<double> eval_gradient(int id, std::span<const double> x) {
    check_args(id, x);
    switch (id) {
        case 1: return {1.0};
        case 2: return {2.0 * x[0]};
        case 3: return {-4.0 * x[0] / sq(sq(x[0]) + 1.0)};
        case 4: return {std::cos(x[0])};
        case 5: return {std::exp(x[0])};
        case 6: return {4.0 * x[0] / (sq(x[0]) + 1.0)};
        case 7: return {0.75 * x[0] * x[0], 1.5 * x[1]};
        case 8: {
            const double a = x[0], b = x[1], c = x[2];
            return {1.5 * a * a + c, 1.5 * b, a};
        }
        case 9: {
            const double a = x[0], b = x[1], c = x[2], d = x[3];
            const double ea = std::exp(a);
            const double q = c * c + 1.0;
            const double cd = std::cos(d);
            return {0.5 * ea * std::sin(b), 0.5 * ea * std::cos(b), 0.5 * std::pow(cd, 5) * c / (q * q),
                    1.25 * std::pow(cd, 4) * std::sin(d) / q};
        }
        case 10: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4];
            const double u2 = 0.6 * sq(c + d * e);
            return {a - b, b - a, u2, u2 * e, u2 * d};
        }
        case 11: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5];
            const double diff = c - d;
            const double num = std::log(diff * diff + 1.0);
            const double s = e + f + 1.0;
            const double den = s * s + 1.0;
            const double dnum = 2.0 * diff / (diff * diff + 1.0);
            const double dden = num * 2.0 * s / (den * den);
            return {-0.5 * std::sin(a) * std::tan(b), 0.5 * std::cos(a) * sec2(b), -dnum / den, dnum / den, dden,
                    dden};
        }
        case 12: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5], g = x[6];
            const double q = a * a + 1.0;
            const double bc = b - c;
            return {-bc * bc * a / (q * q),
                    bc / q,
                    -bc / q,
                    std::log(e * e + 1.0) * sec2(d),
                    std::tan(d) * 2.0 * e / (e * e + 1.0),
                    -0.5 * std::sin(f) * std::sin(g),
                    0.5 * std::cos(f) * std::cos(g)};
        }
        case 13: {
            std::vector<double> g(8);
            for (std::size_t j = 0; j < 8; ++j) {
                g[j] = std::pow(x[j], static_cast<double>(j));
            }
            return g;
        }
        case 14: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5], g = x[6], h = x[7], i = x[8];
            const double qb = b * b + 1.0, qd = d * d + 1.0, qf = f * f + 1.0, qh = h * h + 1.0;
            return {0.5 / qb,
                    -(a - 1.0) * b / (qb * qb),
                    -1.5 * c * c / qd,
                    std::pow(c, 3) * d / (qd * qd),
                    2.5 * std::pow(e, 4) / qf,
                    -std::pow(e, 5) * f / (qf * qf),
                    -3.5 * std::pow(g, 6) / qh,
                    std::pow(g, 7) * h / (qh * qh),
                    0.5 * sec2(i)};
        }
        case 15: {
            const double a = x[0], b = x[1], c = x[2], d = x[3], e = x[4], f = x[5], g = x[6], h = x[7], i = x[8],
                         j = x[9];
            const double s = d + e;
            const double ds = 0.5 * s / std::sqrt(s * s + 1.0);
            const double q = sq(1.0 - j) + 1.0;
            return {0.5 * std::cos(a),
                    -1.5 * b * b,
                    -2.0 * c / (c * c + 1.0),
                    ds,
                    ds,
                    0.5 * std::sin(f) * g,
                    -0.5 * std::cos(f),
                    i * i / q,
                    2.0 * h * i / q,
                    h * i * i * 2.0 * (1.0 - j) / (q * q)};
        }
    }
    return {};
}

std::vector<double> ground_truth_fa(int id, std::span<const double> x, std::span<const double> baseline) {
    check_args(id, x);
    if (baseline.size() != x.size()) {
        fail(ErrorCode::domain, "baseline arity does not match the input");
    }
    const double full = eval_function(id, x);
    std::vector<double> ablated(x.begin(), x.end());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        ablated[i] = baseline[i];
        out[i] = full - eval_function(id, ablated);
        ablated[i] = x[i];
    }
    return out;
}

std::vector<double> ground_truth_fa(int id, std::span<const double> x) {
    const std::vector<double> zeros(x.size(), 0.0);
    return ground_truth_fa(id, x, zeros);
}

std::vector<double> ground_truth_ig(int id, std::span<const double> x, std::span<const double> baseline, int steps) {
    check_args(id, x);
    if (baseline.size() != x.size()) {
        fail(ErrorCode::domain, "baseline arity does not match the input");
    }
    if (steps < 1) {
        fail(ErrorCode::parameter, "ground_truth_ig needs at least one step");
    }
    const std::size_t m = x.size();
    // Endpoints are taken verbatim so a single step reproduces ground_truth_fa.
    const auto point = [&](int s) {
        if (s == 0) {
            return std::vector<double>(baseline.begin(), baseline.end());
        }
        if (s == steps) {
            return std::vector<double>(x.begin(), x.end());
        }
        std::vector<double> p(m);
        const double alpha = static_cast<double>(s) / steps;
        for (std::size_t i = 0; i < m; ++i) {
            p[i] = baseline[i] + alpha * (x[i] - baseline[i]);
        }
        return p;
    };

    // Accumulating exactly makes the single-feature sum telescope to
    // f(x) - f(baseline) bit for bit, whatever the step count.
    std::vector<ExactSum> sums(m);
    std::vector<double> previous = point(0);
    for (int s = 1; s <= steps; ++s) {
        std::vector<double> current = point(s);
        const double value = eval_function(id, current);
        std::vector<double> ablated = current;
        for (std::size_t i = 0; i < m; ++i) {
            ablated[i] = previous[i];
            sums[i].add(value);
            sums[i].add(-eval_function(id, ablated));
            ablated[i] = current[i];
        }
        previous = std::move(current);
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = sums[i].result();
    }
    return out;
}

std::vector<double> ground_truth_ig(int id, std::span<const double> x, int steps) {
    const std::vector<double> zeros(x.size(), 0.0);
    return ground_truth_ig(id, x, zeros, steps);
}

SymbolicEvaluator::SymbolicEvaluator(int id) : SymbolicEvaluator(id, arity(id)) {}

SymbolicEvaluator::SymbolicEvaluator(int id, std::size_t input_width) : id_(id), width_(input_width) {
    if (input_width < arity(id)) {
        fail(ErrorCode::domain, "input width is smaller than the function arity");
    }
}

double SymbolicEvaluator::value(std::span<const double> x) const {
    if (x.size() != width_) {
        fail(ErrorCode::shape, "input width mismatch");
    }
    return eval_function(id_, x.first(arity(id_)));
}

std::vector<double> SymbolicEvaluator::gradient(std::span<const double> x) const {
    if (x.size() != width_) {
        fail(ErrorCode::shape, "input width mismatch");
    }
    std::vector<double> g = eval_gradient(id_, x.first(arity(id_)));
    g.resize(width_, 0.0);
    return g;
}

}  // namespace snrbench::symfunc
