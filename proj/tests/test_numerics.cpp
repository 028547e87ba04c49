#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "secmodels/errors.hpp"
#include "secmodels/numerics.hpp"

using namespace secmodels;
using namespace secmodels::numerics;

TEST(Grid, NodeCountIncludesBothEnds) {
    const Grid g(0.0, 730.0, 0.25);
    EXPECT_EQ(g.node_count(), 2921u);
    EXPECT_DOUBLE_EQ(g.node(g.node_count() - 1), 730.0);
    EXPECT_EQ(g.refined().node_count(), 5841u);
}

TEST(Grid, RejectsDegenerateInput) {
    EXPECT_THROW(Grid(0.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(Grid(0.0, 1.0, -0.1), DomainError);
    EXPECT_THROW(Grid(1.0, 1.0, 0.1), DomainError);
    EXPECT_THROW(Grid(0.0, 1.0, 2.0), DomainError);
}

TEST(Trapezoid, ExactForLinear) {
    EXPECT_NEAR(integrate_trapezoid([](double x) { return 3.0 * x + 1.0; }, Grid(0.0, 2.0, 0.5)), 8.0, 1e-12);
}

TEST(Trapezoid, SecondOrderConvergenceOnCubic) {
    const auto f = [](double x) { return x * x * x; };
    const double e1 = std::abs(integrate_trapezoid(f, Grid(0.0, 1.0, 0.1)) - 0.25);
    const double e2 = std::abs(integrate_trapezoid(f, Grid(0.0, 1.0, 0.05)) - 0.25);
    EXPECT_NEAR(e1 / e2, 4.0, 0.05);
}

TEST(Trapezoid, CoversTrailingPartialCell) {
    // Nodes at 0, 0.4, 0.8 and a final partial cell up to 1.0.
    EXPECT_NEAR(integrate_trapezoid([](double) { return 1.0; }, Grid(0.0, 1.0, 0.4)), 1.0, 1e-12);
}

TEST(Trapezoid, NonFiniteValueNamesNode) {
    try {
        integrate_trapezoid([](double x) { return x > 0.5 ? std::nan("") : x; }, Grid(0.0, 1.0, 0.25));
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("0.75"), std::string::npos) << e.what();
    }
}

TEST(ArgmaxInt, FindsPeakAndPrefersSmallestOnTies) {
    const auto peak = argmax_int([](std::int64_t n) { return -std::pow(static_cast<double>(n) - 7.0, 2); }, 1, 100);
    EXPECT_EQ(peak.arg, 7);
    EXPECT_DOUBLE_EQ(peak.value, 0.0);
    const auto tie = argmax_int([](std::int64_t n) { return n == 3 || n == 9 ? 1.0 : 0.0; }, 1, 20);
    EXPECT_EQ(tie.arg, 3);
    const auto single = argmax_int([](std::int64_t n) { return static_cast<double>(n); }, 5, 5);
    EXPECT_EQ(single.arg, 5);
}

TEST(ArgmaxInt, InvariantUnderPositiveAffineMaps) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise;
    std::vector<double> values(200);
    for (auto& v : values) {
        v = noise(rng);
    }
    const auto f = [&](std::int64_t n) { return values[static_cast<std::size_t>(n)]; };
    const auto base = argmax_int(f, 0, 199);
    const auto mapped = argmax_int([&](std::int64_t n) { return 3.5 * f(n) - 2.0; }, 0, 199);
    EXPECT_EQ(base.arg, mapped.arg);
}

TEST(ArgmaxInt, Errors) {
    EXPECT_THROW(argmax_int([](std::int64_t) { return 0.0; }, 5, 4), DomainError);
    EXPECT_THROW(argmax_int([](std::int64_t n) { return n == 2 ? INFINITY : 0.0; }, 1, 4), EvaluationError);
}

namespace {

std::vector<DataPoint> sample(const Model& m, std::span<const double> p, double lo, double hi, int count) {
    std::vector<DataPoint> d;
    for (int i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * i / (count - 1);
        d.push_back({x, m(p, x)});
    }
    return d;
}

const Model weibull_cdf = [](std::span<const double> p, double t) {
    return -std::expm1(-std::pow(t / p[1], p[0]));
};

}  // namespace

TEST(LeastSquares, RecoversLine) {
    const Model line = [](std::span<const double> p, double x) { return p[0] * x + p[1]; };
    const std::vector<double> truth{2.5, -1.0};
    const auto data = sample(line, truth, 0.0, 10.0, 11);
    const std::vector<double> init{1.0, 0.0};
    const std::vector<Bounds> bounds{{-10, 10}, {-10, 10}};
    const auto fit = least_squares_fit(line, data, init, bounds);
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.params[0], 2.5, 1e-6);
    EXPECT_NEAR(fit.params[1], -1.0, 1e-6);
}

TEST(LeastSquares, RecoversWeibullWithinOnePercent) {
    const std::vector<double> truth{0.57, 18.2};
    const auto data = sample(weibull_cdf, truth, 1.0, 120.0, 60);
    const std::vector<double> init{1.0, 40.0};
    const std::vector<Bounds> bounds{{0.01, 50}, {0.1, 1e4}};
    const auto fit = least_squares_fit(weibull_cdf, data, init, bounds);
    EXPECT_NEAR(fit.params[0] / 0.57, 1.0, 0.01);
    EXPECT_NEAR(fit.params[1] / 18.2, 1.0, 0.01);
}

TEST(LeastSquares, ExponentialDataGivesUnitShape) {
    const Model expo = [](std::span<const double> p, double t) { return -std::expm1(-t / p[0]); };
    const std::vector<double> scale{30.0};
    const auto data = sample(expo, scale, 1.0, 150.0, 40);
    const std::vector<double> init{1.0, 10.0};
    const std::vector<Bounds> bounds{{0.01, 50}, {0.1, 1e4}};
    const auto fit = least_squares_fit(weibull_cdf, data, init, bounds);
    EXPECT_NEAR(fit.params[0], 1.0, 0.02);
}

TEST(LeastSquares, NeverWorseThanStart) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DataPoint> data;
        for (int i = 1; i <= 15; ++i) {
            data.push_back({static_cast<double>(i), u(rng)});
        }
        const std::vector<double> init{0.5 + u(rng), 5.0 + 20.0 * u(rng)};
        const std::vector<Bounds> bounds{{0.01, 50}, {0.1, 1e4}};
        const auto fit = least_squares_fit(weibull_cdf, data, init, bounds);
        EXPECT_LE(fit.residual, sum_squared_error(weibull_cdf, init, data) + 1e-15);
        EXPECT_DOUBLE_EQ(fit.residual, sum_squared_error(weibull_cdf, fit.params, data));
    }
}

TEST(LeastSquares, Errors) {
    const std::vector<DataPoint> two{{1, 1}, {2, 2}};
    const std::vector<double> init{1.0, 1.0};
    const std::vector<Bounds> bounds{{0.01, 50}, {0.1, 100}};
    EXPECT_THROW(least_squares_fit(weibull_cdf, two, init, bounds), DataError);
    const std::vector<DataPoint> enough{{1, 0.1}, {2, 0.2}, {3, 0.3}, {4, 0.4}};
    const std::vector<double> outside{100.0, 1.0};
    EXPECT_THROW(least_squares_fit(weibull_cdf, enough, outside, bounds), DomainError);
}
