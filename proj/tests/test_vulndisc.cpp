#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "secmodels/errors.hpp"
#include "secmodels/montecarlo.hpp"
#include "secmodels/vulndisc.hpp"
#include "support/oracles.hpp"

using namespace secmodels;
using namespace secmodels::vulndisc;

namespace {

PowerLawTester make(double c, double alpha) {
    PowerLawTester t;
    t.c = c;
    t.alpha = alpha;
    t.label = "t";
    return t;
}

}  // namespace

TEST(Discovery, ClosedFormExamples) {
    EXPECT_NEAR(expected_discoveries(human_bug_bounty(), 0.0, 1.0), 10.0, 1e-12);
    EXPECT_NEAR(expected_discoveries(human_bug_bounty(), 0.0, 52.0), 107.0538, 1e-4);
    EXPECT_NEAR(expected_discoveries(human_bug_bounty(), 1.0, 53.0), 98.2843, 1e-4);
    EXPECT_NEAR(expected_discoveries(blackbox_fuzzer(), 1.0, 53.0), 42.7348, 1e-4);
    EXPECT_NEAR(discovery_rate(creative_ai(), 52.0), 5.12284, 1e-5);
}

TEST(Discovery, FuzzerLimit) {
    const auto lim = total_discoveries_limit(blackbox_fuzzer(), 1.0);
    ASSERT_TRUE(std::holds_alternative<double>(lim));
    EXPECT_NEAR(std::get<double>(lim), 42.75, 1e-12);
    EXPECT_TRUE(std::holds_alternative<Unbounded>(total_discoveries_limit(human_bug_bounty(), 1.0)));
    EXPECT_TRUE(std::holds_alternative<Unbounded>(total_discoveries_limit(make(1.0, 1.0), 1.0)));
}

TEST(Discovery, DivergentIntegralFromZero) {
    EXPECT_THROW(expected_discoveries(blackbox_fuzzer(), 0.0, 1.0), DivergenceError);
    EXPECT_THROW(expected_discoveries(make(1.0, 1.0), 0.0, 1.0), DivergenceError);
    EXPECT_THROW(expected_discoveries(human_bug_bounty(), 2.0, 1.0), DomainError);
    EXPECT_THROW(discovery_rate(human_bug_bounty(), 0.0), DomainError);
}

TEST(Discovery, AgreesWithQuadrature) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto t = make(0.1 + 100.0 * u(rng), 4.0 * u(rng));
        const double t1 = 0.01 + 10.0 * u(rng);
        const double t2 = t1 + 500.0 * u(rng) + 1e-3;
        const double want = oracle::power_law_integral_quadrature(t.c, t.alpha, t1, t2);
        EXPECT_NEAR(expected_discoveries(t, t1, t2), want, 1e-10 * std::max(1.0, want)) << t.alpha;
    }
}

TEST(Discovery, AdditiveOverIntervals) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto t = make(1.0 + 50.0 * u(rng), 3.0 * u(rng));
        const double a = 0.1 + u(rng);
        const double b = a + 10.0 * u(rng) + 1e-3;
        const double c = b + 10.0 * u(rng) + 1e-3;
        const double whole = expected_discoveries(t, a, c);
        EXPECT_NEAR(expected_discoveries(t, a, b) + expected_discoveries(t, b, c), whole, 1e-10 * whole);
    }
}

TEST(Discovery, DerivativeIsRate) {
    for (double alpha : {0.04, 0.4, 0.999, 1.0, 1.5, 3.0}) {
        const auto t = make(6.0, alpha);
        for (double x : {0.5, 3.0, 40.0}) {
            const double h = 1e-5 * x;
            const double fd = expected_discoveries(t, x - h, x + h) / (2.0 * h);
            EXPECT_NEAR(fd, discovery_rate(t, x), 1e-7 * discovery_rate(t, x));
        }
    }
}

TEST(Discovery, ContinuousAcrossAlphaOne) {
    const double log_ratio = std::log(52.0);
    const double at = expected_discoveries(make(6.0, 1.0), 1.0, 52.0);
    EXPECT_NEAR(at, 6.0 * log_ratio, 1e-12);
    // dS/dalpha at alpha = 1 is -c ln^2(t2/t1) / 2; the step sizes keep the exact change below 1e-5.
    const double slope = -6.0 * log_ratio * log_ratio / 2.0;
    for (double eps : {1e-7, 1e-9, 1e-11, 1e-13}) {
        for (double step : {-eps, eps}) {
            const double s = expected_discoveries(make(6.0, 1.0 + step), 1.0, 52.0);
            EXPECT_LT(std::abs(s - at), 1e-5) << step;
            EXPECT_NEAR(s, at + slope * step, 1e-10) << step;
        }
    }
}

TEST(Discovery, Crossover) {
    const auto x = rate_crossover(blackbox_fuzzer(), human_bug_bounty());
    ASSERT_TRUE(std::holds_alternative<double>(x));
    const double tc = std::get<double>(x);
    EXPECT_NEAR(tc, 2.778273, 1e-6);
    EXPECT_GT(discovery_rate(blackbox_fuzzer(), 0.9 * tc), discovery_rate(human_bug_bounty(), 0.9 * tc));
    EXPECT_LT(discovery_rate(blackbox_fuzzer(), 1.1 * tc), discovery_rate(human_bug_bounty(), 1.1 * tc));
    EXPECT_TRUE(std::holds_alternative<Identical>(rate_crossover(human_bug_bounty(), human_bug_bounty())));
    EXPECT_TRUE(std::holds_alternative<Never>(rate_crossover(human_bug_bounty(), fast_ai())));
    auto attempts = human_bug_bounty();
    attempts.basis = Basis::attempts;
    EXPECT_THROW(rate_crossover(attempts, human_bug_bounty()), UnitError);
}

TEST(Discovery, AttemptConversionRoundTrips) {
    const AttemptRate r{250.0};
    EXPECT_DOUBLE_EQ(convert_attempts_time(r, 1000.0, Conversion::attempts_to_time), 4.0);
    EXPECT_DOUBLE_EQ(convert_attempts_time(r, 4.0, Conversion::time_to_attempts), 1000.0);
    EXPECT_THROW(convert_attempts_time(r, -1.0, Conversion::attempts_to_time), DomainError);
}

TEST(WeeklySeries, ColumnsAndConventions) {
    const auto h = weekly_series(human_bug_bounty(), 52);
    ASSERT_EQ(h.rows(), 52u);
    EXPECT_DOUBLE_EQ(h.column("interval_start")[0], 0.0);
    EXPECT_NEAR(h.column("expected_discoveries")[0], 10.0, 1e-12);
    EXPECT_NEAR(h.column("cumulative").back(), 6.0 * std::pow(52.0, 0.6) / 0.6, 1e-9);

    const auto f = weekly_series(blackbox_fuzzer(), 26);
    EXPECT_DOUBLE_EQ(f.column("interval_start")[0], 1.0);
    EXPECT_NEAR(f.column("expected_discoveries").back(), 85.5 / 2.0 * (std::pow(26.0, -2) - std::pow(27.0, -2)),
                1e-12);
    EXPECT_LT(f.column("expected_discoveries").back(), 0.05);
    EXPECT_THROW(weekly_series(human_bug_bounty(), 0), DomainError);
}

TEST(WeeklySeries, LongRunRates) {
    const auto last = [](const PowerLawTester& t) { return weekly_series(t, 520).column("expected_discoveries").back(); };
    EXPECT_NEAR(last(fast_ai()), 4.92, 0.01);
    EXPECT_NEAR(last(creative_ai()), 4.67, 0.01);
    EXPECT_NEAR(last(human_bug_bounty()), 0.4919, 1e-3);
}

TEST(Discovery, MonteCarloCountsMatchExpectation) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const auto t = make(1.0 + 20.0 * u(rng), 3.5 * u(rng));
        const double t1 = 0.5 + u(rng);
        const double t2 = t1 + 1.0 + 30.0 * u(rng);
        montecarlo::SimConfig cfg;
        cfg.trials = 100000;
        cfg.seed = 500 + i;
        const auto est = montecarlo::simulate_discovery(t, t1, t2, cfg);
        const double want = expected_discoveries(t, t1, t2);
        EXPECT_LE(std::abs(est.mean - want), 4.0 * est.std_error) << "c=" << t.c << " alpha=" << t.alpha;
    }
}
