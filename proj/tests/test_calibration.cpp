#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "secmodels/calibration.hpp"
#include "secmodels/errors.hpp"
#include "secmodels/vulndisc.hpp"

using namespace secmodels;
using namespace secmodels::calibration;

TEST(WeibullFit, ReferenceSamples) {
    const auto fit = fit_weibull_cdf(reference_patch_dev_samples());
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.params[0], 0.57, 0.57e-4);
    EXPECT_NEAR(fit.params[1], 18.2, 18.2e-4);
}

TEST(WeibullFit, RandomRoundTrips) {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> k_dist(0.3, 2.0), lam_dist(5.0, 200.0);
    for (int i = 0; i < 25; ++i) {
        const patchrace::WeibullParams truth{k_dist(rng), lam_dist(rng)};
        std::vector<double> times;
        for (int j = 1; j <= 40; ++j) {
            times.push_back(truth.lambda * 4.0 * j / 40.0);
        }
        const auto fit = fit_weibull_cdf(weibull_cdf_samples(truth, times));
        EXPECT_NEAR(fit.params[0] / truth.k, 1.0, 0.01) << truth.k << " " << truth.lambda;
        EXPECT_NEAR(fit.params[1] / truth.lambda, 1.0, 0.01) << truth.k << " " << truth.lambda;
    }
}

TEST(WeibullFit, RejectsBadData) {
    std::vector<CdfSample> few{{1, 0.1}, {2, 0.2}, {3, 0.3}};
    EXPECT_THROW(fit_weibull_cdf(few), DataError);
    std::vector<CdfSample> falling{{1, 0.1}, {2, 0.3}, {3, 0.2}, {4, 0.4}};
    EXPECT_THROW(fit_weibull_cdf(falling), DataError);
    std::vector<CdfSample> saturated{{1, 0.0}, {2, 0.5}, {3, 1.0}, {4, 1.0}};
    EXPECT_THROW(fit_weibull_cdf(saturated), DataError);
}

TEST(PowerLawConstant, InvertsExpectedDiscoveries) {
    EXPECT_NEAR(estimate_power_law_c(36.3, 1.0, 18.0 / 7.0, 3.0), 85.536, 1e-9);
    EXPECT_NEAR(estimate_power_law_c(10.0, 0.0, 1.0, 0.4), 6.0, 1e-12);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        vulndisc::PowerLawTester t;
        t.c = 0.5 + 50.0 * u(rng);
        t.alpha = 3.0 * u(rng);
        const double t1 = 0.5 + u(rng);
        const double t2 = t1 + 20.0 * u(rng) + 0.1;
        const double s = vulndisc::expected_discoveries(t, t1, t2);
        EXPECT_NEAR(estimate_power_law_c(s, t1, t2, t.alpha), t.c, 1e-10 * t.c);
    }
}

TEST(Beta, FromHalfLife) {
    EXPECT_NEAR(estimate_beta(100.0, 0.5), std::log(2.0) / 100.0, 1e-15);
    EXPECT_NEAR(1.0 / estimate_beta(100.0, 0.5), 144.27, 0.01);
    EXPECT_THROW(estimate_beta(100.0, 1.0), DomainError);
    EXPECT_THROW(estimate_beta(100.0, 0.0), DomainError);
    EXPECT_THROW(estimate_beta(0.0, 0.5), DomainError);
}

TEST(ExploitTotal, ReferenceHistogram) {
    const auto hist = reference_exploit_histogram();
    EXPECT_EQ(hist.counts.size(), 40u);
    EXPECT_NEAR(hist.total(), 160.0, 1e-9);
    const auto fit = fit_exploit_total(hist, {});
    EXPECT_NEAR(fit.total, 199.204, 1e-3);
    EXPECT_NEAR(fit.unexploited, fit.total - 160.0, 1e-12);
}

TEST(ExploitTotal, ExactOnScaledIncrements) {
    patchrace::ExploitCurveParams curve;
    std::vector<double> edges;
    for (int i = 0; i <= 14; ++i) {
        edges.push_back(30.0 * i);
    }
    DelayHistogram h{edges, {}};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        h.counts.push_back(240.0 * (patchrace::exploit_availability(curve, edges[i + 1]) -
                                    patchrace::exploit_availability(curve, edges[i])));
    }
    const auto fit = fit_exploit_total(h, curve);
    EXPECT_NEAR(fit.total, 240.0, 1e-9);
    EXPECT_NEAR(fit.fit.residual, 0.0, 1e-18);
}

TEST(ExploitTotal, LinearInCounts) {
    auto h = reference_exploit_histogram();
    const double once = fit_exploit_total(h, {}).total;
    for (auto& c : h.counts) {
        c *= 2.0;
    }
    EXPECT_NEAR(fit_exploit_total(h, {}).total, 2.0 * once, 1e-9);
}

TEST(Csv, ReadsShippedData) {
    std::ifstream cdf(std::string(SECMODELS_DATA_DIR) + "/patch_dev_reference.csv");
    ASSERT_TRUE(cdf);
    const auto samples = read_cdf_samples(cdf);
    EXPECT_EQ(samples.size(), 120u);
    std::ifstream hist(std::string(SECMODELS_DATA_DIR) + "/exploit_delay_reference.csv");
    ASSERT_TRUE(hist);
    const auto h = read_delay_histogram(hist);
    EXPECT_NEAR(h.total(), 160.0, 1e-6);
}

namespace {

std::string error_of(const std::string& text, bool histogram) {
    std::istringstream in(text);
    try {
        if (histogram) {
            read_delay_histogram(in);
        } else {
            read_cdf_samples(in);
        }
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Csv, ErrorsNameTheLine) {
    EXPECT_NE(error_of("t,fraction\n1,0.1\n2,abc\n", false).find("line 3"), std::string::npos);
    EXPECT_NE(error_of("time,frac\n1,0.1\n", false).find("line 1"), std::string::npos);
    EXPECT_NE(error_of("t,fraction\n1,0.1,7\n", false).find("line 2"), std::string::npos);
    EXPECT_NE(error_of("bin_start,bin_end,count\n0,30,1\n40,60,2\n", true).find("line 3"), std::string::npos);
    EXPECT_NE(error_of("bin_start,bin_end,count\n0,30,-1\n", true).find("line 2"), std::string::npos);
}

TEST(Csv, ToleratesBomAndCrlf) {
    std::istringstream in("\xEF\xBB\xBFt,fraction\r\n1,0.1\r\n2,0.2\r\n");
    const auto s = read_cdf_samples(in);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[1].fraction, 0.2);
}
