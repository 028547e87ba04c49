#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "secmodels/numerics.hpp"
#include "secmodels/patchrace.hpp"

namespace secmodels::calibration {

/// One point of an empirical CDF.
struct CdfSample {
    double t;
    double fraction;
};

/// Event counts between consecutive bin edges (days). Counts are held as
/// non-negative reals so noise-free proportional histograms stay exact.
struct DelayHistogram {
    std::vector<double> bin_edges;
    std::vector<double> counts;

    /// Throws DataError on non-increasing edges, a length mismatch or negative counts.
    void validate() const;
    double total() const;
};

struct ExploitTotalFit {
    numerics::FitResult fit;  ///< params = {total}
    double total = 0.0;
    double unexploited = 0.0;  ///< total minus the observed count
};

/// Least-squares fit of 1 - exp(-(t/lambda)^k) to the samples; params = {k, lambda}.
///
/// Requires at least 4 samples, 3 of them strictly inside (0, 1), and
/// fractions non-decreasing in t. Throws DataError otherwise. A fit that
/// does not meet the optimizer tolerances is returned with converged = false.
numerics::FitResult fit_weibull_cdf(std::span<const CdfSample> samples);

/// C such that expected_discoveries(C, alpha, t1, t2) == s_count.
double estimate_power_law_c(double s_count, double t1, double t2, double alpha);

/// beta = -ln(1 - fraction) / t_ref. Throws DomainError unless 0 < fraction < 1 and t_ref > 0.
double estimate_beta(double t_ref, double fraction);

/// Scale N minimizing sum_i (N * dP_i - count_i)^2, where dP_i is the
/// increment of the (fixed) exploit curve across bin i.
ExploitTotalFit fit_exploit_total(const DelayHistogram& hist, const patchrace::ExploitCurveParams& curve);

/// Noise-free CDF samples of Weibull(p) at the given times.
std::vector<CdfSample> weibull_cdf_samples(const patchrace::WeibullParams& p, std::span<const double> times);

/// Reference patch-development dataset: Weibull(0.57, 18.2 days) sampled at t = 1..120.
std::vector<CdfSample> reference_patch_dev_samples();

/// Spreads `events` over the bins in proportion to the curve's increase across
/// each bin. Bins where the curve falls get zero.
DelayHistogram proportional_histogram(const patchrace::ExploitCurveParams& curve, std::vector<double> bin_edges,
                                      double events);

/// Reference exploit-delay histogram: 160 events over [0, 1200] days in 30-day
/// bins, proportional to the default exploit curve.
DelayHistogram reference_exploit_histogram();

/// CSV with header `t,fraction`. Throws DataError naming the line on malformed input.
std::vector<CdfSample> read_cdf_samples(std::istream& in);
/// CSV with header `bin_start,bin_end,count`; bins must be contiguous.
DelayHistogram read_delay_histogram(std::istream& in);

}  // namespace secmodels::calibration
