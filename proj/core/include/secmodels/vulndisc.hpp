#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "secmodels/series.hpp"

namespace secmodels::vulndisc {

enum class Basis { time_weeks, attempts };

/// Power-law discovery capability: rate c * t^-alpha.
///
/// For the time basis, t is in weeks and c is the expected number of
/// discoveries per week at t = 1. For the attempts basis, t counts attempts.
struct PowerLawTester {
    double c = 6.0;
    double alpha = 0.4;
    Basis basis = Basis::time_weeks;
    std::string label = "human";

    /// Throws DomainError unless c > 0 and alpha >= 0.
    void validate() const;
};

struct AttemptRate {
    double eta = 1.0;  ///< attempts per week
    void validate() const;
};

enum class Conversion { attempts_to_time, time_to_attempts };

/// Cumulative discoveries never saturate (alpha <= 1).
struct Unbounded {};
using DiscoveryLimit = std::variant<double, Unbounded>;

/// Equal alpha and different c: the rates stay proportional forever.
struct Never {};
/// Same c and alpha: every t is a crossover.
struct Identical {};
using Crossover = std::variant<double, Never, Identical>;

PowerLawTester human_bug_bounty();
PowerLawTester blackbox_fuzzer();
PowerLawTester fast_ai();
PowerLawTester creative_ai();

/// c * t^-alpha. Throws DomainError for t <= 0.
double discovery_rate(const PowerLawTester& tester, double t);

/// Integral of the rate over [t1, t2].
///
/// Uses the logarithmic form at alpha == 1 and an expm1 form elsewhere, which
/// keeps the result continuous across alpha = 1. Throws DivergenceError when
/// alpha >= 1 and t1 == 0, DomainError when t1 < 0 or t2 <= t1.
double expected_discoveries(const PowerLawTester& tester, double t1, double t2);

double convert_attempts_time(const AttemptRate& rate, double value, Conversion direction);

/// Total discoveries on [t1, inf): c / (alpha - 1) * t1^(1 - alpha) when alpha > 1.
DiscoveryLimit total_discoveries_limit(const PowerLawTester& tester, double t1);

/// Time at which the two instantaneous rates are equal.
/// Throws UnitError when the testers use different bases.
Crossover rate_crossover(const PowerLawTester& a, const PowerLawTester& b);

/// Start of week w (1-based) under the canonical convention: [w-1, w] when
/// the integral converges at 0 (alpha < 1), otherwise [w, w+1].
double week_start(const PowerLawTester& tester, std::int64_t week);

/// Expected discoveries per week for weeks 1..weeks.
/// Columns: week, interval_start, expected_discoveries, cumulative.
CurveSeries weekly_series(const PowerLawTester& tester, std::int64_t weeks);

}  // namespace secmodels::vulndisc
