#include "secmodels/vulndisc.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "secmodels/errors.hpp"

namespace secmodels::vulndisc {

void PowerLawTester::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw DomainError("c must be > 0");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be >= 0");
    }
}

void AttemptRate::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw DomainError("eta must be > 0");
    }
}

PowerLawTester human_bug_bounty() { return {6.0, 0.4, Basis::time_weeks, "human_bug_bounty"}; }
PowerLawTester blackbox_fuzzer() { return {85.5, 3.0, Basis::time_weeks, "blackbox_fuzzer"}; }
PowerLawTester fast_ai() { return {60.0, 0.4, Basis::time_weeks, "fast_ai"}; }
PowerLawTester creative_ai() { return {6.0, 0.04, Basis::time_weeks, "creative_ai"}; }

double discovery_rate(const PowerLawTester& tester, double t) {
    tester.validate();
    if (!(t > 0.0)) {
        throw DomainError("discovery_rate: t must be > 0 (power law undefined at 0)");
    }
    return tester.c * std::pow(t, -tester.alpha);
}

double expected_discoveries(const PowerLawTester& tester, double t1, double t2) {
    tester.validate();
    if (!(t1 >= 0.0)) {
        throw DomainError("expected_discoveries: t1 must be >= 0");
    }
    if (!(t2 > t1)) {
        throw DomainError("expected_discoveries: t2 must be > t1");
    }
    const double u = 1.0 - tester.alpha;
    if (t1 == 0.0) {
        if (u <= 0.0) {
            std::ostringstream msg;
            msg << "expected_discoveries: integral diverges at t1 = 0 for alpha = " << tester.alpha
                << " (alpha >= 1 requires t1 > 0)";
            throw DivergenceError(msg.str());
        }
        return tester.c * std::pow(t2, u) / u;
    }
    // (t2^u - t1^u) / u == t1^u * expm1(u * ln(t2/t1)) / u; tends to ln(t2/t1) as u -> 0.
    const double log_ratio = std::log(t2 / t1);
    if (u == 0.0) {
        return tester.c * log_ratio;
    }
    return tester.c * std::pow(t1, u) * std::expm1(u * log_ratio) / u;
}

double convert_attempts_time(const AttemptRate& rate, double value, Conversion direction) {
    rate.validate();
    if (!(value >= 0.0)) {
        throw DomainError("convert_attempts_time: value must be >= 0");
    }
    return direction == Conversion::attempts_to_time ? value / rate.eta : value * rate.eta;
}

DiscoveryLimit total_discoveries_limit(const PowerLawTester& tester, double t1) {
    tester.validate();
    if (!(t1 > 0.0)) {
        throw DomainError("total_discoveries_limit: t1 must be > 0");
    }
    if (tester.alpha <= 1.0) {
        return Unbounded{};
    }
    return tester.c / (tester.alpha - 1.0) * std::pow(t1, 1.0 - tester.alpha);
}

Crossover rate_crossover(const PowerLawTester& a, const PowerLawTester& b) {
    a.validate();
    b.validate();
    if (a.basis != b.basis) {
        throw UnitError("rate_crossover: testers '" + a.label + "' and '" + b.label +
                        "' use different bases (time vs attempts)");
    }
    if (a.alpha == b.alpha) {
        if (a.c == b.c) {
            return Identical{};
        }
        return Never{};
    }
    return std::pow(a.c / b.c, 1.0 / (a.alpha - b.alpha));
}

double week_start(const PowerLawTester& tester, std::int64_t week) {
    const auto w = static_cast<double>(week);
    return tester.alpha < 1.0 ? w - 1.0 : w;
}

CurveSeries weekly_series(const PowerLawTester& tester, std::int64_t weeks) {
    tester.validate();
    if (weeks < 1) {
        throw DomainError("weeks must be >= 1, got " + std::to_string(weeks));
    }
    const auto rows = static_cast<std::size_t>(weeks);
    std::vector<double> week(rows), start(rows), count(rows), cumulative(rows);
    double running = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        const auto w = static_cast<std::int64_t>(i) + 1;
        const double lo = week_start(tester, w);
        week[i] = static_cast<double>(w);
        start[i] = lo;
        count[i] = expected_discoveries(tester, lo, lo + 1.0);
        running += count[i];
        cumulative[i] = running;
    }
    CurveSeries series("week", "weeks", std::move(week));
    series.add_column("interval_start", std::move(start));
    series.add_column("expected_discoveries", std::move(count));
    series.add_column("cumulative", std::move(cumulative));
    return series;
}

}  // namespace secmodels::vulndisc
