#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "secmodels/patchrace.hpp"
#include "secmodels/phishing.hpp"
#include "secmodels/vulndisc.hpp"

/// Sampling oracle for the analytic models.
///
/// Nothing here calls the analytic CDFs: every draw uses its own inverse-CDF
/// or Bernoulli trial. Trials are grouped into fixed blocks of kBlockSize;
/// block b gets an mt19937_64 seeded from (seed, b), and block sums are
/// combined in block order, so results do not depend on the worker count.
namespace secmodels::montecarlo {

inline constexpr std::uint64_t kBlockSize = 4096;

/// Identifies the sampling scheme; written next to simulation output.
std::string_view rng_algorithm();

struct SimConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 20240531;
    unsigned workers = 1;

    void validate() const;
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

struct PhishingEstimate {
    SimEstimate infection;
    SimEstimate no_alert;
    SimEstimate undetected;
};

/// n independent messages per trial; each draws a click, a human report and a
/// machine report. A campaign is alerted if any message is reported by either.
PhishingEstimate simulate_phishing(const phishing::PhishingParams& params, std::int64_t n, const SimConfig& cfg);

/// Event count of the nonhomogeneous Poisson process with intensity c t^-alpha
/// on [t1, t2], simulated by thinning against a piecewise-constant majorant.
/// Throws DivergenceError for t1 <= 0 with alpha >= 1, DomainError for other
/// t1 <= 0 or t2 <= t1.
SimEstimate simulate_discovery(const vulndisc::PowerLawTester& tester, double t1, double t2, const SimConfig& cfg);

/// Per-trial event counts in each interval [edges[i], edges[i+1]]; result[trial][interval].
std::vector<std::vector<std::uint32_t>> simulate_discovery_counts(const vulndisc::PowerLawTester& tester,
                                                                  std::span<const double> edges,
                                                                  const SimConfig& cfg);

/// Fraction of trials with dev + dep delay <= t, per probe time.
std::vector<SimEstimate> simulate_patch_delay(const patchrace::PatchRaceScenario& s, std::span<const double> probes,
                                              const SimConfig& cfg);

/// Fraction of trials in which an exploit exists and the system is still unpatched, per probe time.
///
/// Exploit arrival is sampled from the clamped curve as a sub-distribution:
/// with probability 1 - peak_value() it never arrives. Throws
/// ConfigurationError when the curve is needed and clamp_monotone is off.
std::vector<SimEstimate> simulate_race(const patchrace::PatchRaceScenario& s, std::span<const double> probes,
                                       const SimConfig& cfg);

/// Time at which the clamped exploit curve first reaches `level`; infinity above the peak.
double exploit_arrival_quantile(const patchrace::ExploitCurveParams& e, double level);

}  // namespace secmodels::montecarlo
