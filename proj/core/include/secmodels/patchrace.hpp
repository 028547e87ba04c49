#pragma once

#include <string>
#include <vector>

#include "secmodels/numerics.hpp"
#include "secmodels/series.hpp"

namespace secmodels::patchrace {

// All times in this module are days.

/// Weibull patch-development delay for vulnerabilities disclosed before a patch exists.
struct WeibullParams {
    double k = 0.57;        ///< shape
    double lambda = 18.2;   ///< scale, days
    void validate() const;
};

/// Exponential patch-deployment delay.
struct DeploymentParams {
    double beta = 1.0 / 144.0;  ///< per day
    void validate() const;
};

/// Exponentially capped power law A * t^a * exp(-b t).
///
/// The raw curve peaks at t = a/b and then declines. With clamp_monotone the
/// value is held at the peak for t > a/b, which turns it into a
/// sub-distribution CDF.
struct ExploitCurveParams {
    double a_coeff = 0.135;
    double a_exp = 0.349;
    double b_decay = 7.90e-4;
    bool clamp_monotone = false;

    /// Throws DomainError for negative fields and ParameterError when the peak leaves [0, 1].
    void validate() const;
    /// Time of the maximum (a/b); infinity when b == 0.
    double peak_time() const;
    /// A * (a/b)^a * e^-a, the largest fraction of vulnerabilities ever exploited.
    double peak_value() const;
};

struct PatchRaceScenario {
    WeibullParams dev;
    DeploymentParams dep;
    ExploitCurveParams exploit;
    double pre_disclosure_patch_fraction = 0.78;
    bool instant_dev = false;
    bool instant_exploit = false;
    double deploy_speedup = 1.0;  ///< multiplies beta
    numerics::Grid grid{0.0, 730.0, 0.25};

    void validate() const;
    double effective_beta() const noexcept { return dep.beta * deploy_speedup; }
};

struct RaceSummary {
    double peak_time = 0.0;
    double peak_fraction = 0.0;
    double fraction_at_1yr = 0.0;
    std::vector<std::string> warnings;
};

PatchRaceScenario default_scenario();

/// Weibull density. Throws DomainError for t <= 0; diverges as t -> 0+ when k < 1.
double weibull_pdf(const WeibullParams& p, double t);
/// 1 - exp(-(t/lambda)^k).
double patch_developed_cdf(const WeibullParams& p, double t);
/// Mixture with the cohort patched before disclosure: pre + (1 - pre) * F_dev(t).
double patch_developed_all_vulns(const WeibullParams& p, double pre_fraction, double t);
/// 1 - exp(-beta t).
double patch_deployed_cdf(const DeploymentParams& d, double t);
/// Raw or clamped exploit curve. Throws ParameterError if the value leaves [0, 1].
double exploit_availability(const ExploitCurveParams& e, double t);

/// Total patch delay CDF for one scenario, precomputed on its grid.
///
/// The development distribution is discretized into grid cells whose masses
/// are CDF differences F_dev(t_{i+1}) - F_dev(t_i), which sidesteps the
/// k < 1 density singularity at 0. Each cell is placed at its midpoint and
/// convolved with the deployment CDF. Immutable after construction.
class PatchDelayTable {
public:
    explicit PatchDelayTable(const PatchRaceScenario& scenario);

    /// Fraction of systems patched by t. Throws DomainError outside the grid.
    double patched_fraction(double t) const;
    /// Exploit availability after applying instant_exploit.
    double exploit_available(double t) const;
    /// exploit_available(t) * (1 - patched_fraction(t)).
    double exploitable_fraction(double t) const;

    const PatchRaceScenario& scenario() const noexcept { return scenario_; }

private:
    PatchRaceScenario scenario_;
    double beta_;
    std::vector<double> mass_;
    std::vector<double> midpoint_;
};

double patched_fraction(const PatchRaceScenario& s, double t);
double exploitable_fraction(const PatchRaceScenario& s, double t);

/// Peak and one-year exploitable fraction, scanned at grid resolution.
/// Throws DomainError unless the grid covers [0, 365]; a step above one day
/// only adds a warning.
RaceSummary race_summary(const PatchRaceScenario& s);

/// Columns t, patch_dev_cdf, patch_dep_cdf, patched_fraction,
/// exploit_availability, exploitable_fraction at every grid node.
CurveSeries race_sweep(const PatchRaceScenario& s);

}  // namespace secmodels::patchrace
