#include "secmodels/patchrace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "secmodels/errors.hpp"

namespace secmodels::patchrace {

namespace {

constexpr double kOneYear = 365.0;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw DomainError(message);
    }
}

void require_time(double t, const char* op) {
    require(t >= 0.0 && std::isfinite(t), std::string(op) + ": t must be a finite value >= 0");
}

}  // namespace

void WeibullParams::validate() const {
    require(k > 0.0 && std::isfinite(k), "k must be > 0");
    require(lambda > 0.0 && std::isfinite(lambda), "lambda must be > 0");
}

void DeploymentParams::validate() const {
    require(beta > 0.0 && std::isfinite(beta), "beta must be > 0");
}

void ExploitCurveParams::validate() const {
    require(a_coeff >= 0.0 && std::isfinite(a_coeff), "A must be >= 0");
    require(a_exp >= 0.0 && std::isfinite(a_exp), "a must be >= 0");
    require(b_decay >= 0.0 && std::isfinite(b_decay), "b must be >= 0");
    const double peak = peak_value();
    if (!(peak >= 0.0 && peak <= 1.0)) {
        std::ostringstream msg;
        msg << "exploit curve peak A*(a/b)^a*e^-a = " << peak << " lies outside [0, 1]";
        throw ParameterError(msg.str());
    }
}

double ExploitCurveParams::peak_time() const {
    if (b_decay == 0.0) {
        return a_exp == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return a_exp / b_decay;
}

double ExploitCurveParams::peak_value() const {
    if (a_exp == 0.0) {
        return a_coeff;
    }
    if (b_decay == 0.0) {
        return a_coeff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return a_coeff * std::pow(a_exp / b_decay, a_exp) * std::exp(-a_exp);
}

void PatchRaceScenario::validate() const {
    dev.validate();
    dep.validate();
    exploit.validate();
    require(pre_disclosure_patch_fraction >= 0.0 && pre_disclosure_patch_fraction <= 1.0,
            "pre_disclosure_patch_fraction must be in [0, 1]");
    require(deploy_speedup >= 1.0 && std::isfinite(deploy_speedup), "deploy_speedup must be >= 1");
    require(grid.start() >= 0.0, "grid start must be >= 0 days");
}

PatchRaceScenario default_scenario() { return PatchRaceScenario{}; }

double weibull_pdf(const WeibullParams& p, double t) {
    p.validate();
    require(t > 0.0, "weibull_pdf: t must be > 0");
    const double z = t / p.lambda;
    return (p.k / p.lambda) * std::pow(z, p.k - 1.0) * std::exp(-std::pow(z, p.k));
}

double patch_developed_cdf(const WeibullParams& p, double t) {
    p.validate();
    require_time(t, "patch_developed_cdf");
    return -std::expm1(-std::pow(t / p.lambda, p.k));
}

double patch_developed_all_vulns(const WeibullParams& p, double pre_fraction, double t) {
    require(pre_fraction >= 0.0 && pre_fraction <= 1.0, "pre_disclosure_patch_fraction must be in [0, 1]");
    return pre_fraction + (1.0 - pre_fraction) * patch_developed_cdf(p, t);
}

double patch_deployed_cdf(const DeploymentParams& d, double t) {
    d.validate();
    require_time(t, "patch_deployed_cdf");
    return -std::expm1(-d.beta * t);
}

double exploit_availability(const ExploitCurveParams& e, double t) {
    require(e.a_coeff >= 0.0 && e.a_exp >= 0.0 && e.b_decay >= 0.0, "exploit curve parameters must be >= 0");
    require_time(t, "exploit_availability");
    double value = 0.0;
    if (e.clamp_monotone && t > e.peak_time()) {
        value = e.peak_value();
    } else {
        value = e.a_coeff * std::pow(t, e.a_exp) * std::exp(-e.b_decay * t);
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "exploit availability " << value << " at t=" << t << " lies outside [0, 1]";
        throw ParameterError(msg.str());
    }
    return value;
}

PatchDelayTable::PatchDelayTable(const PatchRaceScenario& scenario)
    : scenario_(scenario), beta_(scenario.effective_beta()) {
    scenario_.validate();
    if (scenario_.instant_dev) {
        return;
    }
    const auto& grid = scenario_.grid;
    const std::size_t n = grid.node_count();
    mass_.reserve(n);
    midpoint_.reserve(n);
    auto add_cell = [&](double lo, double hi) {
        // CDF difference in survival form: S(lo) - S(hi).
        const double m = std::exp(-std::pow(lo / scenario_.dev.lambda, scenario_.dev.k)) -
                         std::exp(-std::pow(hi / scenario_.dev.lambda, scenario_.dev.k));
        mass_.push_back(m);
        midpoint_.push_back(0.5 * (lo + hi));
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        add_cell(grid.node(i), grid.node(i + 1));
    }
    const double last = grid.node(n - 1);
    if (grid.stop() - last > 1e-12 * grid.step()) {
        add_cell(last, grid.stop());
    }
}

double PatchDelayTable::patched_fraction(double t) const {
    const auto& grid = scenario_.grid;
    if (!grid.contains(t)) {
        std::ostringstream msg;
        msg << "patched_fraction: t=" << t << " outside grid [" << grid.start() << ", " << grid.stop() << "]";
        throw DomainError(msg.str());
    }
    if (scenario_.instant_dev) {
        return -std::expm1(-beta_ * t);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mass_.size() && midpoint_[i] <= t; ++i) {
        total += mass_[i] * -std::expm1(-beta_ * (t - midpoint_[i]));
    }
    // The cell masses can sum to 1 + a few ulps.
    return std::min(total, 1.0);
}

double PatchDelayTable::exploit_available(double t) const {
    if (scenario_.instant_exploit) {
        return 1.0;
    }
    return exploit_availability(scenario_.exploit, t);
}

double PatchDelayTable::exploitable_fraction(double t) const {
    return exploit_available(t) * (1.0 - patched_fraction(t));
}

double patched_fraction(const PatchRaceScenario& s, double t) { return PatchDelayTable(s).patched_fraction(t); }

double exploitable_fraction(const PatchRaceScenario& s, double t) {
    return PatchDelayTable(s).exploitable_fraction(t);
}

RaceSummary race_summary(const PatchRaceScenario& s) {
    const PatchDelayTable table(s);
    const auto& grid = s.grid;
    if (!(grid.start() <= 0.0 && grid.stop() >= kOneYear)) {
        throw DomainError("race_summary: grid must cover [0, 365] days");
    }
    RaceSummary summary;
    if (grid.step() > 1.0) {
        std::ostringstream msg;
        msg << "grid step " << grid.step() << " days is coarser than 1 day; peak time is only resolved to the step";
        summary.warnings.push_back(msg.str());
    }
    bool first = true;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const double t = grid.node(i);
        const double v = table.exploitable_fraction(t);
        if (first || v > summary.peak_fraction) {
            summary.peak_time = t;
            summary.peak_fraction = v;
            first = false;
        }
    }
    summary.fraction_at_1yr = table.exploitable_fraction(kOneYear);
    return summary;
}

CurveSeries race_sweep(const PatchRaceScenario& s) {
    const PatchDelayTable table(s);
    const auto& grid = s.grid;
    const std::size_t n = grid.node_count();
    std::vector<double> t(n), dev(n), dep(n), patched(n), exploit(n), exposed(n);
    const DeploymentParams effective{s.effective_beta()};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        t[i] = x;
        dev[i] = s.instant_dev ? 1.0 : patch_developed_cdf(s.dev, x);
        dep[i] = patch_deployed_cdf(effective, x);
        patched[i] = table.patched_fraction(x);
        exploit[i] = table.exploit_available(x);
        exposed[i] = exploit[i] * (1.0 - patched[i]);
    }
    CurveSeries series("t", "days", std::move(t));
    series.add_column("patch_dev_cdf", std::move(dev));
    series.add_column("patch_dep_cdf", std::move(dep));
    series.add_column("patched_fraction", std::move(patched));
    series.add_column("exploit_availability", std::move(exploit));
    series.add_column("exploitable_fraction", std::move(exposed));
    return series;
}

}  // namespace secmodels::patchrace
