#include "secmodels/phishing.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "secmodels/errors.hpp"
#include "secmodels/numerics.hpp"

namespace secmodels::phishing {

namespace {

void check_probability(const char* name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(name) + " must be in [0, 1], got " + std::to_string(p));
    }
}

void check_count(std::int64_t n) {
    if (n < 0) {
        throw DomainError("message count must be >= 0, got " + std::to_string(n));
    }
}

// (1 - p)^n without losing precision for small p.
double survive(double p, std::int64_t n) {
    if (n == 0) {
        return 1.0;
    }
    if (p >= 1.0) {
        return 0.0;
    }
    return std::exp(static_cast<double>(n) * std::log1p(-p));
}

}  // namespace

void PhishingParams::validate() const {
    check_probability("p_click", p_click);
    check_probability("p_human_alert", p_human_alert);
    check_probability("p_machine_alert", p_machine_alert);
}

double PhishingParams::p_alert_per_message() const noexcept {
    return p_human_alert + p_machine_alert - p_human_alert * p_machine_alert;
}

PhishingParams baseline() { return {0.03, 0.015, 0.01}; }
PhishingParams ai_writer() { return {0.30, 0.005, 0.01}; }
PhishingParams ai_writer_with_detector() { return {0.30, 0.005, 0.25}; }

double p_infection(const PhishingParams& params, std::int64_t n) {
    params.validate();
    check_count(n);
    if (n == 0) {
        return 0.0;
    }
    if (params.p_click >= 1.0) {
        return 1.0;
    }
    return -std::expm1(static_cast<double>(n) * std::log1p(-params.p_click));
}

double p_no_alert(const PhishingParams& params, std::int64_t n) {
    params.validate();
    check_count(n);
    return survive(params.p_alert_per_message(), n);
}

double p_undetected(const PhishingParams& params, std::int64_t n) {
    return p_infection(params, n) * p_no_alert(params, n);
}

CampaignPoint campaign_point(const PhishingParams& params, std::int64_t n) {
    const double infected = p_infection(params, n);
    const double quiet = p_no_alert(params, n);
    return {n, infected, quiet, infected * quiet};
}

CampaignPoint optimal_campaign(const PhishingParams& params, std::int64_t n_max) {
    params.validate();
    if (n_max < 1) {
        throw DomainError("n_max must be >= 1, got " + std::to_string(n_max));
    }
    const auto best = numerics::argmax_int([&](std::int64_t n) { return p_undetected(params, n); }, 1, n_max);
    return campaign_point(params, best.arg);
}

CurveSeries campaign_sweep(const PhishingParams& params, std::int64_t n_max) {
    params.validate();
    if (n_max < 1) {
        throw DomainError("n_max must be >= 1, got " + std::to_string(n_max));
    }
    const auto rows = static_cast<std::size_t>(n_max) + 1;
    std::vector<double> n(rows), infected(rows), quiet(rows), undetected(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto point = campaign_point(params, static_cast<std::int64_t>(i));
        n[i] = static_cast<double>(i);
        infected[i] = point.p_infection;
        quiet[i] = point.p_no_alert;
        undetected[i] = point.p_undetected;
    }
    CurveSeries series("n", "messages", std::move(n));
    series.add_column("p_infection", std::move(infected));
    series.add_column("p_no_alert", std::move(quiet));
    series.add_column("p_undetected", std::move(undetected));
    return series;
}

}  // namespace secmodels::phishing
