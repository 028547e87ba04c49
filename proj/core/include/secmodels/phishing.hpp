#pragma once

#include <cstdint>

#include "secmodels/series.hpp"

namespace secmodels::phishing {

/// Per-message probabilities describing one campaign scenario.
struct PhishingParams {
    double p_click = 0.03;
    double p_human_alert = 0.015;
    double p_machine_alert = 0.01;

    /// Throws DomainError naming the field if any probability is outside [0, 1].
    void validate() const;

    /// Per-message chance that either a human or a machine reports it.
    double p_alert_per_message() const noexcept;
};

/// Contemporary human baseline (no AI).
PhishingParams baseline();
/// AI writes messages as well as a human spear-phisher.
PhishingParams ai_writer();
/// AI writer countered by an automated detector.
PhishingParams ai_writer_with_detector();

struct CampaignPoint {
    std::int64_t n_messages = 0;
    double p_infection = 0.0;
    double p_no_alert = 1.0;
    double p_undetected = 0.0;
};

/// Chance that at least one of n messages is clicked.
double p_infection(const PhishingParams& params, std::int64_t n);
/// Chance that none of n messages is reported.
double p_no_alert(const PhishingParams& params, std::int64_t n);
/// Joint chance of a click and no report.
double p_undetected(const PhishingParams& params, std::int64_t n);

CampaignPoint campaign_point(const PhishingParams& params, std::int64_t n);

/// Campaign size in [1, n_max] maximizing p_undetected; ties go to the smaller n.
/// Throws DomainError if n_max < 1.
CampaignPoint optimal_campaign(const PhishingParams& params, std::int64_t n_max);

/// Rows n = 0..n_max with columns n, p_infection, p_no_alert, p_undetected.
CurveSeries campaign_sweep(const PhishingParams& params, std::int64_t n_max);

}  // namespace secmodels::phishing
