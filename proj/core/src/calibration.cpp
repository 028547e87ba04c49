#include "secmodels/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>

#include "secmodels/errors.hpp"
#include "secmodels/vulndisc.hpp"

namespace secmodels::calibration {

void DelayHistogram::validate() const {
    if (bin_edges.size() < 2) {
        throw DataError("histogram needs at least two bin edges");
    }
    if (counts.size() + 1 != bin_edges.size()) {
        throw DataError("histogram has " + std::to_string(counts.size()) + " counts for " +
                        std::to_string(bin_edges.size()) + " edges");
    }
    for (std::size_t i = 1; i < bin_edges.size(); ++i) {
        if (!(bin_edges[i] > bin_edges[i - 1])) {
            throw DataError("histogram bin edges must be strictly increasing");
        }
    }
    if (bin_edges.front() < 0.0) {
        throw DataError("histogram bin edges must be >= 0 days");
    }
    for (double c : counts) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw DataError("histogram counts must be finite and >= 0");
        }
    }
}

double DelayHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

namespace {

double weibull_cdf_model(std::span<const double> p, double t) {
    return -std::expm1(-std::pow(t / p[1], p[0]));
}

// Linear regression on the Weibull plot ln(-ln(1-F)) = k ln t - k ln lambda.
std::vector<double> weibull_plot_guess(std::span<const CdfSample> samples, double t_max) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& s : samples) {
        if (s.t > 0.0 && s.fraction > 0.0 && s.fraction < 1.0) {
            const double x = std::log(s.t);
            const double y = std::log(-std::log1p(-s.fraction));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    const double denom = n * sxx - sx * sx;
    if (n >= 2 && denom > 0.0) {
        const double k = (n * sxy - sx * sy) / denom;
        const double intercept = (sy - k * sx) / n;
        if (k > 0.0 && std::isfinite(k)) {
            const double lambda = std::exp(-intercept / k);
            if (std::isfinite(lambda) && lambda > 0.0) {
                return {k, lambda};
            }
        }
    }
    return {1.0, 0.5 * t_max};
}

}  // namespace

numerics::FitResult fit_weibull_cdf(std::span<const CdfSample> samples) {
    if (samples.size() < 4) {
        throw DataError("fit_weibull_cdf: need at least 4 samples, got " + std::to_string(samples.size()));
    }
    std::vector<CdfSample> sorted(samples.begin(), samples.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    std::size_t interior = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& s = sorted[i];
        if (!(s.t >= 0.0) || !std::isfinite(s.t)) {
            throw DataError("fit_weibull_cdf: sample times must be finite and >= 0");
        }
        if (!(s.fraction >= 0.0 && s.fraction <= 1.0)) {
            throw DataError("fit_weibull_cdf: sample fractions must lie in [0, 1]");
        }
        if (i > 0 && s.fraction < sorted[i - 1].fraction) {
            std::ostringstream msg;
            msg << "fit_weibull_cdf: fraction decreases between t=" << sorted[i - 1].t << " and t=" << s.t;
            throw DataError(msg.str());
        }
        if (s.fraction > 0.0 && s.fraction < 1.0) {
            ++interior;
        }
    }
    if (interior < 3) {
        throw DataError("fit_weibull_cdf: need at least 3 samples with fraction strictly inside (0, 1)");
    }

    const double t_max = sorted.back().t > 0.0 ? sorted.back().t : 1.0;
    std::vector<double> initial = weibull_plot_guess(sorted, t_max);
    const std::vector<numerics::Bounds> bounds{{0.01, 50.0}, {1e-6 * t_max, 1e4 * t_max}};
    for (std::size_t j = 0; j < initial.size(); ++j) {
        initial[j] = std::clamp(initial[j], bounds[j].lo, bounds[j].hi);
    }
    std::vector<numerics::DataPoint> data;
    data.reserve(sorted.size());
    for (const auto& s : sorted) {
        data.push_back({s.t, s.fraction});
    }
    return numerics::least_squares_fit(weibull_cdf_model, data, initial, bounds);
}

double estimate_power_law_c(double s_count, double t1, double t2, double alpha) {
    if (!(s_count >= 0.0) || !std::isfinite(s_count)) {
        throw DomainError("estimate_power_law_c: count must be a finite value >= 0");
    }
    const vulndisc::PowerLawTester unit{1.0, alpha, vulndisc::Basis::time_weeks, "unit"};
    return s_count / vulndisc::expected_discoveries(unit, t1, t2);
}

double estimate_beta(double t_ref, double fraction) {
    if (!(t_ref > 0.0) || !std::isfinite(t_ref)) {
        throw DomainError("estimate_beta: reference time must be > 0");
    }
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw DomainError("estimate_beta: fraction must lie strictly inside (0, 1)");
    }
    const double beta = -std::log1p(-fraction) / t_ref;
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw DomainError("estimate_beta: fraction too close to 0 or 1");
    }
    return beta;
}

ExploitTotalFit fit_exploit_total(const DelayHistogram& hist, const patchrace::ExploitCurveParams& curve) {
    hist.validate();
    curve.validate();
    const double observed = hist.total();
    if (!(observed > 0.0)) {
        throw DataError("fit_exploit_total: histogram has no events");
    }
    std::vector<double> increments(hist.counts.size());
    for (std::size_t i = 0; i < increments.size(); ++i) {
        increments[i] = patchrace::exploit_availability(curve, hist.bin_edges[i + 1]) -
                        patchrace::exploit_availability(curve, hist.bin_edges[i]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        num += increments[i] * hist.counts[i];
        den += increments[i] * increments[i];
    }
    if (!(den > 0.0)) {
        throw DataError("fit_exploit_total: exploit curve is flat across every bin");
    }
    const double total = num / den;
    double residual = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        const double r = total * increments[i] - hist.counts[i];
        residual += r * r;
    }
    ExploitTotalFit out;
    out.fit = numerics::FitResult{{total}, residual, 0, true};
    out.total = total;
    out.unexploited = total - observed;
    return out;
}

std::vector<CdfSample> weibull_cdf_samples(const patchrace::WeibullParams& p, std::span<const double> times) {
    std::vector<CdfSample> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back({t, patchrace::patch_developed_cdf(p, t)});
    }
    return out;
}

std::vector<CdfSample> reference_patch_dev_samples() {
    std::vector<double> times(120);
    std::iota(times.begin(), times.end(), 1.0);
    return weibull_cdf_samples(patchrace::WeibullParams{0.57, 18.2}, times);
}

DelayHistogram proportional_histogram(const patchrace::ExploitCurveParams& curve, std::vector<double> bin_edges,
                                      double events) {
    DelayHistogram hist;
    hist.counts.assign(bin_edges.size() > 0 ? bin_edges.size() - 1 : 0, 0.0);
    hist.bin_edges = std::move(bin_edges);
    hist.validate();
    double rising = 0.0;
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        const double inc = patchrace::exploit_availability(curve, hist.bin_edges[i + 1]) -
                           patchrace::exploit_availability(curve, hist.bin_edges[i]);
        hist.counts[i] = std::max(inc, 0.0);
        rising += hist.counts[i];
    }
    if (!(rising > 0.0)) {
        throw DataError("proportional_histogram: curve never increases across the bins");
    }
    for (double& c : hist.counts) {
        c *= events / rising;
    }
    return hist;
}

DelayHistogram reference_exploit_histogram() {
    std::vector<double> edges;
    for (int d = 0; d <= 1200; d += 30) {
        edges.push_back(d);
    }
    return proportional_histogram(patchrace::ExploitCurveParams{}, std::move(edges), 160.0);
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
}

double parse_field(const std::string& text, std::size_t line_no, const std::string& column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        fail(line_no, "column '" + column + "' is not a number: '" + text + "'");
    }
    return value;
}

// Reads a header-checked numeric CSV into rows.
std::vector<std::vector<double>> read_table(std::istream& in, const std::vector<std::string>& header,
                                            std::vector<std::size_t>* line_numbers) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line);
        if (!have_header) {
            if (fields != header) {
                std::string expected;
                for (const auto& h : header) {
                    expected += (expected.empty() ? "" : ",") + h;
                }
                fail(line_no, "expected header '" + expected + "'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            fail(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        std::vector<double> row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            row.push_back(parse_field(fields[i], line_no, header[i]));
        }
        rows.push_back(std::move(row));
        if (line_numbers) {
            line_numbers->push_back(line_no);
        }
    }
    if (!have_header) {
        throw DataError("line 1: missing header row");
    }
    return rows;
}

}  // namespace

std::vector<CdfSample> read_cdf_samples(std::istream& in) {
    std::vector<std::size_t> lines;
    const auto rows = read_table(in, {"t", "fraction"}, &lines);
    std::vector<CdfSample> samples;
    samples.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0] < 0.0) {
            fail(lines[i], "t must be >= 0");
        }
        if (rows[i][1] < 0.0 || rows[i][1] > 1.0) {
            fail(lines[i], "fraction must lie in [0, 1]");
        }
        samples.push_back({rows[i][0], rows[i][1]});
    }
    return samples;
}

DelayHistogram read_delay_histogram(std::istream& in) {
    std::vector<std::size_t> lines;
    const auto rows = read_table(in, {"bin_start", "bin_end", "count"}, &lines);
    DelayHistogram hist;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double lo = rows[i][0];
        const double hi = rows[i][1];
        const double count = rows[i][2];
        if (!(hi > lo)) {
            fail(lines[i], "bin_end must be > bin_start");
        }
        if (count < 0.0) {
            fail(lines[i], "count must be >= 0");
        }
        if (hist.bin_edges.empty()) {
            hist.bin_edges.push_back(lo);
        } else if (std::abs(lo - hist.bin_edges.back()) > 1e-9 * std::max(1.0, std::abs(lo))) {
            fail(lines[i], "bins must be contiguous (bin_start equals previous bin_end)");
        }
        hist.bin_edges.push_back(hi);
        hist.counts.push_back(count);
    }
    if (hist.counts.empty()) {
        throw DataError("histogram has no rows");
    }
    return hist;
}

}  // namespace secmodels::calibration
