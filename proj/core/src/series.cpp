#include "secmodels/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "secmodels/errors.hpp"

namespace secmodels {

CurveSeries::CurveSeries(std::string x_label, std::string units, std::vector<double> x)
    : x_label_(std::move(x_label)), units_(std::move(units)) {
    if (x.empty()) {
        throw DomainError("curve series: x column is empty");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw DomainError("curve series: x column must be strictly increasing");
        }
    }
    columns_.emplace_back(x_label_, std::move(x));
}

void CurveSeries::add_column(std::string name, std::vector<double> values) {
    if (values.size() != rows()) {
        throw DomainError("curve series: column '" + name + "' has " + std::to_string(values.size()) +
                          " rows, expected " + std::to_string(rows()));
    }
    const bool taken = std::any_of(columns_.begin(), columns_.end(), [&](const auto& c) { return c.first == name; });
    if (taken) {
        throw DomainError("curve series: duplicate column '" + name + "'");
    }
    columns_.emplace_back(std::move(name), std::move(values));
}

const std::vector<double>& CurveSeries::column(const std::string& name) const {
    for (const auto& [n, values] : columns_) {
        if (n == name) {
            return values;
        }
    }
    throw DomainError("curve series: no column named '" + name + "'");
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        return "0";  // also folds -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_csv(std::ostream& out, const CurveSeries& series) {
    const auto& cols = series.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "," : "") << cols[c].first;
    }
    out << '\n';
    for (std::size_t r = 0; r < series.rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out << (c ? "," : "") << format_number(cols[c].second[r]);
        }
        out << '\n';
    }
}

}  // namespace secmodels
