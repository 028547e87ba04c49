#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace secmodels {

/// Named, equal-length numeric columns. The first column is the x axis and
/// must be strictly increasing. Every sweep, convolution and simulation in
/// the library emits one of these.
class CurveSeries {
public:
    CurveSeries(std::string x_label, std::string units, std::vector<double> x);

    /// Throws DomainError if the column length does not match x or the name is taken.
    void add_column(std::string name, std::vector<double> values);

    const std::string& x_label() const noexcept { return x_label_; }
    const std::string& units() const noexcept { return units_; }
    std::size_t rows() const noexcept { return columns_.front().second.size(); }
    std::size_t column_count() const noexcept { return columns_.size(); }

    const std::vector<double>& x() const noexcept { return columns_.front().second; }
    /// Throws DomainError for an unknown name.
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<std::pair<std::string, std::vector<double>>>& columns() const noexcept { return columns_; }

private:
    std::string x_label_;
    std::string units_;
    std::vector<std::pair<std::string, std::vector<double>>> columns_;
};

/// CSV number formatting: 12 significant digits, '.' decimal point.
std::string format_number(double value);

/// Header row then one row per sample; comma separated, LF line endings.
void write_csv(std::ostream& out, const CurveSeries& series);

}  // namespace secmodels
