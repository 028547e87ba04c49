#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace secmodels::numerics {

/// Uniform discretization of [start, stop].
///
/// Nodes are start + i * step for i in [0, node_count()). When the span is not
/// an exact multiple of step the last node falls short of stop; integration
/// closes the remaining partial cell.
class Grid {
public:
    /// Throws DomainError unless step > 0, stop > start and at least two nodes fit.
    Grid(double start, double stop, double step);

    double start() const noexcept { return start_; }
    double stop() const noexcept { return stop_; }
    double step() const noexcept { return step_; }

    std::size_t node_count() const noexcept { return count_; }
    double node(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
    bool contains(double x) const noexcept { return x >= start_ && x <= stop_; }

    /// Same span with half the step.
    Grid refined() const { return Grid(start_, stop_, step_ / 2.0); }

private:
    double start_;
    double stop_;
    double step_;
    std::size_t count_;
};

struct FitResult {
    std::vector<double> params;
    double residual = 0.0;  ///< sum of squared errors at params
    int iterations = 0;
    bool converged = false;
};

struct IntArgmax {
    std::int64_t arg;
    double value;
};

struct DataPoint {
    double x;
    double y;
};

struct Bounds {
    double lo;
    double hi;
};

using Model = std::function<double(std::span<const double> params, double x)>;

/// Composite trapezoid rule over the grid nodes (plus the partial tail cell).
/// Throws EvaluationError naming the node if f is not finite there.
double integrate_trapezoid(const std::function<double(double)>& f, const Grid& grid);

/// Smallest n in [lo, hi] attaining max f(n). Full scan; unimodality is not assumed.
IntArgmax argmax_int(const std::function<double(std::int64_t)>& f, std::int64_t lo, std::int64_t hi);

/// Sum of squared residuals of model(params, x_i) against y_i.
double sum_squared_error(const Model& model, std::span<const double> params, std::span<const DataPoint> data);

/// Derivative-free box-bounded least squares.
///
/// Nelder-Mead simplex search, with vertices projected onto the box. The search
/// is run from the initial point and from four deterministic jittered restarts;
/// the best result is returned. Converged when the relative spread of the
/// simplex residuals drops below 1e-10 or the simplex diameter below 1e-9
/// (relative to parameter magnitude).
///
/// Throws DataError when data has fewer than max(3, params + 1) points,
/// DomainError when initial lies outside bounds, EvaluationError when the
/// model returns a non-finite value inside the box.
FitResult least_squares_fit(const Model& model, std::span<const DataPoint> data,
                            std::span<const double> initial, std::span<const Bounds> bounds);

}  // namespace secmodels::numerics
