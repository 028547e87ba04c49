#include "secmodels/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "secmodels/errors.hpp"

namespace secmodels::numerics {

Grid::Grid(double start, double stop, double step) : start_(start), stop_(stop), step_(step), count_(0) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
        throw DomainError("grid: start, stop and step must be finite");
    }
    if (!(step > 0.0)) {
        throw DomainError("grid: step must be > 0");
    }
    if (!(stop > start)) {
        throw DomainError("grid: stop must be > start");
    }
    const double cells = (stop - start) / step;
    count_ = static_cast<std::size_t>(std::floor(cells + 1e-9)) + 1;
    if (count_ < 2) {
        throw DomainError("grid: step larger than the span leaves fewer than 2 nodes");
    }
}

namespace {

double checked(double value, double x) {
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "integrand is not finite at node x=" << x;
        throw EvaluationError(msg.str());
    }
    return value;
}

}  // namespace

double integrate_trapezoid(const std::function<double(double)>& f, const Grid& grid) {
    const std::size_t n = grid.node_count();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = grid.node(i);
        interior += checked(f(x), x);
    }
    const double x0 = grid.node(0);
    const double xl = grid.node(n - 1);
    const double f0 = checked(f(x0), x0);
    const double fl = checked(f(xl), xl);
    double total = grid.step() * (0.5 * f0 + interior + 0.5 * fl);

    const double tail = grid.stop() - xl;
    if (tail > 1e-12 * grid.step()) {
        const double fs = checked(f(grid.stop()), grid.stop());
        total += 0.5 * tail * (fl + fs);
    }
    return total;
}

IntArgmax argmax_int(const std::function<double(std::int64_t)>& f, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw DomainError("argmax_int: lo must be <= hi");
    }
    IntArgmax best{lo, 0.0};
    bool first = true;
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double v = f(n);
        if (!std::isfinite(v)) {
            throw EvaluationError("argmax_int: f(" + std::to_string(n) + ") is not finite");
        }
        if (first || v > best.value) {
            best = {n, v};
            first = false;
        }
    }
    return best;
}

double sum_squared_error(const Model& model, std::span<const double> params, std::span<const DataPoint> data) {
    double sse = 0.0;
    for (const auto& p : data) {
        const double r = model(params, p.x) - p.y;
        sse += r * r;
    }
    return sse;
}

namespace {

constexpr double kRelResidualTol = 1e-10;
constexpr double kStepTol = 1e-9;
constexpr int kMaxIterationsPerDim = 4000;
constexpr int kJitteredRestarts = 4;

struct Vertex {
    std::vector<double> x;
    double f;
};

class SimplexSearch {
public:
    SimplexSearch(const Model& model, std::span<const DataPoint> data, std::span<const Bounds> bounds)
        : model_(model), data_(data), bounds_(bounds) {}

    double evaluate(const std::vector<double>& x) const {
        const double f = sum_squared_error(model_, x, data_);
        if (!std::isfinite(f)) {
            std::ostringstream msg;
            msg << "least_squares_fit: model is not finite at params [";
            for (std::size_t i = 0; i < x.size(); ++i) {
                msg << (i ? ", " : "") << x[i];
            }
            msg << "]";
            throw EvaluationError(msg.str());
        }
        return f;
    }

    void project(std::vector<double>& x) const {
        for (std::size_t j = 0; j < x.size(); ++j) {
            x[j] = std::clamp(x[j], bounds_[j].lo, bounds_[j].hi);
        }
    }

    FitResult run(std::vector<double> start) const {
        const std::size_t d = start.size();
        project(start);

        std::vector<Vertex> simplex;
        simplex.reserve(d + 1);
        simplex.push_back({start, evaluate(start)});
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> v = start;
            double delta = start[j] != 0.0 ? 0.05 * std::abs(start[j]) : 2.5e-4;
            if (v[j] + delta > bounds_[j].hi) {
                delta = -delta;
            }
            v[j] += delta;
            project(v);
            simplex.push_back({v, evaluate(v)});
        }

        const int max_iter = kMaxIterationsPerDim * static_cast<int>(d);
        int iter = 0;
        bool converged = false;
        const auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

        while (iter < max_iter) {
            std::stable_sort(simplex.begin(), simplex.end(), by_f);
            if (has_converged(simplex)) {
                converged = true;
                break;
            }
            ++iter;

            std::vector<double> centroid(d, 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    centroid[j] += simplex[i].x[j] / static_cast<double>(d);
                }
            }
            const Vertex& worst = simplex[d];
            auto along = [&](double coeff) {
                std::vector<double> p(d);
                for (std::size_t j = 0; j < d; ++j) {
                    p[j] = centroid[j] + coeff * (worst.x[j] - centroid[j]);
                }
                project(p);
                return Vertex{p, evaluate(p)};
            };

            Vertex reflected = along(-1.0);
            if (reflected.f < simplex[0].f) {
                Vertex expanded = along(-2.0);
                simplex[d] = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
            } else if (reflected.f < simplex[d - 1].f) {
                simplex[d] = std::move(reflected);
            } else {
                Vertex contracted = reflected.f < worst.f ? along(-0.5) : along(0.5);
                if (contracted.f < std::min(reflected.f, worst.f)) {
                    simplex[d] = std::move(contracted);
                } else {
                    for (std::size_t i = 1; i <= d; ++i) {
                        for (std::size_t j = 0; j < d; ++j) {
                            simplex[i].x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
                        }
                        project(simplex[i].x);
                        simplex[i].f = evaluate(simplex[i].x);
                    }
                }
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_f);
        return FitResult{simplex[0].x, simplex[0].f, iter, converged};
    }

private:
    static bool has_converged(const std::vector<Vertex>& simplex) {
        const double best = simplex.front().f;
        const double worst = simplex.back().f;
        if (worst - best <= kRelResidualTol * std::abs(best) && best > 0.0) {
            return true;
        }
        double diameter = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (std::size_t j = 0; j < simplex[0].x.size(); ++j) {
                const double scale = std::max(1.0, std::abs(simplex[0].x[j]));
                diameter = std::max(diameter, std::abs(simplex[i].x[j] - simplex[0].x[j]) / scale);
            }
        }
        return diameter < kStepTol;
    }

    const Model& model_;
    std::span<const DataPoint> data_;
    std::span<const Bounds> bounds_;
};

}  // namespace

FitResult least_squares_fit(const Model& model, std::span<const DataPoint> data,
                            std::span<const double> initial, std::span<const Bounds> bounds) {
    const std::size_t d = initial.size();
    if (d == 0) {
        throw DomainError("least_squares_fit: at least one parameter is required");
    }
    if (bounds.size() != d) {
        throw DomainError("least_squares_fit: bounds must have one entry per parameter");
    }
    const std::size_t needed = std::max<std::size_t>(3, d + 1);
    if (data.size() < needed) {
        throw DataError("least_squares_fit: need at least " + std::to_string(needed) + " data points, got " +
                        std::to_string(data.size()));
    }
    for (std::size_t j = 0; j < d; ++j) {
        if (!(bounds[j].lo <= bounds[j].hi)) {
            throw DomainError("least_squares_fit: bound " + std::to_string(j) + " has lo > hi");
        }
        if (!(initial[j] >= bounds[j].lo && initial[j] <= bounds[j].hi)) {
            throw DomainError("least_squares_fit: initial parameter " + std::to_string(j) + " lies outside its bounds");
        }
    }

    const SimplexSearch search(model, data, bounds);
    const std::vector<double> x0(initial.begin(), initial.end());

    // Each start is polished by a second pass from a fresh simplex around its optimum.
    int total_iterations = 0;
    auto solve_from = [&](const std::vector<double>& start) {
        FitResult r = search.run(start);
        FitResult polished = search.run(r.params);
        total_iterations += r.iterations + polished.iterations;
        return polished.residual <= r.residual ? polished : r;
    };

    FitResult best = solve_from(x0);

    std::mt19937_64 jitter_rng(0x5eedf17ULL);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    for (int restart = 0; restart < kJitteredRestarts; ++restart) {
        std::vector<double> start = x0;
        for (std::size_t j = 0; j < d; ++j) {
            const double magnitude = start[j] != 0.0 ? std::abs(start[j]) : 1.0;
            start[j] += jitter(jitter_rng) * magnitude;
        }
        search.project(start);
        FitResult candidate = solve_from(start);
        if (candidate.residual < best.residual) {
            best = std::move(candidate);
        }
    }
    best.iterations = total_iterations;
    return best;
}

}  // namespace secmodels::numerics
