#include "secmodels/montecarlo.hpp"

#include <algorithm>
#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "secmodels/errors.hpp"

namespace secmodels::montecarlo {

namespace {

using Engine = std::mt19937_64;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMajorantPieces = 64;

Engine block_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return Engine(seq);
}

double uniform(Engine& eng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
}

// Exponential(1) by inversion; u < 1 so the log is finite.
double unit_exponential(Engine& eng) { return -std::log1p(-uniform(eng)); }

// Runs trial blocks across workers. `body(engine, trials_in_block, sums)` adds
// its per-block totals into `sums` (width slots). Returns block sums combined
// in block order.
template <class Body>
std::vector<double> run_blocks(const SimConfig& cfg, std::size_t width, Body body) {
    cfg.validate();
    const std::uint64_t blocks = (cfg.trials + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<double>> partial(blocks, std::vector<double>(width, 0.0));

    auto work = [&](unsigned worker) {
        for (std::uint64_t b = worker; b < blocks; b += cfg.workers) {
            const std::uint64_t first = b * kBlockSize;
            const std::uint64_t count = std::min(kBlockSize, cfg.trials - first);
            Engine eng = block_engine(cfg.seed, b);
            body(eng, count, partial[b]);
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, blocks));
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::vector<double> total(width, 0.0);
    for (const auto& p : partial) {
        for (std::size_t i = 0; i < width; ++i) {
            total[i] += p[i];
        }
    }
    return total;
}

SimEstimate binomial(double successes, std::uint64_t trials) {
    const double n = static_cast<double>(trials);
    const double p = successes / n;
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / n), trials};
}

SimEstimate from_moments(double sum, double sum_sq, std::uint64_t trials) {
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    double var = 0.0;
    if (trials > 1) {
        var = std::max((sum_sq - n * mean * mean) / (n - 1.0), 0.0);
    }
    return {mean, std::sqrt(var / n), trials};
}

void check_probes(std::span<const double> probes) {
    for (double t : probes) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw DomainError("probe times must be finite and >= 0");
        }
    }
}

void check_discovery_interval(const vulndisc::PowerLawTester& tester, double t1, double t2) {
    tester.validate();
    if (!(t1 > 0.0)) {
        if (tester.alpha >= 1.0) {
            throw DivergenceError("simulate_discovery: intensity is not integrable at t1 = 0 for alpha >= 1");
        }
        throw DomainError("simulate_discovery: t1 must be > 0 (thinning majorant is infinite at 0)");
    }
    if (!(t2 > t1) || !std::isfinite(t2)) {
        throw DomainError("simulate_discovery: t2 must be finite and > t1");
    }
}

// Number of accepted events on [lo, hi]. The majorant on each geometric piece
// is the intensity at its left end, since c t^-alpha is non-increasing.
std::uint32_t count_events(Engine& eng, const vulndisc::PowerLawTester& tester, double lo, double hi) {
    std::uint32_t events = 0;
    const double ratio = std::pow(hi / lo, 1.0 / kMajorantPieces);
    double left = lo;
    for (int piece = 0; piece < kMajorantPieces; ++piece) {
        const double right = piece + 1 == kMajorantPieces ? hi : left * ratio;
        const double rate_max = tester.c * std::pow(left, -tester.alpha);
        double t = left;
        while (true) {
            t += unit_exponential(eng) / rate_max;
            if (t > right) {
                break;
            }
            const double accept = std::pow(t / left, -tester.alpha);
            if (uniform(eng) < accept) {
                ++events;
            }
        }
        left = right;
    }
    return events;
}

struct RaceDraw {
    double patch_delay;
    double exploit_time;
};

RaceDraw draw_race(Engine& eng, const patchrace::PatchRaceScenario& s, double beta) {
    // Always consume three uniforms so every trial uses the same stream layout.
    const double u_dev = uniform(eng);
    const double u_dep = uniform(eng);
    const double u_exp = uniform(eng);
    const double dev = s.instant_dev ? 0.0 : s.dev.lambda * std::pow(-std::log1p(-u_dev), 1.0 / s.dev.k);
    const double dep = -std::log1p(-u_dep) / beta;
    const double exploit = s.instant_exploit ? 0.0 : exploit_arrival_quantile(s.exploit, u_exp);
    return {dev + dep, exploit};
}

}  // namespace

std::string_view rng_algorithm() { return "mt19937_64/seed_seq(seed:block)/block4096"; }

void SimConfig::validate() const {
    if (trials < 1) {
        throw DomainError("trials must be >= 1");
    }
    if (workers < 1) {
        throw DomainError("workers must be >= 1");
    }
}

double exploit_arrival_quantile(const patchrace::ExploitCurveParams& e, double level) {
    const double A = e.a_coeff;
    const double a = e.a_exp;
    const double b = e.b_decay;
    if (!(level >= 0.0)) {
        throw DomainError("exploit_arrival_quantile: level must be >= 0");
    }
    if (level == 0.0) {
        return 0.0;
    }
    if (A == 0.0) {
        return kInf;
    }
    if (a == 0.0) {
        // Flat curve: mass A sits at t = 0.
        return level < A ? 0.0 : kInf;
    }
    const double y = level / A;
    if (b == 0.0) {
        return std::pow(y, 1.0 / a);
    }
    // Rising branch of a ln t - b t = ln y: t = -(a/b) W0(-(b/a) y^(1/a)).
    const double z = -(b / a) * std::pow(y, 1.0 / a);
    const double branch_point = -std::exp(-1.0);
    if (z < branch_point) {
        // Above the cap, except for rounding right at the peak.
        if (z > branch_point * (1.0 + 1e-12)) {
            return a / b;
        }
        return kInf;
    }
    return -(a / b) * boost::math::lambert_w0(z);
}

PhishingEstimate simulate_phishing(const phishing::PhishingParams& params, std::int64_t n, const SimConfig& cfg) {
    params.validate();
    if (n < 0) {
        throw DomainError("simulate_phishing: n must be >= 0");
    }
    const auto sums = run_blocks(cfg, 3, [&](Engine& eng, std::uint64_t trials, std::vector<double>& acc) {
        std::uint64_t infected = 0, quiet = 0, undetected = 0;
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            bool clicked = false;
            bool reported = false;
            for (std::int64_t m = 0; m < n; ++m) {
                clicked |= uniform(eng) < params.p_click;
                const bool human = uniform(eng) < params.p_human_alert;
                const bool machine = uniform(eng) < params.p_machine_alert;
                reported |= human || machine;
            }
            infected += clicked;
            quiet += !reported;
            undetected += clicked && !reported;
        }
        acc[0] += static_cast<double>(infected);
        acc[1] += static_cast<double>(quiet);
        acc[2] += static_cast<double>(undetected);
    });
    return {binomial(sums[0], cfg.trials), binomial(sums[1], cfg.trials), binomial(sums[2], cfg.trials)};
}

SimEstimate simulate_discovery(const vulndisc::PowerLawTester& tester, double t1, double t2, const SimConfig& cfg) {
    check_discovery_interval(tester, t1, t2);
    const auto sums = run_blocks(cfg, 2, [&](Engine& eng, std::uint64_t trials, std::vector<double>& acc) {
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            const double k = count_events(eng, tester, t1, t2);
            acc[0] += k;
            acc[1] += k * k;
        }
    });
    return from_moments(sums[0], sums[1], cfg.trials);
}

std::vector<std::vector<std::uint32_t>> simulate_discovery_counts(const vulndisc::PowerLawTester& tester,
                                                                  std::span<const double> edges,
                                                                  const SimConfig& cfg) {
    if (edges.size() < 2) {
        throw DomainError("simulate_discovery_counts: need at least two edges");
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        check_discovery_interval(tester, edges[i], edges[i + 1]);
    }
    cfg.validate();
    const std::size_t intervals = edges.size() - 1;
    std::vector<std::vector<std::uint32_t>> counts(cfg.trials, std::vector<std::uint32_t>(intervals));
    // Single-threaded, with the same per-block seeding as run_blocks.
    const std::uint64_t blocks = (cfg.trials + kBlockSize - 1) / kBlockSize;
    for (std::uint64_t block_index = 0; block_index < blocks; ++block_index) {
        Engine eng = block_engine(cfg.seed, block_index);
        const std::uint64_t first = block_index * kBlockSize;
        const std::uint64_t last = std::min(cfg.trials, first + kBlockSize);
        for (std::uint64_t trial = first; trial < last; ++trial) {
            for (std::size_t i = 0; i < intervals; ++i) {
                counts[trial][i] = count_events(eng, tester, edges[i], edges[i + 1]);
            }
        }
    }
    return counts;
}

std::vector<SimEstimate> simulate_patch_delay(const patchrace::PatchRaceScenario& s, std::span<const double> probes,
                                              const SimConfig& cfg) {
    s.validate();
    check_probes(probes);
    const double beta = s.effective_beta();
    const auto sums = run_blocks(cfg, probes.size(), [&](Engine& eng, std::uint64_t trials, std::vector<double>& acc) {
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            const RaceDraw d = draw_race(eng, s, beta);
            for (std::size_t i = 0; i < probes.size(); ++i) {
                acc[i] += d.patch_delay <= probes[i] ? 1.0 : 0.0;
            }
        }
    });
    std::vector<SimEstimate> out;
    out.reserve(probes.size());
    for (double v : sums) {
        out.push_back(binomial(v, cfg.trials));
    }
    return out;
}

std::vector<SimEstimate> simulate_race(const patchrace::PatchRaceScenario& s, std::span<const double> probes,
                                       const SimConfig& cfg) {
    s.validate();
    check_probes(probes);
    if (!s.instant_exploit && !s.exploit.clamp_monotone) {
        throw ConfigurationError(
            "simulate_race: the raw exploit curve declines after t = a/b and cannot be sampled; enable "
            "clamp_monotone (raw and clamped curves agree for probe times <= a/b)");
    }
    const double beta = s.effective_beta();
    const auto sums = run_blocks(cfg, probes.size(), [&](Engine& eng, std::uint64_t trials, std::vector<double>& acc) {
        for (std::uint64_t trial = 0; trial < trials; ++trial) {
            const RaceDraw d = draw_race(eng, s, beta);
            for (std::size_t i = 0; i < probes.size(); ++i) {
                const bool exploited = d.exploit_time <= probes[i];
                const bool unpatched = d.patch_delay > probes[i];
                acc[i] += exploited && unpatched ? 1.0 : 0.0;
            }
        }
    });
    std::vector<SimEstimate> out;
    out.reserve(probes.size());
    for (double v : sums) {
        out.push_back(binomial(v, cfg.trials));
    }
    return out;
}

}  // namespace secmodels::montecarlo
