#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "scenario.hpp"
#include "secmodels/calibration.hpp"
#include "secmodels/errors.hpp"
#include "secmodels/montecarlo.hpp"
#include "secmodels/patchrace.hpp"
#include "secmodels/phishing.hpp"
#include "secmodels/series.hpp"
#include "secmodels/vulndisc.hpp"

namespace secmodels::cli {

namespace {

constexpr std::int64_t kDefaultSearchCap = 1000;
constexpr std::int64_t kDefaultWeeks = 52;

struct Options {
    std::string scenario_path;
    std::string out_path;
    std::optional<std::int64_t> sweep;
    std::optional<std::int64_t> weeks;
    std::optional<std::int64_t> n_max;
    std::optional<std::int64_t> n;
    bool summary = false;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string model;
    std::string data_path;
    std::vector<double> probes;
};

Scenario scenario_for(const Options& o) {
    Scenario s = o.scenario_path.empty() ? Scenario{} : load_scenario(o.scenario_path);
    if (o.trials) {
        if (*o.trials < 1) {
            throw ValidationError("--trials must be >= 1");
        }
        s.sim.trials = *o.trials;
    }
    if (o.seed) {
        s.sim.seed = *o.seed;
    }
    if (o.workers) {
        if (*o.workers < 1) {
            throw ValidationError("--workers must be >= 1");
        }
        s.sim.workers = *o.workers;
    }
    return s;
}

std::int64_t require_at_least_one(const char* flag, std::int64_t v) {
    if (v < 1) {
        throw ValidationError(std::string(flag) + " must be >= 1 (got " + std::to_string(v) + ")");
    }
    return v;
}

// Plain CSV table for rows that mix text and numbers.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    Table& row() {
        rows_.emplace_back();
        return *this;
    }
    Table& cell(double v) {
        rows_.back().push_back(format_number(v));
        return *this;
    }
    Table& cell(std::string v) {
        rows_.back().push_back(std::move(v));
        return *this;
    }

    void write(std::ostream& out) const {
        for (std::size_t i = 0; i < header_.size(); ++i) {
            out << (i ? "," : "") << header_[i];
        }
        out << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                out << (i ? "," : "") << r[i];
            }
            out << '\n';
        }
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string number_text(std::uint64_t v) { return std::to_string(v); }

void run_phishing(const Options& o, std::ostream& out) {
    const Scenario s = scenario_for(o);
    if (o.summary) {
        const std::int64_t cap = require_at_least_one("--n-max", o.n_max.value_or(kDefaultSearchCap));
        const auto best = phishing::optimal_campaign(s.phishing, cap);
        Table t({"n", "p_infection", "p_no_alert", "p_undetected"});
        t.row()
            .cell(static_cast<double>(best.n_messages))
            .cell(best.p_infection)
            .cell(best.p_no_alert)
            .cell(best.p_undetected);
        t.write(out);
        return;
    }
    const std::int64_t n_max = require_at_least_one("--sweep", o.sweep.value_or(kDefaultSearchCap));
    write_csv(out, phishing::campaign_sweep(s.phishing, n_max));
}

void run_vulndisc(const Options& o, std::ostream& out) {
    const Scenario s = scenario_for(o);
    if (o.summary) {
        const auto& tester = s.tester;
        const auto limit = vulndisc::total_discoveries_limit(tester, 1.0);
        const double first_year =
            vulndisc::expected_discoveries(tester, vulndisc::week_start(tester, 1), vulndisc::week_start(tester, 53));
        Table t({"label", "c", "alpha", "first_year", "rate_week_52", "rate_week_520", "limit_from_week_1"});
        t.row()
            .cell(tester.label)
            .cell(tester.c)
            .cell(tester.alpha)
            .cell(first_year)
            .cell(vulndisc::discovery_rate(tester, 52.0))
            .cell(vulndisc::discovery_rate(tester, 520.0))
            .cell(std::holds_alternative<double>(limit) ? format_number(std::get<double>(limit)) : "unbounded");
        t.write(out);
        return;
    }
    const std::int64_t weeks = require_at_least_one("--weeks", o.weeks.value_or(kDefaultWeeks));
    write_csv(out, vulndisc::weekly_series(s.tester, weeks));
}

void run_patchrace(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario s = scenario_for(o);
    if (o.summary) {
        const auto summary = patchrace::race_summary(s.race);
        for (const auto& w : summary.warnings) {
            err << "warning: " << w << '\n';
        }
        Table t({"peak_time", "peak_fraction", "fraction_at_1yr"});
        t.row().cell(summary.peak_time).cell(summary.peak_fraction).cell(summary.fraction_at_1yr);
        t.write(out);
        return;
    }
    write_csv(out, patchrace::race_sweep(s.race));
}

std::ifstream open_data(const std::string& path) {
    if (path.empty()) {
        throw ValidationError("fit requires --data PATH");
    }
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open data file '" + path + "'");
    }
    return in;
}

void run_fit(const Options& o, std::ostream& out) {
    const Scenario s = scenario_for(o);
    if (o.model == "weibull") {
        auto in = open_data(o.data_path);
        const auto samples = calibration::read_cdf_samples(in);
        const auto fit = calibration::fit_weibull_cdf(samples);
        Table t({"k", "lambda_days", "residual", "iterations", "converged"});
        t.row()
            .cell(fit.params[0])
            .cell(fit.params[1])
            .cell(fit.residual)
            .cell(std::to_string(fit.iterations))
            .cell(fit.converged ? "true" : "false");
        t.write(out);
    } else if (o.model == "exploit-total") {
        auto in = open_data(o.data_path);
        const auto hist = calibration::read_delay_histogram(in);
        const auto fit = calibration::fit_exploit_total(hist, s.race.exploit);
        Table t({"total", "exploited", "unexploited", "residual"});
        t.row().cell(fit.total).cell(hist.total()).cell(fit.unexploited).cell(fit.fit.residual);
        t.write(out);
    } else if (o.model == "constants") {
        Table t({"name", "value"});
        t.row().cell("c_fuzzer").cell(calibration::estimate_power_law_c(36.3, 1.0, 18.0 / 7.0, 3.0));
        t.row().cell("c_human").cell(calibration::estimate_power_law_c(10.0, 0.0, 1.0, 0.4));
        t.row().cell("beta_per_day").cell(calibration::estimate_beta(100.0, 0.5));
        t.row().cell("one_over_beta_days").cell(1.0 / calibration::estimate_beta(100.0, 0.5));
        t.write(out);
    } else {
        throw ValidationError("--model must be weibull, exploit-total or constants for fit");
    }
}

void run_simulate(const Options& o, std::ostream& out) {
    const Scenario s = scenario_for(o);
    const auto& cfg = s.sim;
    const std::string rng(montecarlo::rng_algorithm());
    if (o.model == "phishing") {
        std::int64_t n = 0;
        if (o.n) {
            if (*o.n < 0) {
                throw ValidationError("--n must be >= 0");
            }
            n = *o.n;
        } else {
            n = phishing::optimal_campaign(s.phishing, kDefaultSearchCap).n_messages;
        }
        const auto est = montecarlo::simulate_phishing(s.phishing, n, cfg);
        const auto exact = phishing::campaign_point(s.phishing, n);
        Table t({"quantity", "n", "mean", "std_error", "analytic", "trials", "seed", "rng"});
        const auto add = [&](const char* name, const montecarlo::SimEstimate& e, double analytic) {
            t.row()
                .cell(name)
                .cell(static_cast<double>(n))
                .cell(e.mean)
                .cell(e.std_error)
                .cell(analytic)
                .cell(number_text(cfg.trials))
                .cell(number_text(cfg.seed))
                .cell(rng);
        };
        add("p_infection", est.infection, exact.p_infection);
        add("p_no_alert", est.no_alert, exact.p_no_alert);
        add("p_undetected", est.undetected, exact.p_undetected);
        t.write(out);
    } else if (o.model == "discovery") {
        const std::int64_t weeks = require_at_least_one("--weeks", o.weeks.value_or(kDefaultWeeks));
        const double t1 = 1.0;
        const double t2 = t1 + static_cast<double>(weeks);
        const auto est = montecarlo::simulate_discovery(s.tester, t1, t2, cfg);
        Table t({"t1", "t2", "mean", "std_error", "analytic", "trials", "seed", "rng"});
        t.row()
            .cell(t1)
            .cell(t2)
            .cell(est.mean)
            .cell(est.std_error)
            .cell(vulndisc::expected_discoveries(s.tester, t1, t2))
            .cell(number_text(cfg.trials))
            .cell(number_text(cfg.seed))
            .cell(rng);
        t.write(out);
    } else if (o.model == "race" || o.model == "patch-delay") {
        const std::vector<double> probes =
            o.probes.empty() ? std::vector<double>{0.0, 30.0, 55.0, 100.0, 365.0} : o.probes;
        const patchrace::PatchDelayTable table(s.race);
        const bool race = o.model == "race";
        const auto est = race ? montecarlo::simulate_race(s.race, probes, cfg)
                              : montecarlo::simulate_patch_delay(s.race, probes, cfg);
        Table t({"t", "mean", "std_error", "analytic", "trials", "seed", "rng"});
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double analytic =
                race ? table.exploitable_fraction(probes[i]) : table.patched_fraction(probes[i]);
            t.row()
                .cell(probes[i])
                .cell(est[i].mean)
                .cell(est[i].std_error)
                .cell(analytic)
                .cell(number_text(cfg.trials))
                .cell(number_text(cfg.seed))
                .cell(rng);
        }
        t.write(out);
    } else {
        throw ValidationError("--model must be phishing, discovery, race or patch-delay for simulate");
    }
}

bool is_validation(const std::exception& e) {
    return dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
           dynamic_cast<const DataError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
           dynamic_cast<const UnitError*>(&e) || dynamic_cast<const ConfigurationError*>(&e);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantitative models of phishing, vulnerability discovery and the patch-vs-exploit race"};
    app.name("secmodels");
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario_path, "Scenario file (flat [section] key = value)");
        sub->add_option("--out", o.out_path, "Write CSV here instead of standard output");
    };
    auto add_sim = [&](CLI::App* sub) {
        sub->add_option("--trials", o.trials, "Monte Carlo trials");
        sub->add_option("--seed", o.seed, "Monte Carlo seed");
        sub->add_option("--workers", o.workers, "Worker threads (results do not depend on this)");
    };

    auto* phish = app.add_subcommand("phishing", "Campaign sweep or optimal campaign size");
    add_common(phish);
    auto* phish_sweep = phish->add_option("--sweep", o.sweep, "Sweep n = 0..N (default 1000)");
    auto* phish_summary = phish->add_flag("--summary", o.summary, "Only the optimal campaign");
    phish->add_option("--n-max", o.n_max, "Search cap for --summary (default 1000)");
    phish_sweep->excludes(phish_summary);

    auto* vuln = app.add_subcommand("vulndisc", "Weekly expected discoveries for a power-law tester");
    add_common(vuln);
    auto* vuln_weeks = vuln->add_option("--weeks", o.weeks, "Number of weeks (default 52)");
    auto* vuln_summary = vuln->add_flag("--summary", o.summary, "One-row summary of the tester");
    vuln_weeks->excludes(vuln_summary);

    auto* race = app.add_subcommand("patchrace", "Patch-vs-exploit race sweep or headline summary");
    add_common(race);
    race->add_flag("--summary", o.summary, "Peak and one-year exploitable fraction");

    auto* fit = app.add_subcommand("fit", "Fit model parameters to CSV data");
    add_common(fit);
    fit->add_option("--model", o.model, "weibull | exploit-total | constants")->required();
    fit->add_option("--data", o.data_path, "CSV input (t,fraction or bin_start,bin_end,count)");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate next to the analytic value");
    add_common(sim);
    add_sim(sim);
    sim->add_option("--model", o.model, "phishing | discovery | race | patch-delay")->required();
    sim->add_option("--n", o.n, "Messages per campaign (default: analytic optimum)");
    sim->add_option("--weeks", o.weeks, "Discovery interval [1, 1 + weeks] (default 52)");
    sim->add_option("--probes", o.probes, "Probe times in days")->delimiter(',');

    auto* figures = app.add_subcommand("figures", "Write every figure CSV into a directory");
    figures->add_option("--out", o.out_path, "Output directory (default: figures)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        if (figures->parsed()) {
            const auto files = write_figures(o.out_path.empty() ? "figures" : o.out_path);
            for (const auto& f : files) {
                err << "wrote " << f.string() << '\n';
            }
            return kOk;
        }

        std::ostringstream buffer;
        if (phish->parsed()) {
            run_phishing(o, buffer);
        } else if (vuln->parsed()) {
            run_vulndisc(o, buffer);
        } else if (race->parsed()) {
            run_patchrace(o, buffer, err);
        } else if (fit->parsed()) {
            run_fit(o, buffer);
        } else if (sim->parsed()) {
            run_simulate(o, buffer);
        }

        if (o.out_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(o.out_path, std::ios::binary);
            if (!file || !(file << buffer.str()) || !file.flush()) {
                err << "error: cannot write '" << o.out_path << "'\n";
                return kRuntime;
            }
        }
        return kOk;
    } catch (const std::exception& e) {
        const bool validation = is_validation(e);
        err << (validation ? "validation error: " : "error: ") << e.what() << '\n';
        return validation ? kValidation : kRuntime;
    }
}

}  // namespace secmodels::cli
