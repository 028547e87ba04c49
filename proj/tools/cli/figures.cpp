#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "scenario.hpp"
#include "secmodels/calibration.hpp"
#include "secmodels/patchrace.hpp"
#include "secmodels/phishing.hpp"
#include "secmodels/series.hpp"
#include "secmodels/vulndisc.hpp"

namespace secmodels::cli {

namespace {

constexpr std::int64_t kFig1Messages = 100;
constexpr double kRaceHorizonDays = 730.0;

std::vector<double> day_axis(double stop, double step) {
    std::vector<double> t;
    for (std::size_t i = 0;; ++i) {
        const double x = static_cast<double>(i) * step;
        if (x > stop + 1e-9) {
            break;
        }
        t.push_back(x);
    }
    return t;
}

CurveSeries fig1() {
    const auto base = phishing::campaign_sweep(phishing::baseline(), kFig1Messages);
    CurveSeries s("n", "messages", base.x());
    s.add_column("no_ai", base.column("p_undetected"));
    s.add_column("ai_writer", phishing::campaign_sweep(phishing::ai_writer(), kFig1Messages).column("p_undetected"));
    s.add_column("ai_writer_detector",
                 phishing::campaign_sweep(phishing::ai_writer_with_detector(), kFig1Messages).column("p_undetected"));
    return s;
}

CurveSeries fig2(std::int64_t weeks) {
    const std::vector<vulndisc::PowerLawTester> testers{vulndisc::human_bug_bounty(), vulndisc::blackbox_fuzzer(),
                                                        vulndisc::fast_ai(), vulndisc::creative_ai()};
    CurveSeries s("week", "weeks", vulndisc::weekly_series(testers.front(), weeks).x());
    for (const auto& t : testers) {
        s.add_column(t.label, vulndisc::weekly_series(t, weeks).column("expected_discoveries"));
    }
    return s;
}

CurveSeries fig4() {
    const auto samples = calibration::reference_patch_dev_samples();
    const auto fit = calibration::fit_weibull_cdf(samples);
    const patchrace::WeibullParams fitted{fit.params[0], fit.params[1]};
    std::vector<double> t, observed, model;
    for (const auto& s : samples) {
        t.push_back(s.t);
        observed.push_back(s.fraction);
        model.push_back(patchrace::patch_developed_cdf(fitted, s.t));
    }
    CurveSeries s("t", "days", std::move(t));
    s.add_column("reference_fraction", std::move(observed));
    s.add_column("fitted_cdf", std::move(model));
    return s;
}

CurveSeries fig5() {
    const auto race = patchrace::default_scenario();
    auto t = day_axis(365.0, 1.0);
    std::vector<double> all, disclosed_first;
    for (double x : t) {
        all.push_back(patchrace::patch_developed_all_vulns(race.dev, race.pre_disclosure_patch_fraction, x));
        disclosed_first.push_back(patchrace::patch_developed_cdf(race.dev, x));
    }
    CurveSeries s("t", "days", std::move(t));
    s.add_column("patch_available_all_vulns", std::move(all));
    s.add_column("patch_available_disclosed_first", std::move(disclosed_first));
    return s;
}

CurveSeries fig6() {
    const auto race = patchrace::default_scenario();
    const patchrace::PatchDelayTable table(race);
    const double step = race.grid.step();
    auto t = day_axis(365.0, step);
    std::vector<double> dev, dep, patched, density;
    for (double x : t) {
        dev.push_back(patchrace::patch_developed_cdf(race.dev, x));
        dep.push_back(patchrace::patch_deployed_cdf(race.dep, x));
        patched.push_back(table.patched_fraction(x));
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        const std::size_t j = i + 1 < t.size() ? i : i - 1;
        density.push_back((patched[j + 1] - patched[j]) / step);
    }
    CurveSeries s("t", "days", std::move(t));
    s.add_column("patch_dev_cdf", std::move(dev));
    s.add_column("patch_dep_cdf", std::move(dep));
    s.add_column("patched_fraction", std::move(patched));
    s.add_column("total_delay_density", std::move(density));
    return s;
}

void write_fig7_summary(std::ostream& out) {
    const auto hist = calibration::reference_exploit_histogram();
    const patchrace::ExploitCurveParams curve;
    const auto fit = calibration::fit_exploit_total(hist, curve);
    out << "total,exploited,unexploited,residual,A,a,b\n"
        << format_number(fit.total) << ',' << format_number(hist.total()) << ',' << format_number(fit.unexploited)
        << ',' << format_number(fit.fit.residual) << ',' << format_number(curve.a_coeff) << ','
        << format_number(curve.a_exp) << ',' << format_number(curve.b_decay) << '\n';
}

CurveSeries fig8() {
    const auto race = patchrace::default_scenario();
    const patchrace::PatchDelayTable table(race);
    auto t = day_axis(kRaceHorizonDays, 1.0);
    std::vector<double> exploit, unpatched, exposed;
    for (double x : t) {
        exploit.push_back(table.exploit_available(x));
        unpatched.push_back(1.0 - table.patched_fraction(x));
        exposed.push_back(table.exploitable_fraction(x));
    }
    CurveSeries s("t", "days", std::move(t));
    s.add_column("exploit_availability", std::move(exploit));
    s.add_column("unpatched_fraction", std::move(unpatched));
    s.add_column("exploitable_fraction", std::move(exposed));
    return s;
}

CurveSeries fig9(bool instant_exploit) {
    struct Variant {
        const char* name;
        bool instant_dev;
        double speedup;
    };
    const std::vector<Variant> variants{
        {"status_quo", false, 1.0}, {"instant_dev", true, 1.0}, {"deploy_5x", false, 5.0}, {"instant_dev_deploy_5x", true, 5.0}};
    auto t = day_axis(kRaceHorizonDays, 1.0);
    CurveSeries s("t", "days", t);
    for (const auto& v : variants) {
        auto race = patchrace::default_scenario();
        race.instant_exploit = instant_exploit;
        race.instant_dev = v.instant_dev;
        race.deploy_speedup = v.speedup;
        const patchrace::PatchDelayTable table(race);
        std::vector<double> exposed;
        exposed.reserve(t.size());
        for (double x : t) {
            exposed.push_back(table.exploitable_fraction(x));
        }
        s.add_column(v.name, std::move(exposed));
    }
    return s;
}

void save(const std::filesystem::path& path, const CurveSeries& series) {
    std::ofstream out(path, std::ios::binary);
    write_csv(out, series);
    if (!out.flush()) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
}

}  // namespace

std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto put = [&](const char* name, const CurveSeries& series) {
        const auto path = dir / name;
        save(path, series);
        written.push_back(path);
    };
    put("fig1.csv", fig1());
    put("fig2a.csv", fig2(52));
    put("fig2b.csv", fig2(520));
    put("fig4.csv", fig4());
    put("fig5.csv", fig5());
    put("fig6.csv", fig6());
    {
        const auto path = dir / "fig7-summary.csv";
        std::ofstream out(path, std::ios::binary);
        write_fig7_summary(out);
        if (!out.flush()) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        written.push_back(path);
    }
    put("fig8.csv", fig8());
    put("fig9a.csv", fig9(false));
    put("fig9b.csv", fig9(true));
    return written;
}

}  // namespace secmodels::cli
