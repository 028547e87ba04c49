#include "scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace secmodels::cli {

namespace {

std::string trim(const std::string& s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    auto first = std::find_if(s.begin(), s.end(), not_space);
    auto last = std::find_if(s.rbegin(), s.rend(), not_space).base();
    return first < last ? std::string(first, last) : std::string();
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line;
};

class KeyContext {
public:
    KeyContext(const std::string& source, const Entry& entry) : source_(source), entry_(entry) {}

    [[noreturn]] void fail(const std::string& constraint) const {
        std::ostringstream msg;
        msg << source_ << ":" << entry_.line << ": [" << entry_.section << "] " << entry_.key << " " << constraint
            << " (got '" << entry_.value << "')";
        throw ValidationError(msg.str());
    }

    double real() const {
        double v = 0.0;
        const auto& s = entry_.value;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            fail("must be a finite number");
        }
        return v;
    }

    double probability() const {
        const double v = real();
        if (v < 0.0 || v > 1.0) {
            fail("must be in [0, 1]");
        }
        return v;
    }

    double positive() const {
        const double v = real();
        if (!(v > 0.0)) {
            fail("must be > 0");
        }
        return v;
    }

    double non_negative() const {
        const double v = real();
        if (!(v >= 0.0)) {
            fail("must be >= 0");
        }
        return v;
    }

    double at_least(double lo) const {
        const double v = real();
        if (!(v >= lo)) {
            std::ostringstream c;
            c << "must be >= " << lo;
            fail(c.str());
        }
        return v;
    }

    std::uint64_t count(std::uint64_t lo) const {
        std::uint64_t v = 0;
        const auto& s = entry_.value;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            fail("must be a non-negative integer");
        }
        if (v < lo) {
            fail("must be >= " + std::to_string(lo));
        }
        return v;
    }

    bool flag() const {
        std::string v = entry_.value;
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off") {
            return false;
        }
        fail("must be true or false");
    }

    const std::string& text() const { return entry_.value; }

private:
    const std::string& source_;
    const Entry& entry_;
};

struct Pending {
    double grid_start = 0.0;
    double grid_stop = 730.0;
    double grid_step = 0.25;
};

using Handler = std::function<void(Scenario&, Pending&, const KeyContext&)>;

const std::map<std::string, std::map<std::string, Handler>>& handlers() {
    static const std::map<std::string, std::map<std::string, Handler>> table = {
        {"phishing",
         {
             {"p_click", [](Scenario& s, Pending&, const KeyContext& k) { s.phishing.p_click = k.probability(); }},
             {"p_human_alert",
              [](Scenario& s, Pending&, const KeyContext& k) { s.phishing.p_human_alert = k.probability(); }},
             {"p_machine_alert",
              [](Scenario& s, Pending&, const KeyContext& k) { s.phishing.p_machine_alert = k.probability(); }},
         }},
        {"vulndisc",
         {
             {"c", [](Scenario& s, Pending&, const KeyContext& k) { s.tester.c = k.positive(); }},
             {"alpha", [](Scenario& s, Pending&, const KeyContext& k) { s.tester.alpha = k.non_negative(); }},
             {"label", [](Scenario& s, Pending&, const KeyContext& k) { s.tester.label = k.text(); }},
             {"basis",
              [](Scenario& s, Pending&, const KeyContext& k) {
                  if (k.text() == "time_weeks") {
                      s.tester.basis = vulndisc::Basis::time_weeks;
                  } else if (k.text() == "attempts") {
                      s.tester.basis = vulndisc::Basis::attempts;
                  } else {
                      k.fail("must be time_weeks or attempts");
                  }
              }},
             {"eta_per_week",
              [](Scenario& s, Pending&, const KeyContext& k) { s.attempt_rate = vulndisc::AttemptRate{k.positive()}; }},
         }},
        {"patchrace",
         {
             {"k", [](Scenario& s, Pending&, const KeyContext& k) { s.race.dev.k = k.positive(); }},
             {"lambda_days", [](Scenario& s, Pending&, const KeyContext& k) { s.race.dev.lambda = k.positive(); }},
             {"beta_per_day", [](Scenario& s, Pending&, const KeyContext& k) { s.race.dep.beta = k.positive(); }},
             {"A", [](Scenario& s, Pending&, const KeyContext& k) { s.race.exploit.a_coeff = k.non_negative(); }},
             {"a", [](Scenario& s, Pending&, const KeyContext& k) { s.race.exploit.a_exp = k.non_negative(); }},
             {"b", [](Scenario& s, Pending&, const KeyContext& k) { s.race.exploit.b_decay = k.non_negative(); }},
             {"clamp_monotone",
              [](Scenario& s, Pending&, const KeyContext& k) { s.race.exploit.clamp_monotone = k.flag(); }},
             {"pre_disclosure_fraction",
              [](Scenario& s, Pending&, const KeyContext& k) {
                  s.race.pre_disclosure_patch_fraction = k.probability();
              }},
             {"instant_dev", [](Scenario& s, Pending&, const KeyContext& k) { s.race.instant_dev = k.flag(); }},
             {"instant_exploit",
              [](Scenario& s, Pending&, const KeyContext& k) { s.race.instant_exploit = k.flag(); }},
             {"deploy_speedup",
              [](Scenario& s, Pending&, const KeyContext& k) { s.race.deploy_speedup = k.at_least(1.0); }},
             {"grid_stop_days", [](Scenario&, Pending& p, const KeyContext& k) { p.grid_stop = k.positive(); }},
             {"grid_step_days", [](Scenario&, Pending& p, const KeyContext& k) { p.grid_step = k.positive(); }},
         }},
        {"montecarlo",
         {
             {"trials", [](Scenario& s, Pending&, const KeyContext& k) { s.sim.trials = k.count(1); }},
             {"seed", [](Scenario& s, Pending&, const KeyContext& k) { s.sim.seed = k.count(0); }},
             {"workers",
              [](Scenario& s, Pending&, const KeyContext& k) {
                  const auto w = k.count(1);
                  if (w > 1024) {
                      k.fail("must be <= 1024");
                  }
                  s.sim.workers = static_cast<unsigned>(w);
              }},
         }},
    };
    return table;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source_name) {
    std::vector<Entry> entries;
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    std::string section;
    std::string raw;
    std::size_t line_no = 0;
    const auto& table = handlers();

    auto fail = [&](const std::string& what) {
        throw ValidationError(source_name + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        if (line_no == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) {
            raw.erase(0, 3);
        }
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail("malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (!table.contains(section)) {
                fail("unknown section [" + section + "] (expected phishing, vulndisc, patchrace or montecarlo)");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail("expected 'key = value', got '" + line + "'");
        }
        if (section.empty()) {
            fail("key outside of any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = table.at(section);
        if (!keys.contains(key)) {
            fail("unknown key '" + key + "' in [" + section + "]");
        }
        const auto [it, inserted] = seen.emplace(std::make_pair(section, key), line_no);
        if (!inserted) {
            fail("duplicate key '" + key + "' in [" + section + "] (first defined at line " +
                 std::to_string(it->second) + ", again at line " + std::to_string(line_no) + ")");
        }
        entries.push_back({section, key, value, line_no});
    }

    Scenario scenario;
    Pending pending;
    for (const auto& e : entries) {
        const KeyContext ctx(source_name, e);
        table.at(e.section).at(e.key)(scenario, pending, ctx);
    }

    try {
        scenario.race.grid = numerics::Grid(pending.grid_start, pending.grid_stop, pending.grid_step);
    } catch (const DomainError& ex) {
        throw ValidationError(source_name + ": [patchrace] grid_stop_days / grid_step_days: " + ex.what());
    }
    try {
        scenario.race.validate();
    } catch (const Error& ex) {
        throw ValidationError(source_name + ": [patchrace] A, a, b: " + ex.what());
    }
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open scenario file '" + path.string() + "'");
    }
    return parse_scenario(in, path.string());
}

}  // namespace secmodels::cli
