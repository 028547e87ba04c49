#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "secmodels/errors.hpp"
#include "secmodels/montecarlo.hpp"
#include "secmodels/patchrace.hpp"
#include "secmodels/phishing.hpp"
#include "secmodels/vulndisc.hpp"

namespace secmodels::cli {

/// A scenario file or command line is invalid. Maps to exit status 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Everything a scenario file can configure. Omitted keys keep these defaults,
/// which are the baseline values from the source models.
struct Scenario {
    phishing::PhishingParams phishing = phishing::baseline();
    vulndisc::PowerLawTester tester = vulndisc::human_bug_bounty();
    std::optional<vulndisc::AttemptRate> attempt_rate;
    patchrace::PatchRaceScenario race = patchrace::default_scenario();
    montecarlo::SimConfig sim;
};

/// Parses the flat `[section]` / `key = value` format. `#` starts a comment
/// line. Unknown sections or keys, duplicate keys and values that violate a
/// domain invariant raise ValidationError naming the key and, where relevant,
/// the line numbers.
Scenario parse_scenario(std::istream& in, const std::string& source_name = "<scenario>");

/// Throws ValidationError if the file cannot be opened.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace secmodels::cli
