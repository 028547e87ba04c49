#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace secmodels::cli {

enum ExitStatus : int { kOk = 0, kValidation = 1, kRuntime = 2 };

/// Entry point behind the executable. `args` excludes the program name.
/// CSV goes to --out or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes every figure CSV (fig1.csv ... fig9b.csv) into `dir`, creating it if needed.
/// Returns the files written.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& dir);

}  // namespace secmodels::cli
