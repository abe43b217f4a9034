#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obrb/config.hpp"

namespace obrb {

/// One named check inside a suite.
struct SuiteCheck {
    std::string name;
    bool pass = false;
    double measured = 0;
    double bound = 0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    bool pass = false;
    std::vector<SuiteCheck> checks;
    std::vector<std::string> member_dirs;
    std::string first_counterexample; // checkpoint path of the first failure
    std::string to_json() const;
};

/// The seven verification suites: maxprinciple, bounds, dissipativity,
/// ergodic, stability, rayleigh, uniqueness. Each runs its documented
/// ensemble, evaluates the module-level assertions, and writes report.json
/// plus per-member diagnostics under out_dir. A base config overrides the
/// built-in default problem data.
SuiteReport verify(const std::string &suite_name, const std::optional<RunConfig> &base,
                   const std::string &out_dir, int threads = 0);

std::vector<std::string> suite_names();

} // namespace obrb
