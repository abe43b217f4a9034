#pragma once

#include <string>

#include "obrb/config.hpp"
#include "obrb/diagnostics.hpp"
#include "obrb/problem.hpp"

namespace obrb {

/// CSV column set; documented in the README and pinned by a schema test.
extern const char *const kDiagnosticsCsvHeader;

struct RunResult {
    SimState final_state;
    DiagnosticsLog log;
    Problem problem;
    std::string out_dir;
    bool solver_failed = false;
    std::string failure;
};

/// Runs the time loop to t_end, writing diagnostics.csv (one row per
/// output_every plus the initial and final instants), violations.csv and
/// checkpoints under out_dir. Identical config and seed give byte-identical
/// CSV output on one platform. Optionally registers an equilibrium for the
/// rel_energy column. Solver failures write a final checkpoint and are
/// reported in the result rather than thrown.
RunResult run(const RunConfig &config, const std::string &out_dir_override = "",
              const EquilibriumSolution *eq = nullptr, bool write_outputs = true);

} // namespace obrb
