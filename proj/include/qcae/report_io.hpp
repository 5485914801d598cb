#pragma once

#include "qcae/harness.hpp"

#include <string>

namespace qcae
{

/// Table in meV with three decimals; `*` marks combinations below k_B·T·ln 2.
std::string report_text(const EnergyReport& report);

/// One row per (combination, reporting cell), energies in J, report sign
/// convention (dissipated, to_clock, from_neighbors).
std::string report_csv(const EnergyReport& report);

/// Full report with every effective parameter echoed back.
std::string report_json(const EnergyReport& report);

std::string slope_sweep_csv(const SlopeSweep& sweep);
std::string convergence_csv(const ConvergenceStudy& study);

/// Effective parameters as JSON (the provenance block of every report).
std::string config_json(const RunConfig& config);

}  // namespace qcae
