#pragma once

#include "qcae/clocking.hpp"
#include "qcae/electrostatics.hpp"
#include "qcae/energy.hpp"
#include "qcae/engine.hpp"
#include "qcae/layout.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qcae
{

inline constexpr int no_arrival = std::numeric_limits<int>::min();

/// All knobs of one experiment.
struct RunConfig
{
    TechnologyParams tech;
    ClockConfig clock;
    SimulationParams sim;
    bool buffers = true;
    /// Full clock cycles simulated per input combination; 0 picks the minimum
    /// that covers the pipeline latency plus one measured and one guard cycle.
    std::size_t cycles = 0;
    /// Worker threads for independent runs; 0 = hardware concurrency.
    unsigned jobs = 0;
};

/// Layout as simulated: the design plus the harness' stimulus drivers and
/// buffer cells, with the bookkeeping needed to report on the design alone.
struct PreparedLayout
{
    Layout layout;
    NeighborGraph graph;
    std::vector<std::size_t> reporting_set;  // indices into layout.cells
    std::vector<std::pair<std::set<std::size_t>, std::set<std::size_t>>> directions;  // per reporting cell
    std::vector<int> arrival_quarter;  // per cell, no_arrival = no signal reaches it
    std::map<std::string, long> output_latency_cycles;
};

/// Adds two buffer cells in front of every input (the layout's input cell
/// becomes a normal design cell and the driver moves three pitches outward)
/// and two behind every output (next clock zone). With `buffers == false`
/// the layout is used as is.
PreparedLayout prepare_layout(const Layout& design, const TechnologyParams& tech, bool buffers);

/// Quarter-cycle index at which signal first reaches each cell, following
/// strong couplings (same layer within 1.5 pitches, or a stacked via hop)
/// from the input drivers.
std::vector<int> arrival_quarters(const Layout& layout, const TechnologyParams& tech);

struct CombinationResult
{
    std::map<std::string, bool> inputs;
    CombinationEnergy energy;
    std::map<std::string, DecodedBit> outputs;
    std::map<std::string, bool> expected;  // empty when the layout has no truth table
    bool logic_ok = true;
    std::optional<std::string> error;  // simulation failure, if any
};

struct EnergyReport
{
    std::string circuit;
    bool reconstruction = false;
    RunConfig config;
    std::size_t cycles = 0;
    std::size_t measured_cycle = 0;
    double landauer_limit = 0.0;  // J
    std::vector<std::string> input_labels;
    std::vector<CombinationResult> combinations;
    std::vector<int> reporting_cell_ids;
    std::vector<int> excluded_cell_ids;  // drivers, buffers, fixed cells

    [[nodiscard]] std::size_t logic_correct() const;
    [[nodiscard]] std::size_t below_limit() const;
    [[nodiscard]] bool all_ok() const;
};

/// Cycles needed so the measured cycle sees a fully propagated pipeline.
std::size_t required_cycles(const PreparedLayout& prepared);

/// Simulates one input assignment. Throws SimulationError on divergence.
CombinationResult simulate_combination(const PreparedLayout& prepared, const Layout& design,
                                       const std::map<std::string, bool>& inputs, const RunConfig& config,
                                       RawTrace* trace_out = nullptr);

/// Every input combination (binary counting over sorted labels), optionally
/// restricted to `only`. Combinations run concurrently when jobs > 1; the
/// result is identical to a sequential run.
EnergyReport run_truth_table(const Layout& design, const RunConfig& config,
                             const std::optional<std::vector<std::size_t>>& only = std::nullopt);

struct SweepPoint
{
    double value = 0.0;  // slope or t_step, s
    double sum_dissipated = 0.0;  // J, averaged over input combinations
    double epsilon_env = 0.0;
    bool failed = false;
    std::string message;
};

struct SlopeSweep
{
    std::vector<SweepPoint> points;
    std::optional<bool> strictly_decreasing;  // only for ≥ 2 slopes
    std::optional<double> first_slope_below_limit;
    double landauer_limit = 0.0;
};

SlopeSweep slope_sweep(const Layout& design, const RunConfig& base, const std::vector<double>& slopes);

struct ConvergenceStudy
{
    std::vector<SweepPoint> points;  // ordered as given
    std::optional<double> largest_step_within_1pct;
};

ConvergenceStudy convergence_study(const Layout& design, const RunConfig& base, const std::vector<double>& steps);

/// Rows of the physically reversible and standard blocks of the energy table.
std::vector<std::string> table2_circuits();

}  // namespace qcae
