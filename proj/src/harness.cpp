#include "qcae/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>

namespace qcae
{

namespace
{

long floor_cycle(int quarter)
{
    return quarter >= 0 ? quarter / 4 : -((-quarter + 3) / 4);
}

// In-plane neighbours within 1.5 pitches, or the next layer straight up or down
// (a via hop). Lines crossing two layers apart do not carry signal.
bool strongly_coupled(const Cell& a, const Cell& b, const TechnologyParams& tech)
{
    if (a.layer == b.layer)
    {
        return center_distance(a, b, tech) <= 1.5 * tech.cell_distance;
    }
    return std::abs(a.layer - b.layer) == 1 && a.x == b.x && a.y == b.y;
}

// Unit grid step pointing from the cell's strong neighbours toward the cell.
std::pair<double, double> outward_direction(const Layout& layout, std::size_t i, const TechnologyParams& tech)
{
    const auto& c = layout.cells[i];
    double sx = 0.0;
    double sy = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < layout.cells.size(); ++j)
    {
        const auto& o = layout.cells[j];
        if (j == i || o.layer != c.layer || !strongly_coupled(c, o, tech))
        {
            continue;
        }
        sx += c.x - o.x;
        sy += c.y - o.y;
        ++count;
    }
    if (count == 0 || (sx == 0.0 && sy == 0.0))
    {
        return {-1.0, 0.0};
    }
    if (std::abs(sx) >= std::abs(sy))
    {
        return {sx > 0 ? 1.0 : -1.0, 0.0};
    }
    return {0.0, sy > 0 ? 1.0 : -1.0};
}

// Breadth-first hop count from the input drivers over strong couplings.
std::vector<int> hop_distance(const Layout& layout, const TechnologyParams& tech)
{
    const auto n = layout.cells.size();
    std::vector<int> hops(n, std::numeric_limits<int>::max());
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (layout.cells[i].role.is_input())
        {
            hops[i] = 0;
            queue.push_back(i);
        }
    }
    while (!queue.empty())
    {
        const auto i = queue.front();
        queue.pop_front();
        for (std::size_t j = 0; j < n; ++j)
        {
            if (hops[j] != std::numeric_limits<int>::max() || layout.cells[j].role.is_fixed() ||
                !strongly_coupled(layout.cells[i], layout.cells[j], tech))
            {
                continue;
            }
            hops[j] = hops[i] + 1;
            queue.push_back(j);
        }
    }
    return hops;
}

}  // namespace

std::vector<int> arrival_quarters(const Layout& layout, const TechnologyParams& tech)
{
    const auto n = layout.cells.size();
    std::vector<int> q(n, no_arrival);
    using Item = std::pair<int, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!layout.cells[i].role.is_input())
        {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j)
        {
            const auto& c = layout.cells[j];
            // zone 3 switches during the first quarter, one cycle ahead of zone 0
            const int first = c.clock_zone == 3 ? -1 : c.clock_zone;
            if (j != i && !c.role.is_input() && !c.role.is_fixed() &&
                strongly_coupled(layout.cells[i], c, tech) && (q[j] == no_arrival || first < q[j]))
            {
                q[j] = first;
                open.emplace(q[j], j);
            }
        }
    }
    while (!open.empty())
    {
        const auto [qi, i] = open.top();
        open.pop();
        if (qi != q[i])
        {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j)
        {
            const auto& c = layout.cells[j];
            if (j == i || c.role.is_input() || c.role.is_fixed() || !strongly_coupled(layout.cells[i], c, tech))
            {
                continue;
            }
            const int cand = qi + ((c.clock_zone - qi) % 4 + 4) % 4;
            if (q[j] == no_arrival || cand < q[j])
            {
                q[j] = cand;
                open.emplace(cand, j);
            }
        }
    }
    return q;
}

PreparedLayout prepare_layout(const Layout& design, const TechnologyParams& tech, bool buffers)
{
    design.validate();
    PreparedLayout p;
    p.layout = design;
    auto& cells = p.layout.cells;
    std::vector<bool> excluded(cells.size(), false);
    int next_id = 0;
    for (const auto& c : cells)
    {
        next_id = std::max(next_id, c.id + 1);
    }
    const auto add_cell = [&](double x, double y, int layer, int zone, CellRole role) {
        cells.push_back({next_id++, x, y, layer, zone, std::move(role)});
        excluded.push_back(true);
    };

    if (buffers)
    {
        const auto original = cells.size();
        for (std::size_t i = 0; i < original; ++i)
        {
            const auto c = cells[i];
            if (!c.role.is_input() && !c.role.is_output())
            {
                continue;
            }
            const auto [dx, dy] = outward_direction(design, i, tech);
            const double pitch = tech.cell_distance;
            if (c.role.is_input())
            {
                // buffers in the preceding zone release while the design's input cell holds
                const int zone = (c.clock_zone + 3) % 4;
                cells[i].role = CellRole::normal();
                add_cell(c.x + dx * pitch, c.y + dy * pitch, c.layer, zone, CellRole::normal());
                add_cell(c.x + 2 * dx * pitch, c.y + 2 * dy * pitch, c.layer, zone, CellRole::normal());
                add_cell(c.x + 3 * dx * pitch, c.y + 3 * dy * pitch, c.layer, zone, c.role);
            }
            else
            {
                const int zone = (c.clock_zone + 1) % 4;
                add_cell(c.x + dx * pitch, c.y + dy * pitch, c.layer, zone, CellRole::normal());
                add_cell(c.x + 2 * dx * pitch, c.y + 2 * dy * pitch, c.layer, zone, CellRole::normal());
            }
        }
        p.layout.name = design.name;
        try
        {
            p.layout.validate();
        }
        catch (const LayoutError& e)
        {
            throw LayoutError(std::string("buffer insertion collides with the design: ") + e.what());
        }
    }

    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (cells[i].role.is_input() || cells[i].role.is_fixed())
        {
            excluded[i] = true;
        }
    }
    p.graph = build_neighbor_graph(p.layout, tech);
    p.arrival_quarter = arrival_quarters(p.layout, tech);
    const auto hops = hop_distance(p.layout, tech);

    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (excluded[i])
        {
            continue;
        }
        p.reporting_set.push_back(i);
        std::set<std::size_t> in;
        std::set<std::size_t> out;
        for (auto k = p.graph.offsets[i]; k < p.graph.offsets[i + 1]; ++k)
        {
            const auto j = p.graph.neighbors[k];
            const auto& cj = cells[j];
            const int dz = ((cj.clock_zone - cells[i].clock_zone) % 4 + 4) % 4;
            bool upstream = false;
            if (cj.role.is_input() || cj.role.is_fixed())
            {
                upstream = true;
            }
            else if (dz == 3)
            {
                upstream = true;
            }
            else if (dz == 1)
            {
                upstream = false;
            }
            else
            {
                upstream = hops[j] < hops[i];
            }
            (upstream ? in : out).insert(j);
        }
        p.directions.emplace_back(std::move(in), std::move(out));
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (cells[i].role.is_output())
        {
            const int q = p.arrival_quarter[i];
            p.output_latency_cycles[cells[i].role.label] = q == no_arrival ? 0 : floor_cycle(q);
        }
    }
    return p;
}

std::size_t required_cycles(const PreparedLayout& prepared)
{
    std::size_t settle = 1;
    for (std::size_t i = 0; i < prepared.layout.cells.size(); ++i)
    {
        const int q = prepared.arrival_quarter[i];
        if (q == no_arrival)
        {
            continue;
        }
        const auto zone = prepared.layout.cells[i].clock_zone;
        settle = std::max<long>(static_cast<long>(settle), floor_cycle(q) + (zone > 0 ? 1 : 0));
    }
    return settle + 2;
}

namespace
{

// The first cycle after the pipeline settled, or cycle 1 when the caller
// forced fewer cycles than the latency needs.
std::size_t measured_cycle(const PreparedLayout& prepared, std::size_t cycles)
{
    const auto settle = required_cycles(prepared) - 2;
    return settle + 1 < cycles ? settle : 1;
}

std::string bit_string(const std::map<std::string, bool>& bits)
{
    std::string s;
    for (const auto& [label, bit] : bits)
    {
        s.push_back(bit ? '1' : '0');
    }
    return s;
}

}  // namespace

CombinationResult simulate_combination(const PreparedLayout& prepared, const Layout& design,
                                       const std::map<std::string, bool>& inputs, const RunConfig& config,
                                       RawTrace* trace_out)
{
    const std::size_t cycles = config.cycles > 0 ? config.cycles : required_cycles(prepared);
    const std::size_t measured = measured_cycle(prepared, cycles);
    auto sim = config.sim;
    sim.t_sim = static_cast<double>(cycles) * config.clock.cycle_time();
    const auto steps = static_cast<std::size_t>(std::llround(sim.t_sim / sim.t_step));
    if (trace_out == nullptr)
    {
        sim.record_stride = steps + 1;
    }
    const auto trace = run(prepared.layout, prepared.graph, config.tech, config.clock, sim, StimulusPlan::constant(inputs));

    CombinationResult result;
    result.inputs = inputs;
    result.energy = finalize_combination(trace.cycle_snapshots, prepared.layout, prepared.graph,
                                         prepared.reporting_set, prepared.directions, measured,
                                         config.tech.temperature);
    result.energy.inputs = bit_string(inputs);

    const auto decoded = decode_outputs(trace, prepared.layout, prepared.output_latency_cycles, 1);
    result.outputs = decoded.front();
    if (design.expected_logic)
    {
        for (const auto& label : design.expected_logic->outputs)
        {
            const auto want = design.expected_logic->expected(inputs, label);
            if (!want)
            {
                continue;
            }
            result.expected[label] = *want;
            const auto it = result.outputs.find(label);
            if (it == result.outputs.end() || it->second.undecidable || it->second.value != *want)
            {
                result.logic_ok = false;
            }
        }
    }
    if (trace_out != nullptr)
    {
        *trace_out = trace;
    }
    return result;
}

std::size_t EnergyReport::logic_correct() const
{
    return static_cast<std::size_t>(
        std::count_if(combinations.begin(), combinations.end(), [](const auto& c) { return !c.error && c.logic_ok; }));
}

std::size_t EnergyReport::below_limit() const
{
    return static_cast<std::size_t>(std::count_if(combinations.begin(), combinations.end(), [](const auto& c) {
        return !c.error && c.energy.below_landauer;
    }));
}

bool EnergyReport::all_ok() const
{
    return std::none_of(combinations.begin(), combinations.end(), [](const auto& c) { return c.error.has_value(); });
}

EnergyReport run_truth_table(const Layout& design, const RunConfig& config,
                             const std::optional<std::vector<std::size_t>>& only)
{
    config.tech.validate();
    config.clock.validate();
    const auto prepared = prepare_layout(design, config.tech, config.buffers);

    EnergyReport report;
    report.circuit = design.name;
    report.reconstruction = design.reconstruction;
    report.config = config;
    report.cycles = config.cycles > 0 ? config.cycles : required_cycles(prepared);
    report.measured_cycle = measured_cycle(prepared, report.cycles);
    report.landauer_limit = landauer_limit(config.tech.temperature);
    report.input_labels = design.input_labels();
    for (std::size_t i = 0; i < prepared.layout.cells.size(); ++i)
    {
        const bool reported =
            std::find(prepared.reporting_set.begin(), prepared.reporting_set.end(), i) != prepared.reporting_set.end();
        (reported ? report.reporting_cell_ids : report.excluded_cell_ids).push_back(prepared.layout.cells[i].id);
    }

    std::vector<std::size_t> indices;
    if (only)
    {
        indices = *only;
    }
    else
    {
        for (std::size_t k = 0; k < (std::size_t{1} << report.input_labels.size()); ++k)
        {
            indices.push_back(k);
        }
    }
    report.combinations.resize(indices.size());

    const auto work = [&](std::size_t slot) {
        const auto bits = StimulusPlan::combination(report.input_labels, indices[slot]);
        try
        {
            report.combinations[slot] = simulate_combination(prepared, design, bits, config);
        }
        catch (const SimulationError& e)
        {
            CombinationResult failed;
            failed.inputs = bits;
            failed.energy.inputs = bit_string(bits);
            failed.logic_ok = false;
            failed.error = e.what();
            report.combinations[slot] = std::move(failed);
        }
    };

    unsigned jobs = config.jobs > 0 ? config.jobs : std::max(1U, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(indices.size()));
    if (jobs <= 1)
    {
        for (std::size_t slot = 0; slot < indices.size(); ++slot)
        {
            work(slot);
        }
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
        {
            pool.emplace_back([&] {
                for (auto slot = next++; slot < indices.size(); slot = next++)
                {
                    work(slot);
                }
            });
        }
        for (auto& t : pool)
        {
            t.join();
        }
    }
    return report;
}

namespace
{

SweepPoint summarize(double value, const EnergyReport& report)
{
    SweepPoint p;
    p.value = value;
    double sum = 0.0;
    for (const auto& c : report.combinations)
    {
        if (c.error)
        {
            p.failed = true;
            p.message = *c.error;
            return p;
        }
        sum += c.energy.sum_dissipated;
        p.epsilon_env = std::max(p.epsilon_env, c.energy.epsilon_env);
    }
    p.sum_dissipated = report.combinations.empty() ? 0.0 : sum / static_cast<double>(report.combinations.size());
    return p;
}

}  // namespace

SlopeSweep slope_sweep(const Layout& design, const RunConfig& base, const std::vector<double>& slopes)
{
    SlopeSweep sweep;
    sweep.landauer_limit = landauer_limit(base.tech.temperature);
    const double plateau_ratio = base.clock.plateau_time / base.clock.slope_time;
    for (const double slope : slopes)
    {
        auto config = base;
        config.clock.slope_time = slope;
        config.clock.plateau_time = slope * plateau_ratio;
        sweep.points.push_back(summarize(slope, run_truth_table(design, config)));
    }
    if (sweep.points.size() >= 2)
    {
        bool decreasing = true;
        for (std::size_t k = 1; k < sweep.points.size(); ++k)
        {
            const auto& a = sweep.points[k - 1];
            const auto& b = sweep.points[k];
            if (a.failed || b.failed || !(b.sum_dissipated < a.sum_dissipated))
            {
                decreasing = false;
            }
        }
        sweep.strictly_decreasing = decreasing;
    }
    for (const auto& p : sweep.points)
    {
        if (!p.failed && p.sum_dissipated < sweep.landauer_limit)
        {
            sweep.first_slope_below_limit = p.value;
            break;
        }
    }
    return sweep;
}

ConvergenceStudy convergence_study(const Layout& design, const RunConfig& base, const std::vector<double>& steps)
{
    ConvergenceStudy study;
    for (const double step : steps)
    {
        auto config = base;
        config.sim.t_step = step;
        study.points.push_back(summarize(step, run_truth_table(design, config)));
        const auto& p = study.points.back();
        if (!p.failed && p.epsilon_env <= 0.01 &&
            (!study.largest_step_within_1pct || step > *study.largest_step_within_1pct))
        {
            study.largest_step_within_1pct = step;
        }
    }
    return study;
}

std::vector<std::string> table2_circuits()
{
    return {"inverter", "or_std", "and_std", "maj_std", "or_rev", "and_rev", "maj_rev", "half_adder_rev"};
}

}  // namespace qcae
