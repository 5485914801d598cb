#include "qcae/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcae
{

double EnergySums::balance_error() const noexcept
{
    return std::abs(total - (clk + io + env));
}


EnergySums operator-(EnergySums a, const EnergySums& b) noexcept
{
    a.clk -= b.clk;
    a.io -= b.io;
    a.env -= b.env;
    a.total -= b.total;
    return a;
}

EnergyLedger::EnergyLedger(std::size_t n_cells, std::size_t n_edges) : running_(n_cells), edge_io_(n_edges, 0.0) {}

EnergySums EnergyLedger::cell(std::size_t i) const noexcept
{
    const auto& r = running_[i];
    return {r[0].value(), r[1].value(), r[2].value(), r[3].value()};
}

std::vector<EnergySums> EnergyLedger::cells() const
{
    std::vector<EnergySums> out(running_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] = cell(i);
    }
    return out;
}

EnergyLedger::Snapshot EnergyLedger::snapshot(double t) const
{
    return {t, cells(), edge_io_};
}

EnergyLedger::Snapshot window(const EnergyLedger::Snapshot& from, const EnergyLedger::Snapshot& to)
{
    if (from.cells.size() != to.cells.size() || from.edge_io.size() != to.edge_io.size())
    {
        throw std::invalid_argument("window: snapshots belong to different ledgers");
    }
    EnergyLedger::Snapshot w;
    w.t = to.t - from.t;
    w.cells.resize(to.cells.size());
    for (std::size_t i = 0; i < w.cells.size(); ++i)
    {
        w.cells[i] = to.cells[i] - from.cells[i];
    }
    w.edge_io.resize(to.edge_io.size());
    for (std::size_t k = 0; k < w.edge_io.size(); ++k)
    {
        w.edge_io[k] = to.edge_io[k] - from.edge_io[k];
    }
    return w;
}

DirectionalTransfer directional_split(const EnergyLedger::Snapshot& window, const NeighborGraph& graph,
                                      std::size_t cell, const std::set<std::size_t>& in,
                                      const std::set<std::size_t>& out)
{
    for (const auto j : in)
    {
        if (out.count(j) != 0)
        {
            throw std::invalid_argument("directional_split: neighbour " + std::to_string(j) +
                                        " is in both IN and OUT");
        }
    }
    DirectionalTransfer d;
    for (auto k = graph.offsets[cell]; k < graph.offsets[cell + 1]; ++k)
    {
        const auto j = graph.neighbors[k];
        if (in.count(j) != 0)
        {
            d.e_in += window.edge_io[k];
        }
        else if (out.count(j) != 0)
        {
            d.e_out -= window.edge_io[k];
        }
        else
        {
            throw std::invalid_argument("directional_split: neighbour " + std::to_string(j) +
                                        " is in neither IN nor OUT");
        }
    }
    return d;
}

double landauer_limit(double temperature)
{
    if (!(temperature > 0.0))
    {
        throw std::invalid_argument("landauer_limit: temperature must be positive");
    }
    return constants::boltzmann * temperature * std::numbers::ln2;
}

CombinationEnergy finalize_combination(const std::vector<EnergyLedger::Snapshot>& snapshots, const Layout& layout,
                                       const NeighborGraph& graph, const std::vector<std::size_t>& reporting_set,
                                       const std::vector<std::pair<std::set<std::size_t>, std::set<std::size_t>>>& directions,
                                       std::size_t measured_cycle, double temperature)
{
    if (snapshots.size() < 4)
    {
        throw std::invalid_argument("run too short: energy reports need at least 3 full clock cycles");
    }
    if (measured_cycle == 0 || measured_cycle + 2 >= snapshots.size())
    {
        throw std::invalid_argument("run too short: measured cycle needs a transient cycle before and a guard after");
    }
    if (directions.size() != reporting_set.size())
    {
        throw std::invalid_argument("finalize_combination: one direction partition per reporting cell required");
    }
    constexpr double residual_floor = 1e-27;

    CombinationEnergy result;
    const auto w = window(snapshots[measured_cycle], snapshots[measured_cycle + 1]);
    for (std::size_t r = 0; r < reporting_set.size(); ++r)
    {
        const auto i = reporting_set[r];
        CellEnergyRow row;
        row.cell_id = layout.cells[i].id;
        row.label = layout.cells[i].role.to_string();
        row.sums = w.cells[i];
        row.directional = directional_split(w, graph, i, directions[r].first, directions[r].second);
        row.balance_residual = row.sums.balance_error() / std::max(std::abs(row.sums.env), residual_floor);
        result.sum_dissipated += row.sums.dissipated();
        result.sum_to_clock += row.sums.to_clock();
        result.sum_from_neighbors += row.sums.from_neighbors();
        result.epsilon_env = std::max(result.epsilon_env, row.balance_residual);
        result.cells.push_back(std::move(row));
    }
    for (std::size_t c = 0; c + 1 < snapshots.size(); ++c)
    {
        double sum = 0.0;
        for (const auto i : reporting_set)
        {
            sum -= snapshots[c + 1].cells[i].env - snapshots[c].cells[i].env;
        }
        result.per_cycle_dissipated.push_back(sum);
    }
    result.below_landauer = result.sum_dissipated < landauer_limit(temperature);
    return result;
}

}  // namespace qcae
