#pragma once

#include "qcae/electrostatics.hpp"
#include "qcae/constants.hpp"
#include "qcae/layout.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qcae
{

/// Sign convention. Ledger sums are energy *gained by the cell* through each
/// channel, exactly as the integrals are written:
///   clk   = ½∫ d(−2γ)/dt · λx dt
///   io    = ½∫ dΦ/dt · λz dt
///   env   = −ħ/(2τ) ∫ (Γ·λ + |Γ| tanh η) dt
///   total = (ħ/2) Γ·λ |end − (ħ/2) Γ·λ |start
/// so total = clk + io + env. Reports flip clk and env once: "dissipated" is
/// −env (heat released to the environment), "to clock" is −clk, and
/// "from neighbours" is io.
struct EnergySums
{
    double clk = 0.0;
    double io = 0.0;
    double env = 0.0;
    double total = 0.0;

    [[nodiscard]] double dissipated() const noexcept { return -env; }
    [[nodiscard]] double to_clock() const noexcept { return -clk; }
    [[nodiscard]] double from_neighbors() const noexcept { return io; }
    /// |total − (clk + io + env)|
    [[nodiscard]] double balance_error() const noexcept;

    EnergySums& operator+=(const EnergySums& o) noexcept
    {
        clk += o.clk;
        io += o.io;
        env += o.env;
        total += o.total;
        return *this;
    }
    friend EnergySums operator-(EnergySums a, const EnergySums& b) noexcept;
};

/// Instantaneous quantities of one cell that the integrals need.
struct CellSample
{
    double gamma = 0.0;  // J
    double phi = 0.0;  // J
    double lx = 0.0;
    double ly = 0.0;
    double lz = 0.0;
};

/// (ħ/2) Γ·λ = −γ λx + Φ λz / 2, in J.
inline double cell_energy(const CellSample& s) noexcept
{
    return -s.gamma * s.lx + 0.5 * s.phi * s.lz;
}

/// tanh of the thermal ratio η = ħ|Γ|/(2 k_B T), given ħ|Γ| in J.
inline double thermal_tanh(double hbar_gamma_norm, double temperature) noexcept
{
    const double eta = hbar_gamma_norm / (2.0 * constants::boltzmann * temperature);
    return eta > 20.0 ? 1.0 : std::tanh(eta);
}

/// Γ·λ + |Γ| tanh η, in rad/s.
inline double env_integrand(const CellSample& s, double temperature) noexcept
{
    const double gx = -2.0 * s.gamma;
    const double gz = s.phi;
    const double norm = std::sqrt(gx * gx + gz * gz);
    return (gx * s.lx + gz * s.lz + norm * thermal_tanh(norm, temperature)) / constants::hbar;
}

/// Trapezoidal increments between two consecutive engine states, with the
/// environment integrands of both states already evaluated.
inline EnergySums energy_increment(const CellSample& prev, const CellSample& curr, double prev_env,
                                   double curr_env, double dt, double tau) noexcept
{
    EnergySums d;
    d.clk = -(curr.gamma - prev.gamma) * 0.5 * (prev.lx + curr.lx);
    d.io = 0.5 * (curr.phi - prev.phi) * 0.5 * (prev.lz + curr.lz);
    d.env = -(constants::hbar / (2.0 * tau)) * 0.5 * (prev_env + curr_env) * dt;
    d.total = cell_energy(curr) - cell_energy(prev);
    return d;
}

/// Trapezoidal increments between two consecutive engine states.
inline EnergySums energy_increment(const CellSample& prev, const CellSample& curr, double dt, double tau,
                                   double temperature) noexcept
{
    return energy_increment(prev, curr, env_integrand(prev, temperature), env_integrand(curr, temperature), dt,
                            tau);
}

/// Running per-cell integrals plus per-edge neighbour transfer. `edge_io[k]`
/// is the energy cell i gained through the Φ contribution of neighbour j for
/// CSR edge k = (i, j); Σ_k over i's edges equals cells[i].io.
class EnergyLedger
{
  public:
    EnergyLedger() = default;
    EnergyLedger(std::size_t n_cells, std::size_t n_edges);

    void accumulate(std::size_t cell, const EnergySums& delta) noexcept
    {
        auto& r = running_[cell];
        r[0].add(delta.clk);
        r[1].add(delta.io);
        r[2].add(delta.env);
        r[3].add(delta.total);
    }
    [[nodiscard]] std::size_t size() const noexcept { return running_.size(); }
    [[nodiscard]] EnergySums cell(std::size_t i) const noexcept;
    [[nodiscard]] std::vector<EnergySums> cells() const;
    [[nodiscard]] std::vector<double>& edge_io() noexcept { return edge_io_; }
    [[nodiscard]] const std::vector<double>& edge_io() const noexcept { return edge_io_; }

    /// Plain (non-running) copy of the current sums.
    struct Snapshot
    {
        double t = 0.0;
        std::vector<EnergySums> cells;
        std::vector<double> edge_io;
    };
    [[nodiscard]] Snapshot snapshot(double t) const;

  private:
    struct Compensated
    {
        double sum = 0.0;
        double carry = 0.0;
        void add(double v) noexcept
        {
            // Neumaier summation
            const double t = sum + v;
            carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
            sum = t;
        }
        [[nodiscard]] double value() const noexcept { return sum + carry; }
    };
    std::vector<std::array<Compensated, 4>> running_;
    std::vector<double> edge_io_;
};

/// Energy sums over a window [a.t, b.t]: b − a per cell and per edge.
EnergyLedger::Snapshot window(const EnergyLedger::Snapshot& from, const EnergyLedger::Snapshot& to);

struct DirectionalTransfer
{
    double e_in = 0.0;  // energy received from the IN neighbours
    double e_out = 0.0;  // energy delivered to the OUT neighbours
};

/// Splits a cell's neighbour exchange over a window. IN and OUT must be
/// disjoint and together cover the cell's neighbours; e_in − e_out = io.
DirectionalTransfer directional_split(const EnergyLedger::Snapshot& window, const NeighborGraph& graph,
                                      std::size_t cell, const std::set<std::size_t>& in,
                                      const std::set<std::size_t>& out);

/// k_B·T·ln 2 in J.
double landauer_limit(double temperature);

struct CellEnergyRow
{
    int cell_id = 0;
    std::string label;  // role token
    EnergySums sums;  // raw ledger convention, J
    DirectionalTransfer directional;
    double balance_residual = 0.0;  // |total − (clk+io+env)| / max(|env|, 1e-27 J)
};

/// Energy of one input combination over the measured cycle.
struct CombinationEnergy
{
    std::string inputs;  // bits in sorted-label order
    std::vector<CellEnergyRow> cells;  // reporting set only
    double sum_dissipated = 0.0;  // Σ −env, J
    double sum_to_clock = 0.0;  // Σ −clk, J
    double sum_from_neighbors = 0.0;  // Σ io, J
    double epsilon_env = 0.0;  // worst per-cell balance residual
    bool below_landauer = false;
    std::vector<double> per_cycle_dissipated;  // Σ −env for every full cycle of the run, J
};

/// Folds cycle-boundary snapshots of one run into the measured-cycle energy
/// table. `snapshots[k]` is taken at t = k·T; at least 3 full cycles are
/// required and `measured_cycle` must leave one guard cycle after it.
/// `directions` holds the (IN, OUT) partition per reporting cell.
CombinationEnergy finalize_combination(const std::vector<EnergyLedger::Snapshot>& snapshots, const Layout& layout,
                                       const NeighborGraph& graph, const std::vector<std::size_t>& reporting_set,
                                       const std::vector<std::pair<std::set<std::size_t>, std::set<std::size_t>>>& directions,
                                       std::size_t measured_cycle, double temperature);

}  // namespace qcae
