#pragma once

#include "qcae/clocking.hpp"
#include "qcae/electrostatics.hpp"
#include "qcae/energy.hpp"
#include "qcae/layout.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcae
{

/// Raised when the integration leaves the physical region (|λ| > 1.01).
class SimulationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Integrator : std::uint8_t
{
    Euler,
    RK2
};

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view text);

struct SimulationParams
{
    double t_step = 1e-17;  // s
    double t_sim = 1.2e-9;  // s
    double input_period = 0.0;  // s, 0 = one clock cycle
    std::size_t record_stride = 10000;
    Integrator integrator = Integrator::Euler;

    void validate(const ClockConfig& clock) const;
    [[nodiscard]] double effective_input_period(const ClockConfig& clock) const noexcept
    {
        return input_period > 0.0 ? input_period : clock.cycle_time();
    }
};

/// Binary values per input label, one per input period. After the last
/// period the final value is held.
struct StimulusPlan
{
    std::map<std::string, std::vector<int>> values;

    /// Constant assignment for one input combination.
    static StimulusPlan constant(const std::map<std::string, bool>& bits);

    /// Bits of combination `index` over `labels` (sorted, binary counting,
    /// first label = most significant bit).
    static std::map<std::string, bool> combination(const std::vector<std::string>& labels, std::size_t index);

    [[nodiscard]] std::size_t periods() const;
    [[nodiscard]] int value(const std::string& label, std::size_t period) const;
    void validate(const Layout& layout) const;
};

using Vec3 = std::array<double, 3>;

/// Coherence vector of one cell with the quantities derived from it.
struct CellState
{
    Vec3 lambda{};
    Vec3 gamma_vec{};  // Γ = (1/ħ)[−2γ, 0, Φ], rad/s
    Vec3 steady_state{};  // −Γ̂ tanh η
};

/// λ_ss = −(Γ/|Γ|) tanh(ħ|Γ|/(2 k_B T)) for the given γ, Φ (J).
Vec3 steady_state(double gamma, double phi, double temperature);

/// dλ/dt = Γ × λ − (λ − λ_ss)/τ.
Vec3 coherence_derivative(const Vec3& lambda, double gamma, double phi, const TechnologyParams& tech);

/// Fixed-timestep integrator over a whole layout. Cells are addressed by
/// their index in `layout.cells`. Φ for every cell is evaluated from the
/// previous step's λz of all neighbours (synchronous update).
class Engine
{
  public:
    Engine(const Layout& layout, const NeighborGraph& graph, const TechnologyParams& tech, const ClockConfig& clock,
           const SimulationParams& sim, StimulusPlan stimulus);

    /// Advances one t_step. Throws SimulationError when |λ| exceeds 1.01.
    void step();

    [[nodiscard]] std::size_t step_index() const noexcept { return n_; }
    [[nodiscard]] double time() const noexcept { return static_cast<double>(n_) * sim_.t_step; }
    [[nodiscard]] std::size_t size() const noexcept { return lx_.size(); }
    [[nodiscard]] CellState state(std::size_t cell) const;
    [[nodiscard]] CellSample sample(std::size_t cell) const noexcept
    {
        return {field_.gamma[cell], field_.phi[cell], lx_[cell], ly_[cell], lz_[cell]};
    }
    /// Γ·λ + |Γ| tanh η of the current state, rad/s (the environment integrand).
    [[nodiscard]] double env_rate(std::size_t cell) const noexcept
    {
        return (-2.0 * field_.gamma[cell] * lx_[cell] + field_.phi[cell] * lz_[cell] + field_.bias[cell]) * inv_hbar;
    }
    [[nodiscard]] const std::vector<double>& lambda_z() const noexcept { return lz_; }
    [[nodiscard]] const std::vector<double>& phi() const noexcept { return field_.phi; }
    [[nodiscard]] const std::vector<double>& gamma() const noexcept { return field_.gamma; }
    [[nodiscard]] bool is_free(std::size_t cell) const noexcept { return kind_[cell] == Kind::Free; }
    /// Largest |λ| seen over free cells so far.
    [[nodiscard]] double max_norm() const noexcept { return max_norm_; }

    /// Overrides a free cell's coherence vector (tests and warm starts).
    void set_lambda(std::size_t cell, const Vec3& lambda);

  private:
    enum class Kind : std::uint8_t
    {
        Free,
        Fixed,
        Input
    };

    void apply_boundary(double t, std::vector<double>& lz) const;
    struct Field
    {
        std::vector<double> gamma, phi;
        std::vector<double> bias;  // ħ|Γ| tanh η, J
        std::vector<double> gain;  // tanh η / ħ|Γ|, 1/J
        void resize(std::size_t n);
    };
    static constexpr double inv_hbar = 1.0 / constants::hbar;

    void evaluate(double t, const std::vector<double>& lz, Field& f) const;
    void derivative(const std::vector<double>& lx, const std::vector<double>& ly, const std::vector<double>& lz,
                    const Field& f, std::vector<double>& dx, std::vector<double>& dy, std::vector<double>& dz) const;

    const Layout* layout_;
    const NeighborGraph* graph_;
    TechnologyParams tech_;
    ClockConfig clock_;
    SimulationParams sim_;
    StimulusPlan stimulus_;
    double input_period_;

    std::vector<Kind> kind_;
    std::vector<double> fixed_value_;
    std::vector<std::string> input_label_;
    std::vector<int> zone_;
    std::vector<std::size_t> driven_;
    // boundary values of the input period last applied
    mutable std::vector<double> driven_value_;
    mutable std::size_t driven_period_ = static_cast<std::size_t>(-1);

    std::size_t n_ = 0;
    std::vector<double> lx_, ly_, lz_;
    Field field_;
    // scratch
    std::vector<double> kx_, ky_, kz_, sx_, sy_, sz_, k2x_, k2y_, k2z_;
    Field s_field_;
    double max_norm_ = 0.0;
};

/// One decimated sample row.
struct TraceRow
{
    double t = 0.0;
    std::size_t cell = 0;
    double lx = 0.0, ly = 0.0, lz = 0.0;
    double gamma = 0.0, phi = 0.0;
    double p_env = 0.0;  // W, power dissipated to the environment (positive = heat out)
};

/// λz of one cell at the middle of its zone's hold phase in zone cycle `cycle`.
struct HoldProbe
{
    long cycle = 0;
    double lambda_z = 0.0;
};

struct RawTrace
{
    double t_step = 0.0;
    double cycle_time = 0.0;
    std::size_t steps = 0;
    std::vector<TraceRow> rows;  // every record_stride steps, all cells
    std::vector<std::vector<HoldProbe>> hold_probes;  // per cell
    std::vector<EnergyLedger::Snapshot> cycle_snapshots;  // at t = k·cycle_time
    EnergyLedger::Snapshot final_energy;
    double max_norm = 0.0;

    [[nodiscard]] std::size_t samples() const noexcept;
};

/// Integrates from t = 0 to t_sim, accumulating the energy ledger every step.
/// Deterministic: identical inputs yield bit-identical traces.
RawTrace run(const Layout& layout, const NeighborGraph& graph, const TechnologyParams& tech,
             const ClockConfig& clock, const SimulationParams& sim, const StimulusPlan& stimulus);

/// Trace CSV: `t_s,cell_id,lambda_x,lambda_y,lambda_z,gamma_J,phi_J,p_env_W`.
std::string trace_csv(const RawTrace& trace, const Layout& layout);

struct DecodedBit
{
    bool value = false;
    double lambda_z = 0.0;
    bool weak = false;  // |λz| < 0.5 at the sample point
    bool undecidable = false;  // the output never reached |λz| ≥ 0.5
};

/// Per input period: output label → decoded bit. `latency_cycles[label]` is
/// the number of whole clock cycles between an input period and the zone
/// cycle in which the output holds its result.
std::vector<std::map<std::string, DecodedBit>> decode_outputs(const RawTrace& trace, const Layout& layout,
                                                              const std::map<std::string, long>& latency_cycles,
                                                              std::size_t periods);

}  // namespace qcae
