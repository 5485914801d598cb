#include "qcae/engine.hpp"

#include "qcae/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qcae
{

std::string_view to_string(Integrator integrator)
{
    return integrator == Integrator::Euler ? "euler" : "rk2";
}

Integrator parse_integrator(std::string_view text)
{
    if (text == "euler")
    {
        return Integrator::Euler;
    }
    if (text == "rk2")
    {
        return Integrator::RK2;
    }
    throw std::invalid_argument("unknown integrator '" + std::string(text) + "' (expected euler|rk2)");
}

void SimulationParams::validate(const ClockConfig& clock) const
{
    if (!(t_step > 0.0))
    {
        throw std::invalid_argument("t_step must be positive");
    }
    if (record_stride < 1)
    {
        throw std::invalid_argument("record_stride must be at least 1");
    }
    if (input_period < 0.0)
    {
        throw std::invalid_argument("input_period must be non-negative");
    }
    // tolerate the rounding of t_sim = k·T computed in floating point
    if (t_sim < clock.cycle_time() * (1.0 - 1e-12))
    {
        throw std::invalid_argument("t_sim must cover at least one full clock cycle");
    }
}

StimulusPlan StimulusPlan::constant(const std::map<std::string, bool>& bits)
{
    StimulusPlan plan;
    for (const auto& [label, bit] : bits)
    {
        plan.values[label] = {bit ? 1 : 0};
    }
    return plan;
}

std::map<std::string, bool> StimulusPlan::combination(const std::vector<std::string>& labels, std::size_t index)
{
    std::map<std::string, bool> bits;
    const auto n = labels.size();
    for (std::size_t k = 0; k < n; ++k)
    {
        bits[labels[k]] = ((index >> (n - 1 - k)) & 1U) != 0;
    }
    return bits;
}

std::size_t StimulusPlan::periods() const
{
    return values.empty() ? 0 : values.begin()->second.size();
}

int StimulusPlan::value(const std::string& label, std::size_t period) const
{
    const auto& seq = values.at(label);
    return seq[std::min(period, seq.size() - 1)];
}

void StimulusPlan::validate(const Layout& layout) const
{
    const auto labels = layout.input_labels();
    std::size_t length = 0;
    for (const auto& label : labels)
    {
        const auto it = values.find(label);
        if (it == values.end())
        {
            throw std::invalid_argument("stimulus has no values for input '" + label + "'");
        }
        if (it->second.empty())
        {
            throw std::invalid_argument("stimulus for input '" + label + "' has zero length");
        }
        if (length != 0 && it->second.size() != length)
        {
            throw std::invalid_argument("stimulus sequences differ in length");
        }
        length = it->second.size();
        for (const int v : it->second)
        {
            if (v != 0 && v != 1)
            {
                throw std::invalid_argument("stimulus values must be 0 or 1");
            }
        }
    }
    for (const auto& [label, seq] : values)
    {
        if (std::find(labels.begin(), labels.end(), label) == labels.end())
        {
            throw std::invalid_argument("stimulus names unknown input '" + label + "'");
        }
    }
}

Vec3 steady_state(double gamma, double phi, double temperature)
{
    const double gx = -2.0 * gamma;
    const double gz = phi;
    const double norm = std::sqrt(gx * gx + gz * gz);
    if (norm == 0.0)
    {
        throw SimulationError("steady state undefined for |Γ| = 0");
    }
    const double th = thermal_tanh(norm, temperature);
    return {-th * gx / norm, 0.0, -th * gz / norm};
}

Vec3 coherence_derivative(const Vec3& l, double gamma, double phi, const TechnologyParams& tech)
{
    const double gx = -2.0 * gamma / constants::hbar;
    const double gz = phi / constants::hbar;
    const auto ss = steady_state(gamma, phi, tech.temperature);
    const double rate = 1.0 / tech.tau;
    return {-gz * l[1] - rate * (l[0] - ss[0]), gz * l[0] - gx * l[2] - rate * l[1],
            gx * l[1] - rate * (l[2] - ss[2])};
}

Engine::Engine(const Layout& layout, const NeighborGraph& graph, const TechnologyParams& tech,
               const ClockConfig& clock, const SimulationParams& sim, StimulusPlan stimulus) :
        layout_{&layout},
        graph_{&graph},
        tech_{tech},
        clock_{clock},
        sim_{sim},
        stimulus_{std::move(stimulus)},
        input_period_{sim.effective_input_period(clock)}
{
    tech_.validate();
    clock_.validate();
    sim_.validate(clock_);
    stimulus_.validate(layout);
    if (graph.cell_count() != layout.cells.size())
    {
        throw std::invalid_argument("neighbor graph does not match the layout");
    }
    const auto n = layout.cells.size();
    kind_.resize(n, Kind::Free);
    fixed_value_.resize(n, 0.0);
    input_label_.resize(n);
    zone_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto& c = layout.cells[i];
        zone_[i] = c.clock_zone;
        if (c.role.is_fixed())
        {
            kind_[i] = Kind::Fixed;
            fixed_value_[i] = c.role.polarization;
        }
        else if (c.role.is_input())
        {
            kind_[i] = Kind::Input;
            input_label_[i] = c.role.label;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        if (kind_[i] != Kind::Free)
        {
            driven_.push_back(i);
        }
    }
    driven_value_.assign(n, 0.0);
    for (auto* v : {&lx_, &ly_, &lz_, &kx_, &ky_, &kz_, &sx_, &sy_, &sz_, &k2x_, &k2y_, &k2z_})
    {
        v->assign(n, 0.0);
    }
    field_.resize(n);
    s_field_.resize(n);

    // free cells start depolarised at the steady state of their Φ = 0 Hamiltonian
    apply_boundary(0.0, lz_);
    for (std::size_t i = 0; i < n; ++i)
    {
        if (kind_[i] == Kind::Free)
        {
            const auto ss = steady_state(gamma_at(clock_, zone_[i], 0.0), 0.0, tech_.temperature);
            lx_[i] = ss[0];
            ly_[i] = ss[1];
            lz_[i] = ss[2];
        }
    }
    evaluate(0.0, lz_, field_);
    for (std::size_t i = 0; i < n; ++i)
    {
        if (kind_[i] == Kind::Free)
        {
            max_norm_ = std::max(max_norm_, std::sqrt(lx_[i] * lx_[i] + ly_[i] * ly_[i] + lz_[i] * lz_[i]));
        }
    }
}

void Engine::apply_boundary(double t, std::vector<double>& lz) const
{
    const auto period = static_cast<std::size_t>(std::floor(t / input_period_));
    if (period != driven_period_)
    {
        for (std::size_t i = 0; i < kind_.size(); ++i)
        {
            if (kind_[i] == Kind::Fixed)
            {
                driven_value_[i] = fixed_value_[i];
            }
            else if (kind_[i] == Kind::Input)
            {
                driven_value_[i] = stimulus_.value(input_label_[i], period) != 0 ? 1.0 : -1.0;
            }
        }
        driven_period_ = period;
    }
    for (const auto i : driven_)
    {
        lz[i] = driven_value_[i];
    }
}

void Engine::Field::resize(std::size_t n)
{
    for (auto* v : {&gamma, &phi, &bias, &gain})
    {
        v->assign(n, 0.0);
    }
}

void Engine::evaluate(double t, const std::vector<double>& lz, Field& f) const
{
    double zone_gamma[ClockConfig::n_zones];
    for (int z = 0; z < ClockConfig::n_zones; ++z)
    {
        zone_gamma[z] = gamma_at(clock_, z, t);
    }
    const double small_gain = 1.0 / (2.0 * constants::boltzmann * tech_.temperature);
    const auto& g = *graph_;
    for (std::size_t i = 0; i < kind_.size(); ++i)
    {
        const double gamma = zone_gamma[zone_[i]];
        double p = 0.0;
        for (auto k = g.offsets[i]; k < g.offsets[i + 1]; ++k)
        {
            p -= g.kink[k] * lz[g.neighbors[k]];
        }
        const double norm = std::sqrt(4.0 * gamma * gamma + p * p);
        const double th = thermal_tanh(norm, tech_.temperature);
        f.gamma[i] = gamma;
        f.phi[i] = p;
        f.bias[i] = norm * th;
        f.gain[i] = norm > 0.0 ? th / norm : small_gain;
    }
}

void Engine::derivative(const std::vector<double>& lx, const std::vector<double>& ly, const std::vector<double>& lz,
                        const Field& f, std::vector<double>& dx, std::vector<double>& dy,
                        std::vector<double>& dz) const
{
    const double rate = 1.0 / tech_.tau;
    for (std::size_t i = 0; i < kind_.size(); ++i)
    {
        if (kind_[i] != Kind::Free)
        {
            continue;
        }
        const double hx = -2.0 * f.gamma[i];
        const double hz = f.phi[i];
        const double gx = hx * inv_hbar;
        const double gz = hz * inv_hbar;
        dx[i] = -gz * ly[i] - rate * (lx[i] + f.gain[i] * hx);
        dy[i] = gz * lx[i] - gx * lz[i] - rate * ly[i];
        dz[i] = gx * ly[i] - rate * (lz[i] + f.gain[i] * hz);
    }
}

void Engine::step()
{
    const double dt = sim_.t_step;
    const auto n = kind_.size();
    const double t_next = static_cast<double>(n_ + 1) * dt;
    derivative(lx_, ly_, lz_, field_, kx_, ky_, kz_);
    if (sim_.integrator == Integrator::Euler)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            if (kind_[i] == Kind::Free)
            {
                lx_[i] += dt * kx_[i];
                ly_[i] += dt * ky_[i];
                lz_[i] += dt * kz_[i];
            }
        }
    }
    else
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            sx_[i] = lx_[i];
            sy_[i] = ly_[i];
            sz_[i] = lz_[i];
            if (kind_[i] == Kind::Free)
            {
                sx_[i] += dt * kx_[i];
                sy_[i] += dt * ky_[i];
                sz_[i] += dt * kz_[i];
            }
        }
        apply_boundary(t_next, sz_);
        evaluate(t_next, sz_, s_field_);
        derivative(sx_, sy_, sz_, s_field_, k2x_, k2y_, k2z_);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (kind_[i] == Kind::Free)
            {
                lx_[i] += 0.5 * dt * (kx_[i] + k2x_[i]);
                ly_[i] += 0.5 * dt * (ky_[i] + k2y_[i]);
                lz_[i] += 0.5 * dt * (kz_[i] + k2z_[i]);
            }
        }
    }
    ++n_;
    apply_boundary(t_next, lz_);
    evaluate(t_next, lz_, field_);

    for (std::size_t i = 0; i < n; ++i)
    {
        if (kind_[i] != Kind::Free)
        {
            continue;
        }
        const double norm = std::sqrt(lx_[i] * lx_[i] + ly_[i] * ly_[i] + lz_[i] * lz_[i]);
        if (!(norm <= 1.01))
        {
            char msg[256];
            std::snprintf(msg, sizeof(msg),
                          "integration diverged: |lambda| = %.4g for cell %d at step %zu (t = %.6g s); "
                          "t_step = %.3g s is too large",
                          norm, layout_->cells[i].id, n_, t_next, dt);
            throw SimulationError(msg);
        }
        max_norm_ = std::max(max_norm_, norm);
    }
}

CellState Engine::state(std::size_t cell) const
{
    CellState s;
    s.lambda = {lx_[cell], ly_[cell], lz_[cell]};
    s.gamma_vec = {-2.0 * field_.gamma[cell] / constants::hbar, 0.0, field_.phi[cell] / constants::hbar};
    s.steady_state = steady_state(field_.gamma[cell], field_.phi[cell], tech_.temperature);
    return s;
}

void Engine::set_lambda(std::size_t cell, const Vec3& lambda)
{
    if (kind_.at(cell) != Kind::Free)
    {
        throw std::invalid_argument("set_lambda: cell is driven, not free");
    }
    lx_[cell] = lambda[0];
    ly_[cell] = lambda[1];
    lz_[cell] = lambda[2];
    evaluate(time(), lz_, field_);
}

// ---------------------------------------------------------------------------

std::size_t RawTrace::samples() const noexcept
{
    if (rows.empty())
    {
        return 0;
    }
    std::size_t cells = 0;
    while (cells < rows.size() && rows[cells].t == rows.front().t)
    {
        ++cells;
    }
    return rows.size() / cells;
}

RawTrace run(const Layout& layout, const NeighborGraph& graph, const TechnologyParams& tech,
             const ClockConfig& clock, const SimulationParams& sim, const StimulusPlan& stimulus)
{
    if (stimulus.periods() == 0 && !layout.input_labels().empty())
    {
        throw std::invalid_argument("stimulus has zero length");
    }
    Engine engine(layout, graph, tech, clock, sim, stimulus);
    const auto n = engine.size();
    const double dt = sim.t_step;
    const double period = clock.cycle_time();
    const auto total_steps = static_cast<std::size_t>(std::llround(sim.t_sim / dt));
    const double tau = tech.tau;
    const double temperature = tech.temperature;

    RawTrace trace;
    trace.t_step = dt;
    trace.cycle_time = period;
    trace.steps = total_steps;
    trace.hold_probes.resize(n);

    EnergyLedger ledger(n, graph.edge_count());

    // hold-midpoint probe schedule per zone
    std::array<long, ClockConfig::n_zones> probe_cycle{};
    std::array<long long, ClockConfig::n_zones> probe_step{};
    const auto schedule = [&](int z) {
        while (true)
        {
            const double t_mid =
                phase_start(clock, z, ClockPhase::Hold, probe_cycle[z]) + 0.5 * clock.plateau_time;
            probe_step[z] = std::llround(t_mid / dt);
            if (probe_step[z] >= 0)
            {
                break;
            }
            ++probe_cycle[z];
        }
    };
    for (int z = 0; z < ClockConfig::n_zones; ++z)
    {
        probe_cycle[z] = -1;
        schedule(z);
    }
    std::vector<std::vector<std::size_t>> zone_cells(ClockConfig::n_zones);
    for (std::size_t i = 0; i < n; ++i)
    {
        zone_cells[layout.cells[i].clock_zone].push_back(i);
    }

    long next_snapshot_cycle = 0;
    auto next_snapshot_step = 0LL;

    std::vector<CellSample> prev(n);
    std::vector<double> prev_lz(n);
    const auto& lz = engine.lambda_z();

    // per-step increments are summed plainly in short blocks and folded into
    // the compensated ledger at block ends and before every snapshot
    constexpr std::size_t block = 1024;
    std::vector<EnergySums> pending(n);
    const auto flush = [&] {
        for (std::size_t i = 0; i < n; ++i)
        {
            ledger.accumulate(i, pending[i]);
            pending[i] = {};
        }
    };

    const auto observe = [&](std::size_t step) {
        const double t = static_cast<double>(step) * dt;
        if (static_cast<long long>(step) == next_snapshot_step)
        {
            flush();
            trace.cycle_snapshots.push_back(ledger.snapshot(t));
            ++next_snapshot_cycle;
            next_snapshot_step = std::llround(static_cast<double>(next_snapshot_cycle) * period / dt);
        }
        for (int z = 0; z < ClockConfig::n_zones; ++z)
        {
            if (static_cast<long long>(step) == probe_step[z])
            {
                for (const auto i : zone_cells[z])
                {
                    trace.hold_probes[i].push_back({probe_cycle[z], lz[i]});
                }
                ++probe_cycle[z];
                schedule(z);
            }
        }
        if (step % sim.record_stride == 0)
        {
            for (std::size_t i = 0; i < n; ++i)
            {
                const auto s = engine.sample(i);
                trace.rows.push_back({t, i, s.lx, s.ly, s.lz, s.gamma, s.phi,
                                      constants::hbar / (2.0 * tau) * env_integrand(s, temperature)});
            }
        }
    };

    for (std::size_t i = 0; i < n; ++i)
    {
        prev[i] = engine.sample(i);
        prev_lz[i] = prev[i].lz;
    }
    observe(0);

    auto& edge_io = ledger.edge_io();
    std::vector<double> prev_env(n);
    std::vector<double> d_lz(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        prev_env[i] = engine.env_rate(i);
    }
    for (std::size_t step = 1; step <= total_steps; ++step)
    {
        engine.step();
        for (std::size_t i = 0; i < n; ++i)
        {
            d_lz[i] = lz[i] - prev_lz[i];
            prev_lz[i] = lz[i];
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto curr = engine.sample(i);
            const double curr_env = engine.env_rate(i);
            pending[i] += energy_increment(prev[i], curr, prev_env[i], curr_env, dt, tau);
            const double half_mean_lz = 0.25 * (prev[i].lz + curr.lz);
            for (auto k = graph.offsets[i]; k < graph.offsets[i + 1]; ++k)
            {
                edge_io[k] -= graph.kink[k] * d_lz[graph.neighbors[k]] * half_mean_lz;
            }
            prev[i] = curr;
            prev_env[i] = curr_env;
        }
        if (step % block == 0)
        {
            flush();
        }
        observe(step);
    }
    flush();

    trace.final_energy = ledger.snapshot(static_cast<double>(total_steps) * dt);
    trace.max_norm = engine.max_norm();
    return trace;
}

std::string trace_csv(const RawTrace& trace, const Layout& layout)
{
    std::string out = "t_s,cell_id,lambda_x,lambda_y,lambda_z,gamma_J,phi_J,p_env_W\n";
    char buf[256];
    for (const auto& r : trace.rows)
    {
        std::snprintf(buf, sizeof(buf), "%.9e,%d,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n", r.t, layout.cells[r.cell].id,
                      r.lx, r.ly, r.lz, r.gamma, r.phi, r.p_env);
        out += buf;
    }
    return out;
}

std::vector<std::map<std::string, DecodedBit>> decode_outputs(const RawTrace& trace, const Layout& layout,
                                                              const std::map<std::string, long>& latency_cycles,
                                                              std::size_t periods)
{
    std::vector<std::map<std::string, DecodedBit>> result(periods);
    for (std::size_t i = 0; i < layout.cells.size(); ++i)
    {
        const auto& cell = layout.cells[i];
        if (!cell.role.is_output())
        {
            continue;
        }
        const auto& probes = trace.hold_probes[i];
        if (probes.empty())
        {
            throw std::invalid_argument("trace does not cover a hold phase of output '" + cell.role.label + "'");
        }
        double peak = 0.0;
        for (const auto& p : probes)
        {
            peak = std::max(peak, std::abs(p.lambda_z));
        }
        const auto lat = latency_cycles.count(cell.role.label) ? latency_cycles.at(cell.role.label) : 0L;
        for (std::size_t period = 0; period < periods; ++period)
        {
            const long wanted = static_cast<long>(period) + lat;
            // the last period is held, so later cycles still carry its value
            const HoldProbe* probe = nullptr;
            for (const auto& p : probes)
            {
                if (p.cycle == wanted || (period + 1 == periods && p.cycle >= wanted))
                {
                    probe = &p;
                }
                if (p.cycle == wanted && period + 1 != periods)
                {
                    break;
                }
            }
            if (probe == nullptr)
            {
                throw std::invalid_argument("trace too short to decode period " + std::to_string(period) +
                                            " of output '" + cell.role.label + "'");
            }
            DecodedBit bit;
            bit.lambda_z = probe->lambda_z;
            bit.value = probe->lambda_z > 0.0;
            bit.weak = std::abs(probe->lambda_z) < 0.5;
            bit.undecidable = peak < 0.5;
            result[period][cell.role.label] = bit;
        }
    }
    return result;
}

}  // namespace qcae
