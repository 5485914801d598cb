#include "doctest.h"

#include "qcae/engine.hpp"
#include "qcae/harness.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace qcae;

namespace
{

Layout single_cell()
{
    Layout l;
    l.name = "single";
    l.cells = {{0, 0, 0, 0, 0, CellRole::normal()}};
    return l;
}

// fixed driver and one free cell at one pitch
Layout driven_pair()
{
    Layout l;
    l.name = "pair";
    l.cells = {{0, 0, 0, 0, 0, CellRole::fixed(1.0)}, {1, 20, 0, 0, 0, CellRole::normal()}};
    return l;
}

ClockConfig fast_clock()
{
    ClockConfig c;
    c.slope_time = 10e-12;
    c.plateau_time = 10e-12;
    return c;
}

SimulationParams params(double dt, double t_sim, Integrator integrator = Integrator::Euler)
{
    SimulationParams s;
    s.t_step = dt;
    s.t_sim = t_sim;
    s.integrator = integrator;
    s.record_stride = 1000;
    return s;
}

double free_cell_env(const Layout& l, const ClockConfig& c, double dt, Integrator integrator)
{
    const TechnologyParams tech;
    const auto g = build_neighbor_graph(l, tech);
    const auto trace = run(l, g, tech, c, params(dt, c.cycle_time(), integrator), {});
    return trace.final_energy.cells[1].env;
}

}  // namespace

TEST_CASE("steady state")
{
    const TechnologyParams tech;
    const auto ss = steady_state(tech.gamma_high, 0.0, tech.temperature);
    CHECK(ss[0] == doctest::Approx(1.0));
    CHECK(ss[1] == 0.0);
    CHECK(ss[2] == 0.0);
    // a negative Φ polarises toward +1
    const auto pol = steady_state(tech.gamma_low, -1e-21, tech.temperature);
    CHECK(pol[2] > 0.9);
    CHECK(std::hypot(pol[0], pol[2]) <= 1.0);
    CHECK_THROWS_AS(steady_state(0.0, 0.0, 1.0), SimulationError);
    const auto d = coherence_derivative(ss, tech.gamma_high, 0.0, tech);
    CHECK(std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2]) <= 1e-3);
}

TEST_CASE("an isolated cell on a clock plateau stays at its fixed point")
{
    const auto l = single_cell();
    const TechnologyParams tech;
    const ClockConfig clock;
    const auto g = build_neighbor_graph(l, tech);
    Engine e(l, g, tech, clock, params(1e-17, clock.cycle_time()), {});
    const auto start = e.state(0).lambda;
    for (int k = 0; k < 2000; ++k)
    {
        e.step();
    }
    const auto end = e.state(0).lambda;
    for (int a = 0; a < 3; ++a)
    {
        CHECK(std::abs(end[a] - start[a]) < 1e-12);
    }
}

TEST_CASE("relaxation along x follows the exponential")
{
    const auto l = single_cell();
    const TechnologyParams tech;
    const ClockConfig clock;
    const auto g = build_neighbor_graph(l, tech);
    Engine e(l, g, tech, clock, params(1e-17, clock.cycle_time(), Integrator::RK2), {});
    const double target = e.state(0).steady_state[0];
    e.set_lambda(0, {0.0, 0.0, 0.0});
    const int steps = 100;
    for (int k = 0; k < steps; ++k)
    {
        e.step();
    }
    const double t = steps * 1e-17;
    const double exact = target * (1.0 - std::exp(-t / tech.tau));
    CHECK(e.state(0).lambda[0] == doctest::Approx(exact).epsilon(2e-4));
    CHECK(e.state(0).lambda[2] == 0.0);
}

TEST_CASE("without dissipation RK2 precession keeps the norm")
{
    const auto l = single_cell();
    TechnologyParams tech;
    tech.tau = std::numeric_limits<double>::infinity();
    const ClockConfig clock;
    const auto g = build_neighbor_graph(l, tech);
    Engine e(l, g, tech, clock, params(1e-17, clock.cycle_time(), Integrator::RK2), {});
    e.set_lambda(0, {0.0, 0.0, 1.0});
    for (int k = 0; k < 100000; ++k)
    {
        e.step();
    }
    const auto s = e.state(0).lambda;
    CHECK(std::abs(std::hypot(s[0], s[1], s[2]) - 1.0) <= 1e-4);
    // and it did precess
    CHECK(std::abs(s[2]) < 0.999);
}

TEST_CASE("divergence guard trips on an absurd step")
{
    const auto l = driven_pair();
    const TechnologyParams tech;
    const ClockConfig clock;
    const auto g = build_neighbor_graph(l, tech);
    CHECK_THROWS_AS(run(l, g, tech, clock, params(1e-13, clock.cycle_time()), {}), SimulationError);
}

TEST_CASE("norm stays bounded at the standard step")
{
    const auto l = driven_pair();
    const TechnologyParams tech;
    const ClockConfig clock;
    const auto g = build_neighbor_graph(l, tech);
    const auto trace = run(l, g, tech, clock, params(1e-17, clock.cycle_time()), {});
    CHECK(trace.max_norm <= 1.0 + 1e-6);
}

TEST_CASE("runs are deterministic and independent of the record stride")
{
    const auto l = builtin_circuit("wire8");
    const TechnologyParams tech;
    const auto p = prepare_layout(l, tech, true);
    const auto c = fast_clock();
    auto sim = params(1e-16, 2 * c.cycle_time());
    const auto stim = StimulusPlan::constant({{"in", true}});
    const auto a = run(p.layout, p.graph, tech, c, sim, stim);
    const auto b = run(p.layout, p.graph, tech, c, sim, stim);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k)
    {
        CHECK(a.rows[k].lz == b.rows[k].lz);
        CHECK(a.rows[k].p_env == b.rows[k].p_env);
    }
    sim.record_stride = 37;
    const auto s = run(p.layout, p.graph, tech, c, sim, stim);
    for (std::size_t i = 0; i < p.layout.cells.size(); ++i)
    {
        CHECK(s.final_energy.cells[i].env == a.final_energy.cells[i].env);
        CHECK(s.final_energy.cells[i].io == a.final_energy.cells[i].io);
    }
    CHECK(s.samples() > a.samples());
}

TEST_CASE("convergence follows the integrator order")
{
    const auto l = driven_pair();
    const auto c = fast_clock();
    const double ref = free_cell_env(l, c, 2.5e-18, Integrator::RK2);
    const double e1 = std::abs(free_cell_env(l, c, 4e-17, Integrator::Euler) - ref);
    const double e2 = std::abs(free_cell_env(l, c, 2e-17, Integrator::Euler) - ref);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
    const double r1 = std::abs(free_cell_env(l, c, 4e-17, Integrator::RK2) - ref);
    const double r2 = std::abs(free_cell_env(l, c, 2e-17, Integrator::RK2) - ref);
    CHECK(r1 / r2 > 3.0);
    CHECK(r1 / r2 < 5.0);
}

TEST_CASE("wire pipeline: each zone copies the zone before it a quarter cycle later")
{
    const auto l = builtin_circuit("wire8");
    const TechnologyParams tech;
    const auto p = prepare_layout(l, tech, true);
    const auto c = fast_clock();
    std::mt19937 rng(11);
    StimulusPlan stim;
    for (int k = 0; k < 8; ++k)
    {
        stim.values["in"].push_back(static_cast<int>(rng() % 2));
    }
    const auto trace = run(p.layout, p.graph, tech, c, params(1e-16, 9 * c.cycle_time()), stim);

    // design cells in order along the wire
    std::vector<std::size_t> wire;
    for (std::size_t i = 0; i < l.cells.size(); ++i)
    {
        if (!l.cells[i].role.is_input())
        {
            wire.push_back(i);
        }
    }
    const auto probe = [&](std::size_t i, long cycle) {
        for (const auto& h : trace.hold_probes[i])
        {
            if (h.cycle == cycle)
            {
                return h.lambda_z;
            }
        }
        return 0.0;
    };
    int forward = 0, backward = 0, checked = 0;
    for (std::size_t k = 0; k + 1 < wire.size(); ++k)
    {
        const auto up = wire[k];
        const auto down = wire[k + 1];
        const int zu = p.layout.cells[up].clock_zone;
        const int zd = p.layout.cells[down].clock_zone;
        if (zd != (zu + 1) % 4)
        {
            continue;
        }
        for (long cyc = 1; cyc < 8; ++cyc)
        {
            // zone 3 holds before zone 0 of the next cycle
            const long next = zd == 0 ? cyc + 1 : cyc;
            const double now = probe(up, cyc);
            forward += now * probe(down, next) > 0.0;
            backward += now * probe(down, next - 1) > 0.0;
            ++checked;
        }
    }
    REQUIRE(checked > 0);
    CHECK(forward == checked);
    CHECK(backward < checked);
}

TEST_CASE("stimulus plans")
{
    const auto l = builtin_circuit("or_std");
    StimulusPlan ok;
    ok.values = {{"a", {0, 1}}, {"b", {1, 1}}};
    CHECK_NOTHROW(ok.validate(l));
    CHECK(ok.value("a", 5) == 1);
    StimulusPlan bad = ok;
    bad.values["b"] = {1};
    CHECK_THROWS(bad.validate(l));
    bad = ok;
    bad.values["c"] = {0, 0};
    CHECK_THROWS(bad.validate(l));
    bad = ok;
    bad.values["a"] = {0, 2};
    CHECK_THROWS(bad.validate(l));
    const auto bits = StimulusPlan::combination({"a", "b", "c"}, 3);
    CHECK(bits.at("a") == false);
    CHECK(bits.at("b") == true);
    CHECK(bits.at("c") == true);
    SimulationParams s;
    s.t_sim = 1e-12;
    CHECK_THROWS(s.validate(ClockConfig{}));
}
