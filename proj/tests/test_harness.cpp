#include "doctest.h"

#include "qcae/harness.hpp"
#include "qcae/report_io.hpp"

#include <algorithm>

using namespace qcae;

namespace
{

RunConfig fast_config()
{
    RunConfig c;
    c.clock.slope_time = 10e-12;
    c.clock.plateau_time = 10e-12;
    c.sim.t_step = 1e-16;
    c.jobs = 1;
    return c;
}

}  // namespace

TEST_CASE("buffers are added around inputs and outputs and left out of reports")
{
    const auto l = builtin_circuit("or_std");
    const TechnologyParams tech;
    const auto p = prepare_layout(l, tech, true);
    // two inputs get two buffers and a driver each, one output two buffers
    CHECK(p.layout.cells.size() == l.cells.size() + 2 * 3 + 2);
    CHECK(p.layout.input_labels() == l.input_labels());
    const auto reported = [&](std::size_t i) {
        return std::find(p.reporting_set.begin(), p.reporting_set.end(), i) != p.reporting_set.end();
    };
    for (std::size_t i = 0; i < p.layout.cells.size(); ++i)
    {
        const bool design = i < l.cells.size() && !l.cells[i].role.is_fixed();
        CHECK(reported(i) == design);
    }
    CHECK(p.directions.size() == p.reporting_set.size());

    const auto bare = prepare_layout(l, tech, false);
    CHECK(bare.layout.cells.size() == l.cells.size());
}

TEST_CASE("arrival quarters follow the clock zones along the wire")
{
    const auto l = builtin_circuit("wire8");
    const TechnologyParams tech;
    const auto q = arrival_quarters(l, tech);
    for (std::size_t i = 1; i < l.cells.size(); ++i)
    {
        CHECK(q[i] >= q[i - 1]);
        CHECK(((q[i] % 4) + 4) % 4 == l.cells[i].clock_zone);
    }
}

TEST_CASE("wire8 truth table with a fast clock")
{
    auto cfg = fast_config();
    const auto r = run_truth_table(builtin_circuit("wire8"), cfg);
    CHECK(r.combinations.size() == 2);
    CHECK(r.logic_correct() == 2);
    CHECK(r.landauer_limit == landauer_limit(1.0));
    for (const auto& c : r.combinations)
    {
        CHECK_FALSE(c.error);
        CHECK(c.energy.per_cycle_dissipated.size() == r.cycles);
        CHECK(c.energy.cells.size() == r.reporting_cell_ids.size());
    }
}

TEST_CASE("parallel truth tables equal sequential ones and reports are deterministic")
{
    auto cfg = fast_config();
    const auto l = builtin_circuit("and_std");
    const auto seq = run_truth_table(l, cfg);
    cfg.jobs = 3;
    const auto par = run_truth_table(l, cfg);
    cfg.jobs = 1;
    REQUIRE(seq.combinations.size() == par.combinations.size());
    for (std::size_t k = 0; k < seq.combinations.size(); ++k)
    {
        const auto& a = seq.combinations[k].energy;
        const auto& b = par.combinations[k].energy;
        CHECK(a.inputs == b.inputs);
        CHECK(a.sum_dissipated == b.sum_dissipated);
        CHECK(a.epsilon_env == b.epsilon_env);
    }
    auto par_cfg = par;
    par_cfg.config.jobs = seq.config.jobs;
    CHECK(report_json(seq) == report_json(par_cfg));
    CHECK(report_csv(seq) == report_csv(par_cfg));
    CHECK(seq.logic_correct() == 4);
}

TEST_CASE("report formats")
{
    auto cfg = fast_config();
    const auto r = run_truth_table(builtin_circuit("wire8"), cfg, std::vector<std::size_t>{1});
    REQUIRE(r.combinations.size() == 1);
    CHECK(r.combinations[0].energy.inputs == "1");
    const auto text = report_text(r);
    CHECK(text.find("wire8") != std::string::npos);
    const auto json = report_json(r);
    CHECK(json.find("\"t_step_s\"") != std::string::npos);
    CHECK(json.find("\"provenance\"") != std::string::npos);
    const auto csv = report_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(r.reporting_cell_ids.size()));
}

TEST_CASE("slope and convergence sweeps report failures as rows")
{
    auto cfg = fast_config();
    const auto sweep = slope_sweep(builtin_circuit("wire8"), cfg, {10e-12});
    REQUIRE(sweep.points.size() == 1);
    CHECK_FALSE(sweep.strictly_decreasing.has_value());
    const auto conv = convergence_study(builtin_circuit("wire8"), cfg, {1e-13});
    REQUIRE(conv.points.size() == 1);
    CHECK(conv.points[0].failed);
    CHECK_FALSE(conv.largest_step_within_1pct.has_value());
    CHECK(slope_sweep_csv(sweep).find('\n') != std::string::npos);
}

TEST_CASE("table rows")
{
    const auto names = table2_circuits();
    for (const auto* n : {"or_rev", "and_rev", "maj_rev", "half_adder_rev", "or_std", "and_std", "maj_std"})
    {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    }
}
