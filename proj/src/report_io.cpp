#include "qcae/report_io.hpp"

#include "qcae/constants.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace qcae
{

namespace
{

using json = nlohmann::ordered_json;

constexpr const char* version = "1.0.0";

std::string fmt(const char* format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["technology"] = {{"qd_size_nm", c.tech.qd_size},
                       {"cell_width_nm", c.tech.cell_width},
                       {"cell_height_nm", c.tech.cell_height},
                       {"cell_distance_nm", c.tech.cell_distance},
                       {"layer_distance_nm", c.tech.layer_distance},
                       {"tau_s", c.tech.tau},
                       {"gamma_high_J", c.tech.gamma_high},
                       {"gamma_low_J", c.tech.gamma_low},
                       {"epsilon_r", c.tech.epsilon_r},
                       {"temperature_K", c.tech.temperature},
                       {"r_effect_nm", c.tech.r_effect}};
    j["clock"] = {{"gamma_high_J", c.clock.gamma_high},
                  {"gamma_low_J", c.clock.gamma_low},
                  {"slope_s", c.clock.slope_time},
                  {"plateau_s", c.clock.plateau_time},
                  {"shape", std::string(to_string(c.clock.shape))},
                  {"cycle_s", c.clock.cycle_time()}};
    j["simulation"] = {{"t_step_s", c.sim.t_step},
                       {"input_period_s", c.sim.effective_input_period(c.clock)},
                       {"integrator", std::string(to_string(c.sim.integrator))}};
    j["buffers"] = c.buffers;
    j["cycles"] = c.cycles;
    return j;
}

}  // namespace

std::string report_text(const EnergyReport& r)
{
    std::string out;
    out += "circuit: " + r.circuit + (r.reconstruction ? " (reconstructed layout)" : "") + "\n";
    out += "slope " + fmt("%g", r.config.clock.slope_time / constants::ps) + " ps, " +
           std::string(to_string(r.config.clock.shape)) + ", T = " + fmt("%g", r.config.tech.temperature) +
           " K, t_step " + fmt("%g", r.config.sim.t_step) + " s, cycles " + std::to_string(r.cycles) +
           " (measured " + std::to_string(r.measured_cycle) + ")\n";
    out += "kT ln2 limit: " + fmt("%.4f", constants::to_mev(r.landauer_limit)) + " meV\n";
    out += "reporting cells exclude drivers, buffers and fixed cells\n\n";

    std::string labels;
    for (const auto& l : r.input_labels)
    {
        labels += l;
    }
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %12s %12s %12s %9s  %s\n", labels.empty() ? "inputs" : labels.c_str(),
                  "E_env[meV]", "E_clk[meV]", "E_io[meV]", "eps_env", "outputs");
    out += line;
    for (const auto& c : r.combinations)
    {
        if (c.error)
        {
            out += c.energy.inputs + "  FAILED: " + *c.error + "\n";
            continue;
        }
        std::string outputs;
        for (const auto& [label, bit] : c.outputs)
        {
            outputs += label + "=" + (bit.value ? "1" : "0");
            if (bit.undecidable)
            {
                outputs += "?";
            }
            else if (bit.weak)
            {
                outputs += "~";
            }
            const auto exp = c.expected.find(label);
            if (exp != c.expected.end() && exp->second != bit.value)
            {
                outputs += "!";
            }
            outputs += " ";
        }
        const std::string env =
            fmt("%.3f", constants::to_mev(c.energy.sum_dissipated)) + (c.energy.below_landauer ? "*" : " ");
        std::snprintf(line, sizeof(line), "%-8s %12s %12.3f %12.3f %9.2e  %s%s\n", c.energy.inputs.c_str(),
                      env.c_str(), constants::to_mev(c.energy.sum_to_clock),
                      constants::to_mev(c.energy.sum_from_neighbors), c.energy.epsilon_env, outputs.c_str(),
                      c.logic_ok ? "" : "LOGIC MISMATCH");
        out += line;
    }
    out += "\nlogic correct: " + std::to_string(r.logic_correct()) + "/" + std::to_string(r.combinations.size()) +
           ", below limit: " + std::to_string(r.below_limit()) + "/" + std::to_string(r.combinations.size()) + "\n";
    return out;
}

std::string report_csv(const EnergyReport& r)
{
    std::string out =
        "inputs,cell_id,role,dissipated_J,to_clock_J,from_neighbors_J,total_J,e_in_J,e_out_J,balance_residual\n";
    char line[512];
    for (const auto& c : r.combinations)
    {
        for (const auto& row : c.energy.cells)
        {
            std::snprintf(line, sizeof(line), "%s,%d,%s,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.6e\n",
                          c.energy.inputs.c_str(), row.cell_id, row.label.c_str(), row.sums.dissipated(),
                          row.sums.to_clock(), row.sums.from_neighbors(), row.sums.total, row.directional.e_in,
                          row.directional.e_out, row.balance_residual);
            out += line;
        }
    }
    return out;
}

std::string report_json(const EnergyReport& r)
{
    json j;
    j["provenance"] = {{"tool", "qcae"}, {"version", version}, {"parameters", config_to_json(r.config)}};
    j["circuit"] = r.circuit;
    j["reconstruction"] = r.reconstruction;
    j["cycles"] = r.cycles;
    j["measured_cycle"] = r.measured_cycle;
    j["landauer_limit_J"] = r.landauer_limit;
    j["input_labels"] = r.input_labels;
    j["reporting_cell_ids"] = r.reporting_cell_ids;
    j["excluded_cell_ids"] = r.excluded_cell_ids;
    j["sign_convention"] = "dissipated>0: heat to environment; to_clock>0: energy returned to the clock; "
                           "from_neighbors>0: net energy received from neighbouring cells";
    j["combinations"] = json::array();
    for (const auto& c : r.combinations)
    {
        json jc;
        jc["inputs"] = c.energy.inputs;
        if (c.error)
        {
            jc["error"] = *c.error;
            j["combinations"].push_back(jc);
            continue;
        }
        jc["sum_dissipated_J"] = c.energy.sum_dissipated;
        jc["sum_dissipated_meV"] = constants::to_mev(c.energy.sum_dissipated);
        jc["sum_to_clock_J"] = c.energy.sum_to_clock;
        jc["sum_from_neighbors_J"] = c.energy.sum_from_neighbors;
        jc["epsilon_env"] = c.energy.epsilon_env;
        jc["below_landauer"] = c.energy.below_landauer;
        jc["per_cycle_dissipated_J"] = c.energy.per_cycle_dissipated;
        jc["logic_ok"] = c.logic_ok;
        json outs = json::object();
        for (const auto& [label, bit] : c.outputs)
        {
            outs[label] = {{"value", bit.value ? 1 : 0},
                           {"lambda_z", bit.lambda_z},
                           {"weak", bit.weak},
                           {"undecidable", bit.undecidable}};
            if (const auto e = c.expected.find(label); e != c.expected.end())
            {
                outs[label]["expected"] = e->second ? 1 : 0;
            }
        }
        jc["outputs"] = outs;
        jc["cells"] = json::array();
        for (const auto& row : c.energy.cells)
        {
            jc["cells"].push_back({{"cell_id", row.cell_id},
                                   {"role", row.label},
                                   {"dissipated_J", row.sums.dissipated()},
                                   {"to_clock_J", row.sums.to_clock()},
                                   {"from_neighbors_J", row.sums.from_neighbors()},
                                   {"total_J", row.sums.total},
                                   {"e_in_J", row.directional.e_in},
                                   {"e_out_J", row.directional.e_out},
                                   {"balance_residual", row.balance_residual}});
        }
        j["combinations"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

std::string slope_sweep_csv(const SlopeSweep& sweep)
{
    std::string out = "slope_s,sum_dissipated_J,sum_dissipated_meV,epsilon_env,below_limit,status\n";
    char line[256];
    for (const auto& p : sweep.points)
    {
        std::snprintf(line, sizeof(line), "%.6e,%.9e,%.6f,%.6e,%d,%s\n", p.value, p.sum_dissipated,
                      constants::to_mev(p.sum_dissipated), p.epsilon_env,
                      !p.failed && p.sum_dissipated < sweep.landauer_limit ? 1 : 0, p.failed ? "failed" : "ok");
        out += line;
    }
    return out;
}

std::string convergence_csv(const ConvergenceStudy& study)
{
    std::string out = "t_step_s,sum_dissipated_J,epsilon_env,status\n";
    char line[512];
    for (const auto& p : study.points)
    {
        std::snprintf(line, sizeof(line), "%.6e,%.9e,%.6e,%s\n", p.value, p.sum_dissipated, p.epsilon_env,
                      p.failed ? "failed" : "ok");
        out += line;
    }
    return out;
}

std::string config_json(const RunConfig& config)
{
    return config_to_json(config).dump(2) + "\n";
}

}  // namespace qcae
