// qcae: run QCA layouts through the coherence-vector engine and report
// per-cell energy flows against the k_B·T·ln 2 limit.

#include "qcae/constants.hpp"
#include "qcae/harness.hpp"
#include "qcae/report_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace qcae;

struct Options
{
    RunConfig config;
    std::string circuit = "wire8";
    std::string layout_file;
    std::string out;
    std::string inputs;
    std::string shape = "gaussian";
    std::string integrator = "euler";
    bool no_buffers = false;
    double t_sim = 0.0;
    double slope_ps = 100.0;
    double plateau_ps = -1.0;
    std::vector<double> slopes_ps = {1, 3, 10, 30, 100};
    std::vector<double> steps = {4e-17, 2e-17, 1e-17};
};

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
    {
        throw ConfigError("cannot write " + path);
    }
    f << text;
}

Layout load_design(const Options& o)
{
    if (!o.layout_file.empty())
    {
        return load_layout_file(o.layout_file);
    }
    return builtin_circuit(o.circuit);
}

RunConfig effective_config(const Options& o)
{
    RunConfig c = o.config;
    c.clock.gamma_high = c.tech.gamma_high;
    c.clock.gamma_low = c.tech.gamma_low;
    c.clock.slope_time = o.slope_ps * constants::ps;
    c.clock.plateau_time = (o.plateau_ps < 0 ? o.slope_ps : o.plateau_ps) * constants::ps;
    c.clock.shape = parse_clock_shape(o.shape);
    c.sim.integrator = parse_integrator(o.integrator);
    c.buffers = !o.no_buffers;
    if (o.t_sim > 0.0)
    {
        const double cycles = o.t_sim / c.clock.cycle_time();
        c.cycles = static_cast<std::size_t>(std::max(1.0, std::ceil(cycles - 1e-9)));
    }
    c.tech.validate();
    c.clock.validate();
    c.sim.validate(c.clock);
    return c;
}

std::vector<std::size_t> selected_combinations(const Layout& design, const std::string& inputs)
{
    const auto labels = design.input_labels();
    if (inputs.size() != labels.size() || inputs.find_first_not_of("01") != std::string::npos)
    {
        throw ConfigError("--inputs needs " + std::to_string(labels.size()) + " binary digits for labels in order");
    }
    std::size_t index = 0;
    for (const char c : inputs)
    {
        index = index * 2 + (c == '1' ? 1 : 0);
    }
    return {index};
}

int emit_report(const Options& o, const EnergyReport& report)
{
    const auto text = report_text(report);
    std::cout << text;
    if (!o.out.empty())
    {
        write_file(o.out + ".report.txt", text);
        write_file(o.out + ".report.json", report_json(report));
        write_file(o.out + ".report.csv", report_csv(report));
    }
    return report.all_ok() ? 0 : 1;
}

int cmd_run(const Options& o)
{
    const auto design = load_design(o);
    const auto config = effective_config(o);
    std::optional<std::vector<std::size_t>> only;
    if (!o.inputs.empty())
    {
        only = selected_combinations(design, o.inputs);
    }
    auto report = run_truth_table(design, config, only);
    const int rc = emit_report(o, report);
    if (!o.out.empty())
    {
        // trace of the first selected combination
        const auto prepared = prepare_layout(design, config.tech, config.buffers);
        RawTrace trace;
        auto traced = config;
        simulate_combination(prepared, design, report.combinations.front().inputs, traced, &trace);
        write_file(o.out + ".trace.csv", trace_csv(trace, prepared.layout));
    }
    return rc;
}

int cmd_truth_table(const Options& o)
{
    const auto design = load_design(o);
    return emit_report(o, run_truth_table(design, effective_config(o)));
}

int cmd_slope_sweep(const Options& o)
{
    const auto design = load_design(o);
    std::vector<double> slopes;
    for (const double s : o.slopes_ps)
    {
        slopes.push_back(s * constants::ps);
    }
    const auto sweep = slope_sweep(design, effective_config(o), slopes);
    const auto csv = slope_sweep_csv(sweep);
    std::cout << csv;
    if (sweep.strictly_decreasing)
    {
        std::cout << "strictly decreasing: " << (*sweep.strictly_decreasing ? "yes" : "no") << "\n";
    }
    if (sweep.first_slope_below_limit)
    {
        std::cout << "first slope below limit: " << *sweep.first_slope_below_limit / constants::ps << " ps\n";
    }
    if (!o.out.empty())
    {
        write_file(o.out + ".sweep.csv", csv);
    }
    for (const auto& p : sweep.points)
    {
        if (p.failed)
        {
            return 1;
        }
    }
    return 0;
}

int cmd_convergence(const Options& o)
{
    const auto design = load_design(o);
    const auto study = convergence_study(design, effective_config(o), o.steps);
    const auto csv = convergence_csv(study);
    std::cout << csv;
    if (study.largest_step_within_1pct)
    {
        std::cout << "largest t_step with eps_env <= 1%: " << *study.largest_step_within_1pct << " s\n";
    }
    else
    {
        std::cout << "no t_step reached eps_env <= 1%\n";
    }
    if (!o.out.empty())
    {
        write_file(o.out + ".sweep.csv", csv);
    }
    return 0;
}

int cmd_table2(const Options& o)
{
    const auto config = effective_config(o);
    std::string text;
    std::string json = "[\n";
    bool ok = true;
    bool first = true;
    for (const auto& name : table2_circuits())
    {
        const auto report = run_truth_table(builtin_circuit(name), config);
        ok = ok && report.all_ok();
        text += report_text(report) + "\n";
        json += (first ? "" : ",\n") + report_json(report);
        first = false;
        std::cout << report_text(report) << "\n" << std::flush;
    }
    json += "]\n";
    if (!o.out.empty())
    {
        write_file(o.out + ".report.txt", text);
        write_file(o.out + ".report.json", json);
    }
    return ok ? 0 : 1;
}

int cmd_dump_kink(const Options& o)
{
    const auto design = load_design(o);
    const auto config = effective_config(o);
    const auto prepared = prepare_layout(design, config.tech, config.buffers);
    const auto csv = neighbor_graph_csv(prepared.layout, prepared.graph);
    std::cout << csv;
    if (!o.out.empty())
    {
        write_file(o.out + ".kink.csv", csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"QCA coherence-vector simulator with per-cell energy accounting"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    auto& t = o.config.tech;
    app.add_option("--temp", t.temperature, "temperature [K]");
    app.add_option("--tau", t.tau, "relaxation time [s]");
    app.add_option("--gamma-high", t.gamma_high, "clock maximum tunneling energy [J]");
    app.add_option("--gamma-low", t.gamma_low, "clock minimum tunneling energy [J]");
    app.add_option("--epsilon-r", t.epsilon_r, "relative permittivity");
    app.add_option("--r-effect", t.r_effect, "interaction radius [nm]");
    app.add_option("--t-step", o.config.sim.t_step, "integration step [s]");
    app.add_option("--t-sim", o.t_sim, "simulated time per combination [s], rounded up to whole cycles");
    app.add_option("--slope", o.slope_ps, "clock slope [ps]");
    app.add_option("--plateau", o.plateau_ps, "clock plateau [ps], default = slope");
    app.add_option("--shape", o.shape, "clock edge shape")->check(CLI::IsMember({"ramp", "gaussian"}));
    app.add_option("--integrator", o.integrator, "integrator")->check(CLI::IsMember({"euler", "rk2"}));
    app.add_option("--circuit", o.circuit, "built-in circuit name");
    app.add_option("--layout-file", o.layout_file, "layout file (.qca text or .json)");
    app.add_option("--out", o.out, "output path prefix");
    app.add_flag("--no-buffers", o.no_buffers, "do not insert input/output buffer cells");
    app.add_option("--jobs", o.config.jobs, "worker threads, 0 = all cores");

    auto* run = app.add_subcommand("run", "simulate one or all input combinations, write report and trace");
    run->add_option("--inputs", o.inputs, "input bits in sorted-label order, e.g. 01");
    auto* tt = app.add_subcommand("truth-table", "simulate every input combination and check the logic");
    auto* sweep = app.add_subcommand("slope-sweep", "truth-table-averaged dissipation per clock slope");
    sweep->add_option("--slopes", o.slopes_ps, "slopes [ps]")->delimiter(',');
    auto* conv = app.add_subcommand("convergence", "balance residual per integration step");
    conv->add_option("--steps", o.steps, "steps [s]")->delimiter(',');
    auto* table2 = app.add_subcommand("table2", "reversible and standard gate energies");
    auto* kink = app.add_subcommand("dump-kink", "neighbour list with kink energies");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        if (run->parsed())
        {
            return cmd_run(o);
        }
        if (tt->parsed())
        {
            return cmd_truth_table(o);
        }
        if (sweep->parsed())
        {
            return cmd_slope_sweep(o);
        }
        if (conv->parsed())
        {
            return cmd_convergence(o);
        }
        if (table2->parsed())
        {
            return cmd_table2(o);
        }
        if (kink->parsed())
        {
            return cmd_dump_kink(o);
        }
    }
    catch (const SimulationError& e)
    {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
