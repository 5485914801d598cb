#include "qcae/constants.hpp"
#include "qcae/harness.hpp"
#include "qcae/report_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qcae;

PYBIND11_MODULE(qcae, m)
{
    m.doc() = "QCA coherence-vector simulator with per-cell energy accounting";

    py::class_<CellRole>(m, "CellRole")
        .def_static("parse", &CellRole::parse)
        .def_readonly("label", &CellRole::label)
        .def_readonly("polarization", &CellRole::polarization)
        .def_property_readonly("is_input", &CellRole::is_input)
        .def_property_readonly("is_output", &CellRole::is_output)
        .def_property_readonly("is_fixed", &CellRole::is_fixed)
        .def("__str__", &CellRole::to_string)
        .def("__repr__", [](const CellRole& r) { return "CellRole('" + r.to_string() + "')"; });

    py::class_<Cell>(m, "Cell")
        .def(py::init([](int id, double x, double y, int layer, int zone, const std::string& role) {
                 return Cell{id, x, y, layer, zone, CellRole::parse(role)};
             }),
             py::arg("id"), py::arg("x"), py::arg("y"), py::arg("layer") = 0, py::arg("zone") = 0,
             py::arg("role") = "normal")
        .def_readwrite("id", &Cell::id)
        .def_readwrite("x", &Cell::x)
        .def_readwrite("y", &Cell::y)
        .def_readwrite("layer", &Cell::layer)
        .def_readwrite("clock_zone", &Cell::clock_zone)
        .def_readonly("role", &Cell::role);

    py::class_<Layout>(m, "Layout")
        .def_readonly("name", &Layout::name)
        .def_readonly("cells", &Layout::cells)
        .def_readonly("reconstruction", &Layout::reconstruction)
        .def_property_readonly("logic",
                               [](const Layout& l) -> std::optional<std::string> {
                                   if (!l.expected_logic)
                                   {
                                       return std::nullopt;
                                   }
                                   return l.expected_logic->to_string();
                               })
        .def("input_labels", &Layout::input_labels)
        .def("output_labels", &Layout::output_labels)
        .def("__eq__", [](const Layout& a, const Layout& b) { return a == b; })
        .def("__len__", [](const Layout& l) { return l.cells.size(); });

    py::class_<TechnologyParams>(m, "TechnologyParams")
        .def(py::init<>())
        .def_readwrite("cell_distance", &TechnologyParams::cell_distance)
        .def_readwrite("layer_distance", &TechnologyParams::layer_distance)
        .def_readwrite("tau", &TechnologyParams::tau)
        .def_readwrite("gamma_high", &TechnologyParams::gamma_high)
        .def_readwrite("gamma_low", &TechnologyParams::gamma_low)
        .def_readwrite("epsilon_r", &TechnologyParams::epsilon_r)
        .def_readwrite("temperature", &TechnologyParams::temperature)
        .def_readwrite("r_effect", &TechnologyParams::r_effect);

    py::enum_<ClockShape>(m, "ClockShape").value("ramp", ClockShape::Ramp).value("gaussian", ClockShape::Gaussian);
    py::enum_<Integrator>(m, "Integrator").value("euler", Integrator::Euler).value("rk2", Integrator::RK2);

    py::class_<ClockConfig>(m, "ClockConfig")
        .def(py::init<>())
        .def_readwrite("gamma_high", &ClockConfig::gamma_high)
        .def_readwrite("gamma_low", &ClockConfig::gamma_low)
        .def_readwrite("slope_time", &ClockConfig::slope_time)
        .def_readwrite("plateau_time", &ClockConfig::plateau_time)
        .def_readwrite("shape", &ClockConfig::shape)
        .def_property_readonly("cycle_time", &ClockConfig::cycle_time);

    py::class_<SimulationParams>(m, "SimulationParams")
        .def(py::init<>())
        .def_readwrite("t_step", &SimulationParams::t_step)
        .def_readwrite("integrator", &SimulationParams::integrator);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("tech", &RunConfig::tech)
        .def_readwrite("clock", &RunConfig::clock)
        .def_readwrite("sim", &RunConfig::sim)
        .def_readwrite("buffers", &RunConfig::buffers)
        .def_readwrite("cycles", &RunConfig::cycles)
        .def_readwrite("jobs", &RunConfig::jobs);

    py::class_<DecodedBit>(m, "DecodedBit")
        .def_readonly("value", &DecodedBit::value)
        .def_readonly("lambda_z", &DecodedBit::lambda_z)
        .def_readonly("weak", &DecodedBit::weak)
        .def_readonly("undecidable", &DecodedBit::undecidable);

    py::class_<CombinationResult>(m, "CombinationResult")
        .def_readonly("inputs", &CombinationResult::inputs)
        .def_readonly("outputs", &CombinationResult::outputs)
        .def_readonly("expected", &CombinationResult::expected)
        .def_readonly("logic_ok", &CombinationResult::logic_ok)
        .def_readonly("error", &CombinationResult::error)
        .def_property_readonly("bits", [](const CombinationResult& c) { return c.energy.inputs; })
        .def_property_readonly("dissipated_J", [](const CombinationResult& c) { return c.energy.sum_dissipated; })
        .def_property_readonly("to_clock_J", [](const CombinationResult& c) { return c.energy.sum_to_clock; })
        .def_property_readonly("from_neighbors_J",
                               [](const CombinationResult& c) { return c.energy.sum_from_neighbors; })
        .def_property_readonly("epsilon_env", [](const CombinationResult& c) { return c.energy.epsilon_env; })
        .def_property_readonly("below_landauer", [](const CombinationResult& c) { return c.energy.below_landauer; })
        .def_property_readonly("cell_dissipated_J", [](const CombinationResult& c) {
            std::map<int, double> out;
            for (const auto& row : c.energy.cells)
            {
                out[row.cell_id] = row.sums.dissipated();
            }
            return out;
        });

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("circuit", &EnergyReport::circuit)
        .def_readonly("cycles", &EnergyReport::cycles)
        .def_readonly("measured_cycle", &EnergyReport::measured_cycle)
        .def_readonly("landauer_limit", &EnergyReport::landauer_limit)
        .def_readonly("combinations", &EnergyReport::combinations)
        .def("logic_correct", &EnergyReport::logic_correct)
        .def("below_limit", &EnergyReport::below_limit)
        .def("text", [](const EnergyReport& r) { return report_text(r); })
        .def("json", [](const EnergyReport& r) { return report_json(r); })
        .def("csv", [](const EnergyReport& r) { return report_csv(r); });

    m.def("builtin_circuit_names", &builtin_circuit_names);
    m.def("builtin_circuit", [](const std::string& name) { return builtin_circuit(name); }, py::arg("name"));
    m.def("parse_layout", [](const std::string& text) { return parse_layout(text); }, py::arg("text"));
    m.def("serialize_layout", &serialize_layout, py::arg("layout"));
    m.def("kink_energy", &kink_energy, py::arg("a"), py::arg("b"), py::arg("tech") = TechnologyParams{},
          "U(opposite) - U(same) between two cells, J");
    m.def("landauer_limit", &landauer_limit, py::arg("temperature") = 1.0);
    m.def("to_mev", &constants::to_mev, py::arg("joules"));
    m.def(
        "run_truth_table",
        [](const Layout& layout, const RunConfig& config, std::optional<std::vector<std::size_t>> only) {
            py::gil_scoped_release release;
            return run_truth_table(layout, config, only);
        },
        py::arg("layout"), py::arg("config") = RunConfig{}, py::arg("only") = std::nullopt);

    py::register_exception<LayoutError>(m, "LayoutError", PyExc_ValueError);
    py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);
}
