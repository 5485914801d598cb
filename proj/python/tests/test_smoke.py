import math

import pytest

import qcae


def fast_config():
    c = qcae.RunConfig()
    c.clock.slope_time = 10e-12
    c.clock.plateau_time = 10e-12
    c.sim.t_step = 1e-16
    c.jobs = 1
    return c


def test_builtins_round_trip():
    names = qcae.builtin_circuit_names()
    assert "half_adder_rev" in names
    for name in names:
        layout = qcae.builtin_circuit(name)
        assert qcae.parse_layout(qcae.serialize_layout(layout)) == layout
        assert layout.logic is not None


def test_unknown_circuit():
    with pytest.raises(ValueError):
        qcae.builtin_circuit("nope")


def test_parse_error():
    with pytest.raises(ValueError):
        qcae.parse_layout("name=x\n")


def test_landauer():
    assert math.isclose(qcae.to_mev(qcae.landauer_limit(1.0)), 0.0597, rel_tol=1e-3)


def test_kink_signs():
    a = qcae.Cell(0, 0.0, 0.0)
    assert qcae.kink_energy(a, qcae.Cell(1, 20.0, 0.0)) > 0
    assert qcae.kink_energy(a, qcae.Cell(1, 20.0, 20.0)) < 0
    assert qcae.kink_energy(a, qcae.Cell(1, 0.0, 0.0, layer=1)) < 0


def test_wire_truth_table():
    report = qcae.run_truth_table(qcae.builtin_circuit("wire8"), fast_config())
    assert report.logic_correct() == 2
    for c in report.combinations:
        assert c.error is None
        assert c.outputs["out"].value == c.inputs["in"]
        assert c.dissipated_J > 0
    assert '"circuit": "wire8"' in report.json()
