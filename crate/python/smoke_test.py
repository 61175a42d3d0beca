"""Smoke test for the dhydro_py extension. Runs under pytest or as a script."""

import math

import dhydro_py as dh


def test_hydrogen_ground_state():
    problem = dh.RadialProblem(dh.PotentialModel(3, family="newtonian"), l=0)
    states = dh.solve_states(problem, n_states=2)
    assert len(states) == 2
    assert abs(states[0].energy + 0.5) < 1e-6
    assert abs(states[1].energy + 0.125) < 1e-6
    assert [s.node_count for s in states] == [0, 1]
    h = states[0].grid.spacing
    assert abs(h * sum(u * u for u in states[0].wavefunction) - 1.0) < 1e-12
    assert len(states[0].r) == len(states[0].wavefunction)


def test_potentials():
    assert dh.PotentialModel(2).energy(1.0) == 0.0
    assert abs(dh.PotentialModel(3).energy(2.0) + 0.5) < 1e-15
    solid = dh.PotentialModel(4, convention="solid-angle")
    assert abs(solid.energy(1.0) + 0.5) < 1e-15
    gauss = dh.PotentialModel(2)
    assert abs(gauss.enclosed_flux(10.0) - 4 * math.pi) < 1e-12
    assert gauss.poisson_residual([1.0, 2.0, 5.0]) < 1e-5


def test_oracles():
    assert dh.analytic_energy_newtonian(2, 0, 0) == -2.0
    assert abs(dh.analytic_energy_airy_1d(1, convention="solid-angle") - 1.8557571) < 1e-6
    assert abs(dh.sphere_surface_area(3) - 4 * math.pi) < 1e-14
    assert dh.centrifugal_coefficient(1, 3) == 1.0


def test_stability_and_collapse():
    problem = dh.RadialProblem(dh.PotentialModel(5), l=0)
    assert problem.stability()["kind"] == "Supercritical"
    assert dh.collapse_diagnostic(problem)["classification"] == "Collapse"
    try:
        dh.solve_states(problem)
    except ValueError as err:
        assert "upercritical" in str(err)
    else:
        raise AssertionError("supercritical channel was solved")


def test_large_d_scan():
    rows = dh.classical_limit_scan([6, 10])
    for row, d in zip(rows, [6, 10]):
        assert row["classification"] == "Stable"
        assert abs(row["ratio"] - (d - 3) / (d - 1)) < 1e-3


def test_bad_arguments():
    for bad in (lambda: dh.PotentialModel(3, family="martian"), lambda: dh.GridSpec(1.0, 0.5, 10)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("accepted invalid input")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
