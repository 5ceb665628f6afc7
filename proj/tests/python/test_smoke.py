import json
import math
import os
import pathlib

import numpy as np
import pytest

import ness

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def chain(L, J=1.0, Delta=0.0):
    H = ness.HamiltonianSpec()
    H.family = ness.Family.XXZ
    H.L = L
    H.J = J
    H.Delta = Delta
    return H


def mag(site, gamma, eta):
    b = ness.BathSpec()
    b.statistics = ness.BathStatistics.Magnetization
    b.site = site
    b.gamma = gamma
    b.target = eta
    return b


def test_version():
    assert ness.__version__ == "0.1.0"


def test_xx_current_matches_closed_form():
    for L in (2, 3, 4):
        g = ness.build_lme(chain(L), [mag(1, 1.0, 1.0), mag(L, 1.0, -1.0)])
        rho, residual = ness.steady_state(g)
        assert residual < 1e-10
        assert abs(np.trace(rho) - 1.0) < 1e-12
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
        current = abs(ness.mean_current(g, ness.Counter(ness.CounterKind.Particle, 1)))
        assert current == pytest.approx(ness.xx_current(1.0, 1.0, 1.0, 0.0) / 2.0, rel=1e-9)


def test_liouvillian_is_sparse_and_trace_preserving():
    g = ness.build_lme(chain(3), [mag(1, 0.7, 0.4), mag(3, 0.5, -0.2)])
    Lhat = ness.liouvillian(g)
    assert Lhat.shape == (64, 64)
    dense = Lhat.toarray()
    identity = ness.vectorize(np.eye(8, dtype=complex))
    assert np.max(np.abs(identity.conj() @ dense)) < 1e-12
    values = ness.spectrum(g)
    assert np.max(values.real) < 1e-9


def test_dephasing_covariance_against_closed_form():
    H = ness.HamiltonianSpec()
    H.family = ness.Family.TightBinding
    H.L = 20
    h = ness.single_particle_matrix(H)
    a = ness.BathSpec()
    a.site, a.gamma, a.target = 1, 1.0, 1.0
    b = ness.BathSpec()
    b.site, b.gamma, b.target = 20, 1.0, 0.0
    system = ness.with_dephasing(ness.build_lyapunov(h, [a, b]), 0.5)
    C = ness.solve_covariance(system)
    j = ness.covariance_current(C, h, 1)
    assert j == pytest.approx(ness.xx_dephasing_current(1.0, 0.5, 1.0, 20, 1.0, 0.0), rel=1e-9)


def test_fit_exponent_diffusive():
    sizes = [float(L) for L in range(50, 400, 25)]
    currents = [1.0 / L for L in sizes]
    fit = ness.fit_exponent(sizes, currents)
    assert fit.alpha == pytest.approx(1.0, abs=1e-9)
    assert fit.regime == "diffusive"


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        ness.build_lme(chain(2), [mag(5, 1.0, 0.0)])
    assert issubclass(ness.ValidationError, ValueError)
    assert issubclass(ness.SolverError, RuntimeError)


def test_run_steady_config(tmp_path):
    out = ness.run("steady", str(CONFIGS / "xx_ballistic.cfg"), out_dir=str(tmp_path), write=True)
    assert "manifest.json" in out["files"]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "steady"
    assert any(math.isclose(v, 16.0 / 17.0, rel_tol=1e-9) for v in _numbers(out["results"]))


def _numbers(node):
    if isinstance(node, dict):
        for v in node.values():
            yield from _numbers(v)
    elif isinstance(node, list):
        for v in node:
            yield from _numbers(v)
    elif isinstance(node, (int, float)) and not isinstance(node, bool):
        yield float(node)
