import math

import numpy as np
import pytest

import loopgerbe as lg


def grid(n):
    return 2 * math.pi * np.arange(n) / n


def test_exp_of_diagonal_generator():
    x = np.diag([1j, -1j])
    assert np.allclose(lg.exp(x, math.pi), -np.eye(2), atol=1e-12)
    assert lg.inner(x, x) == pytest.approx(2.0, abs=1e-14)


def test_basis_is_orthonormal():
    for group, dim in (("su2", 3), ("su3", 8)):
        e = lg.basis(group)
        assert len(e) == dim
        gram = np.array([[lg.inner(a, b) for b in e] for a in e])
        assert np.allclose(gram, np.eye(dim), atol=1e-14)


def test_R_and_alpha_oracles():
    e1 = lg.basis()[0]
    t = grid(32)
    x = [math.sin(s) * e1 for s in t]
    y = [math.cos(s) * e1 for s in t]
    h = [lg.exp(e1, math.sin(s)) for s in t]
    assert abs(lg.eval_R(x, y) - (-0.5j)) < 1e-13
    assert abs(lg.eval_alpha(h, y) - 0.5j) < 1e-13
    assert abs(lg.gomi_cocycle_Z(h, y) - (-0.5j)) < 1e-13


def test_omega3():
    e = lg.basis()
    expected = -6 * math.sqrt(2) / (48 * math.pi**2)
    assert lg.omega3(np.eye(2), *e) == pytest.approx(expected, rel=1e-13)
    assert lg.omega3_volume() == pytest.approx(1.0, abs=1e-3)


def test_rejects_non_algebra_input():
    with pytest.raises(lg.DomainError):
        lg.inner(np.eye(2), np.eye(2))


def test_splitmix64_reference():
    assert lg.splitmix64(0) == 0xE220A8397B1DCDAF


def test_run_report():
    report = lg.run({"scenario": "path-fibration", "timing": False})
    assert report["version"] == lg.REPORT_VERSION
    assert set(report) == {"version", "config", "checks", "convergence"}
    assert all(row["pass"] for row in report["checks"])
    tags = lg.equation_registry()
    assert all(row["paper_ref"] in tags for row in report["checks"])
    assert report == lg.run({"scenario": "path-fibration", "timing": False})


def test_usage_errors():
    with pytest.raises(lg.UsageError):
        lg.run({"ntheta": 15})
    with pytest.raises(lg.UsageError):
        lg.run_check("no.such.check")
    assert lg.run_check("ext.gomi_example") < 1e-12
