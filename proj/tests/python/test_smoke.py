import numpy as np
import pytest

import doublesim as ds

H_PI2 = [{"letters": ["J", "J"], "part": "Re", "coeff": -0.5}, {"letters": ["J", "J", "J"], "part": "Im", "coeff": 0.3}]


def test_iwasawa_factors_reconstruct():
    rng = np.random.default_rng(1)
    k = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    f = ds.iwasawa(k)
    assert np.allclose(f["gL"] @ np.linalg.inv(f["bR"]), k, atol=1e-10)
    assert np.allclose(f["bL"] @ np.linalg.inv(f["gR"]), k, atol=1e-10)
    assert np.allclose(f["gL"].conj().T @ f["gL"], np.eye(3), atol=1e-12)
    assert np.allclose(np.tril(f["bR"], -1), 0)
    assert np.all(np.diag(f["bR"]).real > 0)


def test_zero_time_simulation_returns_start():
    p = ds.random_point("cotangent", n=2, seed=3)
    tr = ds.simulate("cotangent", H_PI2, p, t_max=0.0)
    assert len(tr["samples"]) == 1
    assert tr["samples"][0]["point"] == p


def test_reduced_run_conserves_spectral_invariants():
    tr = ds.simulate("red_cot_1", H_PI2, n=3, seed=2, t_max=0.2, dt=1e-3, stride=50)
    assert tr["completed"] and tr["form"] == "reduced"
    rep = ds.invariants(tr)
    assert rep["hamiltonian_drift"] < 1e-9
    for entry in rep["conserved"].values():
        if entry.get("expected_constant"):
            assert entry["max_spectral_drift"] < 1e-8


def test_bracket_antisymmetric():
    out = ds.bracket("pb_cotangent", {"letters": ["J", "J"]}, {"letters": ["g"]}, n=2, seed=4)
    assert out["residuals"]["antisymmetry"] < 1e-10
    assert out["residuals"]["finite_difference"] < 1e-6


def test_verify_suite_passes_and_is_deterministic():
    a = ds.verify("rmatrix", 7)
    assert a["pass"]
    assert a == ds.verify("rmatrix", 7)
    assert set(ds.suite_names()) >= {"cxmat", "rmatrix", "conserved"}


def test_bad_input_raises():
    with pytest.raises(ds.DsimError):
        ds.simulate("nowhere", H_PI2)
    with pytest.raises(ds.DsimError):
        ds.simulate("red_cot_1", H_PI2, form="unreduced")


def test_matrix_helpers_roundtrip():
    a = np.array([[1 + 2j, 0.5], [-1j, 3]])
    assert np.allclose(ds.to_matrix(ds.from_matrix(a)), a)
