import numpy as np
import pytest

import bcm


def test_catalog_medium():
    m = bcm.medium("gl_rational")
    assert m.q_at(1.0) == pytest.approx(3.0)
    assert m.x.shape == m.q.shape


def test_kernel_and_admissibility():
    k = bcm.extract_kernel(bcm.medium("gl_rational"), "dirichlet", T=1.0, n=128)
    assert k.system == "dirichlet"
    assert k.r.shape == (257,)
    assert bcm.admissibility(k)["admissible"]
    bad = bcm.admissibility(bcm.shift_kernel(k, -10.0))
    assert not bad["admissible"]
    assert "negative pivot" in bad["reason"]


def test_gl_inversion():
    k = bcm.extract_kernel(bcm.medium("gl_rational"), "dirichlet", n=256)
    rep = bcm.invert("gl", k)
    x, q = rep["x"], rep["values"]
    inner = (x > 0.05) & (x < 0.95)
    assert np.max(np.abs(q[inner] - 6.0 / (1.0 + x[inner] ** 2))) < 0.02 * 6.0


def test_inadmissible_data_raises():
    k = bcm.shift_kernel(bcm.extract_kernel(bcm.medium("gl_rational"), n=128), -10.0)
    with pytest.raises(bcm.InadmissibleData):
        bcm.invert("gl", k)


def test_roundtrip_report():
    rep = bcm.roundtrip(bcm.medium("krein_exp"), "krein", ladder=[128, 256])
    assert rep["quantity"] == "rho"
    assert rep["sup_rel_error"] < 1e-3
    assert len(rep["orders"]) == 1


def test_classical_krein_unit():
    k = bcm.extract_kernel(bcm.medium("unit"), "neumann", n=64)
    t, g = bcm.classical("krein", k, 0.5)
    assert t[0] == pytest.approx(-0.5)
    assert np.allclose(g, 1.0, atol=1e-6)


def test_forward_and_eigen_target():
    x, u = bcm.forward_state(bcm.medium("unit"), n=128, seed=3)
    assert x.shape == u.shape
    assert np.all(np.isfinite(u))
    k = bcm.extract_kernel(bcm.medium("unit"), n=64)
    t, f = bcm.eigen_target(k, 4.0)
    assert np.allclose(f, np.sin(2.0 * (1.0 - t)) / 2.0, atol=1e-6)


def test_usage_errors():
    with pytest.raises(ValueError):
        bcm.medium("no_such_medium")
    with pytest.raises(ValueError):
        bcm.invert("abel", bcm.extract_kernel(bcm.medium("unit"), n=64))
