import math

import pytest

import spt


def test_fig1b_boundary():
    model = spt.dicke([0.0, 0.6], [0.5, 0.5])
    b = spt.parameter_boundary(model, "gamma[0]", 0.0, 1.0)
    assert abs(b["critical_t"] - 0.6245) < 1e-3
    assert b["order"] == "first"


def test_minimize_rabi_stark_hubbard():
    r = spt.minimize(spt.rabi_stark_hubbard(0.9, 0.2, 0.1))
    assert r["order_parameter"] == pytest.approx(0.081951315342849353, rel=1e-9)
    assert r["z_min"]["v"] == [0.0]
    assert len(r["degenerate_minima"]) == 2


def test_potential_and_gradient_at_origin():
    model = spt.anisotropic_rabi_stark(0.8, 0.6, 0.36)
    assert spt.potential(model, [0.0], [0.0]) == -0.5
    assert spt.gradient(model, [0.0], [0.0]) == [0.0, 0.0]
    assert model.coupling_vector == pytest.approx([0.8, 0.6, 0.6])
    assert model.family == "anisotropic_rabi_stark"


def test_classify_and_sweep():
    assert spt.classify(spt.anisotropic_rabi_stark(0.9, 0.6, 0.36))["phase"] == "SP_u"
    assert spt.classify(spt.rabi_stark_hubbard(0.0, 0.65, 0.36))["phase"] == "unstable"
    rows = spt.sweep(spt.rabi_stark_hubbard(0.0, 0.0, 0.36), [("gamma", 0.0, 1.0, 3), ("j_tilde", 0.0, 0.6, 2)])
    assert [r["axis_values"] for r in rows][:2] == [[0.0, 0.0], [0.0, 0.6]]
    assert rows[-1]["phase"] == "SP"
    assert spt.sweep(spt.rabi_stark_hubbard(0.0), [("gamma", 0.0, 1.0, 0)]) == []


def test_radial_boundary():
    b = spt.radial_boundary(spt.dicke([0.0, 0.0]), [1.0, 1.0, 0.0, 0.0], 4.0)
    assert b["critical_magnitude"] == pytest.approx(1.0, abs=1e-7)
    assert b["order"] == "second"


def test_ed_decoupled():
    r = spt.ed_solve(spt.anisotropic_rabi_stark(0.0, 0.0, 0.0), [10.0], [8], 2)
    assert r["energies"][0] == pytest.approx(-0.5)
    assert r["energies"][1] == pytest.approx(-0.4)
    assert r["method"] == "dense"
    assert abs(r["parity"][0]) == pytest.approx(1.0)


def test_critical_hopping_pin():
    r = spt.critical_hopping(0.0, 0.0, 100.0, 20)
    assert r["j_tilde_critical"] == pytest.approx(1.0, abs=1e-12)
    assert spt.critical_hopping(0.0, 0.36, 100.0, 20)["j_tilde_critical"] == pytest.approx(0.64, abs=1e-12)


def test_errors_map_to_exceptions():
    with pytest.raises(spt.UnstableModel):
        spt.minimize(spt.rabi_stark_hubbard(0.3, 0.65, 0.36))
    with pytest.raises(spt.DomainError):
        spt.rabi_stark_hubbard(0.3, -0.1, 0.0)
    with pytest.raises(spt.ConfigError):
        spt.rabi_stark_hubbard(0.3).with_parameter("gamma1", 0.2)
    assert issubclass(spt.DomainError, spt.Error)


def test_finite_temperature_limit():
    cold = spt.rabi_stark_hubbard(1.1, 0.0, 0.2)
    hot = spt.rabi_stark_hubbard(1.1, 0.0, 0.2, beta_omega=1e4)
    assert spt.minimize(hot)["order_parameter"] == pytest.approx(spt.minimize(cold)["order_parameter"], rel=1e-6)
    assert math.isfinite(spt.minimize(spt.rabi_stark_hubbard(1.1, 0.0, 0.2, beta_omega=0.5))["phi_min"])
