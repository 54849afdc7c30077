"""Potential variants and the straight-line averaged potential."""

import numpy as np
import pytest
from scipy.integrate import quad

from bohmflow.potentials import AveragedPotential, Free, Harmonic, Quartic, Tabulated


def test_free_is_zero():
    v = Free()
    x = np.linspace(-3, 3, 7)
    assert np.all(v.value(x) == 0.0)
    assert np.all(v.gradient(x) == 0.0)
    assert v.is_quadratic()


def test_harmonic_value_and_gradient():
    v = Harmonic(mass=2.0, omega=3.0)
    assert v.value(1.5) == pytest.approx(0.5 * 2.0 * 9.0 * 1.5**2)
    assert v.gradient(1.5) == pytest.approx(2.0 * 9.0 * 1.5)
    assert v.is_quadratic()
    with pytest.raises(ValueError):
        Harmonic(mass=-1.0)


def test_quartic_value_and_gradient():
    v = Quartic(c=0.1)
    assert v.value(2.0) == pytest.approx(1.6)
    assert v.gradient(2.0) == pytest.approx(3.2)
    assert not v.is_quadratic()


def test_total_sums_over_dof():
    v = Harmonic()
    assert v.total([1.0, 2.0]) == pytest.approx(0.5 * (1.0 + 4.0))


def test_tabulated_reproduces_polynomial():
    # cubic spline through x^2 samples is exactly x^2 on the interior
    nodes = np.linspace(-2.0, 2.0, 25)
    v = Tabulated(nodes, nodes**2)
    x = np.linspace(-1.9, 1.9, 50)
    np.testing.assert_allclose(v.value(x), x**2, atol=1e-10)
    np.testing.assert_allclose(v.gradient(x), 2.0 * x, atol=1e-9)


def test_tabulated_domain_error():
    v = Tabulated([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 4.0, 9.0])
    with pytest.raises(ValueError, match="outside its domain"):
        v.value(3.5)
    with pytest.raises(ValueError, match="outside its domain"):
        v.gradient(-0.1)


def test_tabulated_validation():
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0, 2.0], [0.0, 1.0, 4.0])  # too few nodes
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0, 1.0, 2.0], [0.0, 1.0, 1.0, 4.0])  # not increasing
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 4.0])  # shape mismatch


# -- averaged potential ------------------------------------------------


def test_averaged_harmonic_closed_form_values():
    # Vbar(x, x0) = (m w^2 / 6)(x^2 + x x0 + x0^2)
    vbar = AveragedPotential(Harmonic(mass=1.0, omega=1.0))
    assert vbar.value(1.0, 1.0) == pytest.approx(0.5, abs=1e-14)
    assert vbar.value(1.0, -1.0) == pytest.approx(1.0 / 6.0, abs=1e-14)
    assert vbar.gradient_x(2.0, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-14)


def test_averaged_harmonic_matches_closed_form_everywhere():
    rng = np.random.default_rng(2)
    m, w = 1.3, 0.7
    vbar = AveragedPotential(Harmonic(mass=m, omega=w))
    for _ in range(25):
        x, x0 = rng.normal(scale=2.0, size=2)
        expect = m * w**2 / 6.0 * (x**2 + x * x0 + x0**2)
        assert vbar.value(x, x0) == pytest.approx(expect, abs=1e-12)


def test_averaged_quartic_closed_form_and_quad_reference():
    c = 0.4
    vbar = AveragedPotential(Quartic(c=c))
    x, x0 = 1.5, -0.5
    # integral of c (tau x + (1-tau) x0)^4 dtau has the symmetric closed form
    expect = c * (x**4 + x**3 * x0 + x**2 * x0**2 + x * x0**3 + x0**4) / 5.0
    assert vbar.value(x, x0) == pytest.approx(expect, rel=1e-13)
    ref, _ = quad(lambda tau: c * (tau * x + (1 - tau) * x0) ** 4, 0.0, 1.0)
    assert vbar.value(x, x0) == pytest.approx(ref, rel=1e-12)


def test_averaged_coincidence_and_half_gradient():
    rng = np.random.default_rng(3)
    variants = [
        Harmonic(mass=1.0, omega=2.0),
        Quartic(c=0.3),
        Tabulated(np.linspace(-5, 5, 60), np.sin(np.linspace(-5, 5, 60))),
    ]
    for v in variants:
        vbar = AveragedPotential(v)
        for x in rng.uniform(-2.0, 2.0, size=10):
            # Vbar(x, x) = V(x)
            assert vbar.value(x, x) == pytest.approx(float(v.value(x)), abs=1e-10)
            # the tau-weighting halves the gradient at coincidence
            assert vbar.gradient_x(x, x) == pytest.approx(
                0.5 * float(v.gradient(x)), abs=1e-10
            )


def test_averaged_broadcasts_to_matrices():
    vbar = AveragedPotential(Harmonic())
    x = np.linspace(-1, 1, 5)
    mat = vbar.value(x[:, None], x[None, :])
    assert mat.shape == (5, 5)
    expect = (x[:, None] ** 2 + x[:, None] * x[None, :] + x[None, :] ** 2) / 6.0
    np.testing.assert_allclose(mat, expect, atol=1e-13)


def test_averaged_node_count_floor():
    with pytest.raises(ValueError):
        AveragedPotential(Free(), n_nodes=4)


def test_averaged_segment_leaving_tabulated_domain():
    v = Tabulated([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 4.0, 9.0])
    vbar = AveragedPotential(v)
    assert vbar.value(1.0, 2.0) > 0.0  # inside is fine
    with pytest.raises(ValueError, match="outside its domain"):
        vbar.value(1.0, 4.0)  # segment endpoint exits the table
