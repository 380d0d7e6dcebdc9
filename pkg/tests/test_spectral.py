"""Core representation tests: multiplier vs singular-integral oracle,
energy identities, and the double-well shape checks."""

import math

import numpy as np
import pytest

from fracperiodic.spectral import (
    DoubleWell,
    FracOrder,
    PeriodicFunction,
    energy_functional,
    frac_laplacian,
    gagliardo_energy,
    singular_integral_oracle,
    spectral_dirichlet,
)

TWO_PI = 2.0 * math.pi


def random_function(rng, T=TWO_PI, N=8, odd=False):
    a = rng.standard_normal(N)
    b = np.concatenate([[0.0] if odd else rng.standard_normal(1), rng.standard_normal(N)])
    if odd:
        b = np.zeros(N + 1)
    return PeriodicFunction(T=T, sin_coeffs=a, cos_coeffs=b, odd=odd)


# -- FracOrder ---------------------------------------------------------------


def test_frac_order_constants():
    for s in (0.1, 0.25, 0.5, 0.75, 0.9):
        fo = FracOrder(s)
        assert abs(fo.d_s * fo.c_s - 1.0) < 1e-14  # reciprocal normalization
        assert -1.0 < fo.a < 1.0
        assert fo.a == 1.0 - 2.0 * s


def test_frac_order_rejects_endpoints():
    for bad in (0.0, 1.0, -0.3, 1.5):
        with pytest.raises(ValueError):
            FracOrder(bad)


def test_d_half_is_one():
    assert abs(FracOrder(0.5).d_s - 1.0) < 1e-15


# -- PeriodicFunction --------------------------------------------------------


def test_round_trip_grid_coefficients():
    rng = np.random.default_rng(7)
    for _ in range(10):
        u = random_function(rng, N=12)
        x = np.arange(2 * u.N + 2) * (u.T / (2 * u.N + 2))
        v = PeriodicFunction.from_samples(u.T, u(x))
        assert np.allclose(v.sin_coeffs, u.sin_coeffs, atol=1e-12)
        assert np.allclose(v.cos_coeffs, u.cos_coeffs, atol=1e-12)


def test_odd_flag_zeroes_cosines():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[1.0, 0.5], cos_coeffs=None)
    assert u.odd
    assert np.all(u.cos_coeffs == 0.0)


def test_json_round_trip():
    rng = np.random.default_rng(3)
    u = random_function(rng, T=8.0, N=5)
    v = PeriodicFunction.from_json(u.to_json())
    assert v.T == u.T
    assert np.allclose(v.sin_coeffs, u.sin_coeffs, atol=0)
    assert np.allclose(v.cos_coeffs, u.cos_coeffs, atol=0)


# -- fractional Laplacian ----------------------------------------------------


def test_multiplier_sin_x_half():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[1.0], cos_coeffs=None)
    v = frac_laplacian(u, FracOrder(0.5))
    assert abs(v.sin_coeffs[0] - 1.0) < 1e-14  # first nonzero eigenvalue is 1


def test_multiplier_constant_maps_to_zero():
    u = PeriodicFunction.constant(TWO_PI, 3.7)
    v = frac_laplacian(u, FracOrder(0.3))
    assert v.coeff_norm() == 0.0


def test_multiplier_second_mode():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[0.0, 1.0], cos_coeffs=None)
    v = frac_laplacian(u, FracOrder(0.5))
    assert abs(v.sin_coeffs[1] - 2.0) < 1e-14


def test_multiplier_generic_period_against_oracle():
    T = 5.0
    frac = FracOrder(0.4)
    u = PeriodicFunction.from_modes(T, sin_coeffs=[1.0], cos_coeffs=None)
    v = frac_laplacian(u, frac)
    expected = (2.0 * math.pi / T) ** (2 * frac.s)
    assert abs(v.sin_coeffs[0] - expected) < 1e-14
    x = 1.3
    assert abs(singular_integral_oracle(u, frac, x) - v(x)) < 1e-8


def test_oddness_closure():
    rng = np.random.default_rng(11)
    u = random_function(rng, N=6, odd=True)
    v = frac_laplacian(u, FracOrder(0.7))
    assert v.odd and np.all(v.cos_coeffs == 0.0)


def test_scaling_covariance_exact():
    # u_T(x) = u_{2pi}(2 pi x / T) pulls a factor (2 pi / T)^{2s} out front
    rng = np.random.default_rng(5)
    u = random_function(rng, N=6)
    frac = FracOrder(0.35)
    T = 11.0
    uT = u.rescaled(T)
    lhs = frac_laplacian(uT, frac)
    rhs = frac_laplacian(u, frac).rescaled(T)
    factor = (TWO_PI / T) ** (2 * frac.s)
    assert np.allclose(lhs.sin_coeffs, factor * rhs.sin_coeffs, rtol=0, atol=1e-14)
    assert np.allclose(lhs.cos_coeffs, factor * rhs.cos_coeffs, rtol=0, atol=1e-14)


# -- singular-integral oracle ------------------------------------------------


def test_oracle_sin_at_half_pi():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[1.0], cos_coeffs=None)
    assert abs(singular_integral_oracle(u, FracOrder(0.5), math.pi / 2) - 1.0) < 1e-8


def test_oracle_constant_is_zero():
    u = PeriodicFunction.constant(TWO_PI, 1.0)
    assert abs(singular_integral_oracle(u, FracOrder(0.25), 0.4)) < 1e-12


def test_oracle_cos_3x_quarter():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[], cos_coeffs=[0.0, 0.0, 0.0, 1.0])
    val = singular_integral_oracle(u, FracOrder(0.25), 0.0)
    assert abs(val - math.sqrt(3.0)) < 1e-6


def test_oracle_multiplier_equivalence_random():
    rng = np.random.default_rng(19)
    for _ in range(10):
        s = rng.uniform(0.1, 0.9)
        frac = FracOrder(s)
        u = random_function(rng, N=int(rng.integers(1, 9)))
        v = frac_laplacian(u, frac)
        xs = rng.uniform(0.0, u.T, 4)
        for x in xs:
            # roundoff in the second difference plateaus near 1e-9 for s -> 1
            assert abs(singular_integral_oracle(u, frac, x, quad_tol=1e-8) - v(x)) < 1e-6


# -- energies ----------------------------------------------------------------


def test_gagliardo_sin():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[1.0], cos_coeffs=None)
    assert abs(gagliardo_energy(u, FracOrder(0.5)) - math.pi) < 1e-7


def test_gagliardo_constant():
    u = PeriodicFunction.constant(TWO_PI, 2.0)
    assert abs(gagliardo_energy(u, FracOrder(0.5))) < 1e-12


def test_gagliardo_two_modes():
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[1.0], cos_coeffs=[0.0, 0.0, 1.0])
    assert abs(gagliardo_energy(u, FracOrder(0.5)) - 3.0 * math.pi) < 1e-6


def test_parseval_identity():
    rng = np.random.default_rng(23)
    for _ in range(5):
        frac = FracOrder(rng.uniform(0.15, 0.85))
        u = random_function(rng, N=6)
        spectral = spectral_dirichlet(u, frac)
        assert abs(gagliardo_energy(u, frac) - spectral) < 1e-9 * max(1.0, spectral)


def test_energy_functional_trivial():
    well = DoubleWell.quartic()
    T = 8.0
    u0 = PeriodicFunction.constant(T, 0.0)
    assert abs(energy_functional(u0, FracOrder(0.5), well) - well.f(0.0) * T / 2.0) < 1e-12
    u1 = PeriodicFunction.constant(T, 1.0)
    assert abs(energy_functional(u1, FracOrder(0.5), well)) < 1e-12


def test_energy_functional_against_extension_route():
    # (1/(4 d_s)) <u, Lam u> must match half the weighted extension energy
    from fracperiodic.extension import extend_bessel, extension_energy

    frac = FracOrder(0.5)
    well = DoubleWell.quartic()
    u = PeriodicFunction.from_modes(TWO_PI, sin_coeffs=[0.1], cos_coeffs=None)
    j = energy_functional(u, frac, well)
    ext = 0.5 * 0.5 * extension_energy(extend_bessel(u, frac))
    x = np.linspace(0.0, math.pi, 20001)
    pot = float(np.trapezoid(well.f(u(x)), x))
    assert abs(j - (ext + pot)) < 1e-5


# -- DoubleWell --------------------------------------------------------------


def test_quartic_shape():
    well = DoubleWell.quartic()
    assert abs(well.f(1.0)) < 1e-15 and abs(well.f(-1.0)) < 1e-15
    assert abs(well.f1(1.0)) < 1e-15 and abs(well.f1(-1.0)) < 1e-15
    grid = np.linspace(-0.999, 0.999, 201)
    assert np.all(well.f(grid) > 0.0)
    well.check_shape()


def test_quartic_derivative_values():
    well = DoubleWell.quartic()
    assert well.f2(0.0) == -1.0
    assert well.f3(0.0) == 0.0
    assert well.f4(0.0) == 6.0


def test_quartic_monotone_between_wells():
    well = DoubleWell.quartic()
    left = np.linspace(-0.99, -0.01, 100)
    right = np.linspace(0.01, 0.99, 100)
    assert np.all(np.diff(well.f(left)) >= 0.0)   # nondecreasing on (-1,0)
    assert np.all(np.diff(well.f(right)) <= 0.0)  # nonincreasing on (0,1)
