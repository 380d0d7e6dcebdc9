"""Two independent constructions of the degenerate-elliptic harmonic
extension U(x,y) of a periodic trace, its Dirichlet-to-Neumann map, and
the y^a-weighted Dirichlet energy.

Bessel route: each Fourier mode of the trace is damped in y by the
universal profile

    phi(t) = mu t^s K_s(t),  t = (2 pi m / T) y,  phi(0) = 1,

with K_s the second modified Bessel function.  Poisson route: convolution
with the s-Poisson kernel folded over all periodic images.  The two agree
and cross-certify each other; the Bessel route additionally exposes
analytic x/y derivatives for the diagnostics module.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, kv, roots_jacobi, zeta

from .errors import ExtrapolationDivergence, TailNotConverged
from .spectral import FracOrder, PeriodicFunction, frac_laplacian

__all__ = [
    "BesselProfile",
    "ExtensionField",
    "YQuadrature",
    "extend_bessel",
    "extend_poisson",
    "dirichlet_to_neumann",
    "extension_energy",
    "poisson_kernel_periodized",
]

_SERIES_SWITCH = 2.0   # series below, scipy.special.kv above
_SERIES_TERMS = 30
_OVERFLOW_ARG = 700.0  # K_s underflows; profile clamped to 0 beyond


class _Profile:
    """Universal mode profile phi_s(t) = mu t^s K_s(t) and derivatives.

    Small arguments use the power series in t^{2j} and t^{2s+2j} (no
    cancellation); large arguments use kv directly.
    """

    def __init__(self, s):
        self.s = s
        j = np.arange(_SERIES_TERMS)
        self.alpha = gamma(1 - s) * 0.25**j / (np.cumprod(np.concatenate(([1.0], j[1:]))) * gamma(j + 1 - s))
        self.beta = -gamma(1 - s) * 2.0 ** (-2 * s) * 0.25**j / (
            np.cumprod(np.concatenate(([1.0], j[1:]))) * gamma(j + 1 + s)
        )
        self.mu = 2.0 ** (1 - s) * gamma(1 - s) * math.sin(s * math.pi) / math.pi

    def _series(self, t):
        s = self.s
        j = np.arange(_SERIES_TERMS)
        t = np.asarray(t, dtype=float)[..., None]
        with np.errstate(divide="ignore", invalid="ignore"):
            ta = np.where(t > 0, t, 1.0) ** (2.0 * j)
            tb = np.where(t > 0, t, 1.0) ** (2.0 * s + 2.0 * j)
        out = ta @ self.alpha + np.where(t[..., 0] > 0, tb @ self.beta, 0.0)
        zero = t[..., 0] == 0
        if np.any(zero):
            out = np.where(zero, 1.0, out)
        return out

    def value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        small = t < _SERIES_SWITCH
        big = ~small & (t <= _OVERFLOW_ARG)
        out[small] = self._series(t[small])
        ts = t[big]
        out[big] = self.mu * ts**self.s * kv(self.s, ts)
        out[t > _OVERFLOW_ARG] = 0.0
        return out

    def deriv(self, t):
        """phi'(t); singular like t^{2s-1} at 0 for s < 1/2."""
        s = self.s
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        small = (t < _SERIES_SWITCH) & (t > 0)
        big = ~small & (t <= _OVERFLOW_ARG) & (t > 0)
        j = np.arange(_SERIES_TERMS)
        ts = t[small][:, None]
        da = (ts ** (2 * j[1:] - 1)) @ (2 * j[1:] * self.alpha[1:])
        db = (ts ** (2 * s + 2 * j - 1)) @ ((2 * s + 2 * j) * self.beta)
        out[small] = da + db
        tb = t[big]
        kprime = -0.5 * (kv(s - 1, tb) + kv(s + 1, tb))
        out[big] = self.mu * (s * tb ** (s - 1) * kv(s, tb) + tb**s * kprime)
        out[t > _OVERFLOW_ARG] = 0.0
        out[t == 0] = np.inf if s < 0.5 else (0.0 if s > 0.5 else -1.0)
        if s == 0.5:
            out[t == 0] = -1.0
        return out

    def weighted_deriv(self, t):
        """psi(t) = t^{1-2s} phi'(t); psi(0) = -C_s = -(2s/4^s) Gamma(1-s)/Gamma(1+s)."""
        s = self.s
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        small = (t < _SERIES_SWITCH) & (t > 0)
        big = ~small & (t > 0)
        j = np.arange(_SERIES_TERMS)
        ts = t[small][:, None]
        da = (ts ** (2 * (j[1:] - s))) @ (2 * j[1:] * self.alpha[1:])
        db = (ts ** (2 * j)) @ ((2 * s + 2 * j) * self.beta)
        out[small] = da + db
        out[big] = t[big] ** (1 - 2 * s) * self.deriv(t[big])
        out[t == 0] = 2 * s * self.beta[0]
        return out


@dataclass(frozen=True)
class BesselProfile:
    """Mode profile J(y) = mu y^s K_s(omega y), normalized so J(0) = 1."""

    omega: float
    frac: FracOrder
    _phi: _Profile = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_phi", _Profile(self.frac.s))

    @property
    def mu(self):
        return self._phi.mu * self.omega**self.frac.s

    def value(self, y):
        return self._phi.value(self.omega * np.asarray(y, dtype=float))

    def deriv(self, y):
        return self.omega * self._phi.deriv(self.omega * np.asarray(y, dtype=float))

    def weighted_deriv(self, y):
        """y^a J'(y); tends to -C_s omega^{2s} as y -> 0."""
        return self.omega ** (2 * self.frac.s) * self._phi.weighted_deriv(
            self.omega * np.asarray(y, dtype=float)
        )


@dataclass(frozen=True)
class YQuadrature:
    """Gauss-Jacobi rules on (0, y_max) for the weights y^a and y^{-a}."""

    y_max: float
    a: float
    n: int = 128
    nodes_plus: np.ndarray = field(init=False, repr=False)
    weights_plus: np.ndarray = field(init=False, repr=False)
    nodes_minus: np.ndarray = field(init=False, repr=False)
    weights_minus: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        for sign, nm in ((+1.0, "plus"), (-1.0, "minus")):
            beta = sign * self.a
            t, w = roots_jacobi(self.n, 0.0, beta)
            y = self.y_max * (t + 1.0) / 2.0
            wy = w * (self.y_max / 2.0) ** (beta + 1.0)
            y.flags.writeable = False
            wy.flags.writeable = False
            object.__setattr__(self, f"nodes_{nm}", y)
            object.__setattr__(self, f"weights_{nm}", wy)

    def scaled(self, y_max):
        return YQuadrature(y_max=y_max, a=self.a, n=self.n)


# ---------------------------------------------------------------------------
# periodized Poisson kernel

_MAX_BINOMIAL_TERMS = 60


def poisson_kernel_periodized(z, y, frac: FracOrder, T):
    """sum_j p_s(z + jT, y): the s-Poisson kernel folded over all images.

    Near images are summed directly; the two one-sided tails are expanded
    binomially in (y/|z+jT|)^2 and summed in closed form with Hurwitz zeta,
    which is exact to machine precision.
    """
    s = frac.s
    p = (1.0 + 2.0 * s) / 2.0
    z = np.asarray(z, dtype=float)
    zr = np.mod(z + T / 2.0, T) - T / 2.0
    jc = 8 + int(math.ceil(3.0 * abs(y) / T))
    j = np.arange(-jc, jc + 1)
    direct = np.sum(((zr[..., None] + j * T) ** 2 + y * y) ** (-p), axis=-1)

    # tails j > jc and j < -jc
    tail = np.zeros_like(zr)
    coeff = 1.0
    ypow = 1.0
    for i in range(_MAX_BINOMIAL_TERMS):
        q = 2.0 * p + 2.0 * i
        term = coeff * ypow * T ** (-q) * (
            zeta(q, jc + 1.0 + zr / T) + zeta(q, jc + 1.0 - zr / T)
        )
        tail += term
        if np.max(np.abs(term)) < 1e-18 * max(np.max(direct), 1e-300):
            break
        coeff *= -(p + i) / (i + 1.0)
        ypow *= y * y
    return frac.c_poisson * abs(y) ** (2.0 * s) * (direct + tail)


# ---------------------------------------------------------------------------
# extension fields


@dataclass(frozen=True)
class ExtensionField:
    """Evaluable extension of a periodic trace on the half-strip.

    ``method`` is "bessel-series" or "poisson-convolution".  Both expose
    ``value``; the Bessel field additionally exposes analytic derivatives
    ``dx``, ``dy`` and the stable weighted derivative ``weighted_dy``
    (= y^a dU/dy, finite down to y = 0).
    """

    base: PeriodicFunction
    frac: FracOrder
    method: str
    y_max: float
    quadrature: YQuadrature
    profiles: tuple = ()

    # -- evaluation --------------------------------------------------------

    def _modal(self, x, y, mode_fn):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = self.base
        if u.N == 0:
            return np.zeros(np.broadcast(x, y).shape)
        m = np.arange(1, u.N + 1)
        phase = np.multiply.outer(x, m) * u.omega
        damp = np.stack([mode_fn(p, y) for p in self.profiles], axis=-1)
        sin_part = (np.sin(phase) * damp) @ u.sin_coeffs
        cos_part = (np.cos(phase) * damp) @ u.cos_coeffs[1:]
        return sin_part + cos_part

    def value(self, x, y):
        if self.method == "poisson-convolution":
            return self._poisson_value(x, y)
        out = self.base.cos_coeffs[0] + self._modal(x, y, lambda p, y: p.value(y))
        return out

    def dx(self, x, y):
        self._require_bessel()
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = self.base
        if u.N == 0:
            return np.zeros(np.broadcast(x, y).shape)
        m = np.arange(1, u.N + 1)
        phase = np.multiply.outer(x, m) * u.omega
        damp = np.stack([p.value(y) for p in self.profiles], axis=-1)
        om = u.omega * m
        return (np.cos(phase) * damp) @ (om * u.sin_coeffs) - (np.sin(phase) * damp) @ (
            om * u.cos_coeffs[1:]
        )

    def dy(self, x, y):
        self._require_bessel()
        return self._modal(x, y, lambda p, y: p.deriv(y))

    def weighted_dy(self, x, y):
        """y^a dU/dy, evaluated without cancellation down to y = 0."""
        self._require_bessel()
        return self._modal(x, y, lambda p, y: p.weighted_deriv(y))

    def _require_bessel(self):
        if self.method != "bessel-series":
            raise NotImplementedError("analytic derivatives need the bessel-series field")

    # -- poisson convolution ----------------------------------------------

    def _poisson_value(self, x, y):
        u, T = self.base, self.base.T
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        ys = np.broadcast_to(np.asarray(y, dtype=float), xs.shape)
        out = np.empty_like(xs)
        for i, (xi, yi) in enumerate(zip(xs.ravel(), ys.ravel())):
            if yi == 0.0:
                out.ravel()[i] = u(xi)
                continue
            val, _ = quad(
                lambda z: poisson_kernel_periodized(z, yi, self.frac, T) * u(xi - z),
                -T / 2.0,
                T / 2.0,
                points=[0.0],
                limit=300,
                epsabs=1e-13,
                epsrel=1e-12,
            )
            out.ravel()[i] = val
        return out if np.ndim(x) else float(out[0])


def extend_bessel(u: PeriodicFunction, frac: FracOrder, y_max=None, n_quad=128) -> ExtensionField:
    """Mode-by-mode extension U(x,y) = b_0 + sum J_m(y) [a_m sin + b_m cos]."""
    if y_max is None:
        y_max = 40.0 / u.omega
    profiles = tuple(BesselProfile(omega=u.omega * m, frac=frac) for m in range(1, u.N + 1))
    rule = YQuadrature(y_max=y_max, a=frac.a, n=n_quad)
    return ExtensionField(
        base=u, frac=frac, method="bessel-series", y_max=y_max, quadrature=rule, profiles=profiles
    )


def extend_poisson(u: PeriodicFunction, frac: FracOrder, y_max=None, n_quad=128) -> ExtensionField:
    """Extension by convolution with the periodized s-Poisson kernel."""
    if y_max is None:
        y_max = 40.0 / u.omega
    rule = YQuadrature(y_max=y_max, a=frac.a, n=n_quad)
    return ExtensionField(
        base=u, frac=frac, method="poisson-convolution", y_max=y_max, quadrature=rule
    )


# ---------------------------------------------------------------------------
# Dirichlet-to-Neumann map

_RICHARDSON_LEVELS = 7
_RICHARDSON_RATIO = 0.55


def _neumann_poisson_at(field: ExtensionField, x, y0):
    """-d_s lim y^a U_y by fitting (U(x,y) - u(x))/y^{2s} against the
    boundary expansion kappa + c1 y^{2-2s} + c2 y^2 + c3 y^{4-2s}."""
    s = field.frac.s
    ys = y0 * _RICHARDSON_RATIO ** np.arange(_RICHARDSON_LEVELS)
    f = np.array([(field.value(x, yi) - field.base(x)) / yi ** (2 * s) for yi in ys])
    expo = [2.0 - 2.0 * s, 2.0, 4.0 - 2.0 * s]
    A = np.column_stack([np.ones_like(ys)] + [ys**p for p in expo])
    coef, res, *_ = np.linalg.lstsq(A, f, rcond=None)
    fit_err = float(np.max(np.abs(A @ coef - f)))
    scale = max(1.0, float(np.max(np.abs(f))))
    if fit_err > 1e-5 * scale:
        raise ExtrapolationDivergence(
            f"Neumann-limit fit residual {fit_err:.3e} too large at x = {x:.6g}"
        )
    kappa = coef[0]
    return -field.frac.d_s * 2.0 * s * kappa


def dirichlet_to_neumann(field: ExtensionField, n_out=None) -> PeriodicFunction:
    """-d_s lim_{y->0} y^a dU/dy as a periodic function.

    Bessel route: exact per-mode limit of y^a J_m'(y).  Poisson route:
    Richardson-type fit of the boundary expansion at a geometric sequence
    of heights, sampled on the coefficient grid.
    """
    u = field.base
    if field.method == "bessel-series":
        lam = np.array([-field.frac.d_s * p.weighted_deriv(0.0) for p in field.profiles])
        b = np.concatenate(([0.0], lam * u.cos_coeffs[1:]))
        return PeriodicFunction(T=u.T, sin_coeffs=lam * u.sin_coeffs, cos_coeffs=b, odd=u.odd)
    n_out = n_out or 2 * u.N + 2
    xg = np.arange(n_out) * (u.T / n_out)
    omega_max = u.omega * max(u.N, 1)
    y0 = 0.25 / omega_max
    vals = np.array([_neumann_poisson_at(field, xi, y0) for xi in xg])
    return PeriodicFunction.from_samples(u.T, vals, odd=u.odd).truncate(u.N)


# ---------------------------------------------------------------------------
# weighted Dirichlet energy


def _profile_energy_integral(phi: _Profile, a, t_max, n=384):
    """int_0^{t_max} [t^a phi^2 + t^{-a} psi^2] dt with psi = t^a phi'."""
    out = 0.0
    for beta, fn in ((a, phi.value), (-a, lambda t: phi.weighted_deriv(t))):
        t, w = roots_jacobi(n, 0.0, beta)
        yq = t_max * (t + 1.0) / 2.0
        wq = w * (t_max / 2.0) ** (beta + 1.0)
        out += float(fn(yq) ** 2 @ wq)
    return out


def extension_energy(field: ExtensionField, y_max=None, tail_tol=1e-10):
    """int int y^a |grad U|^2 over one period x (0, infinity).

    Mode orthogonality in x reduces the integral to one universal profile
    integral per mode; equals (1/d_s) <u, (-d_xx)^s u> up to quadrature
    error.  Raises TailNotConverged when y_max cuts the exponential tail
    too early.
    """
    u, frac = field.base, field.frac
    y_max = y_max or field.y_max
    if u.N == 0:
        return 0.0
    om1 = u.omega
    if om1 * y_max < 15.0:
        raise TailNotConverged(
            f"omega_1 * y_max = {om1 * y_max:.2f} < 15: tail above tolerance {tail_tol:g}"
        )
    phi = _Profile(frac.s)
    total = 0.0
    m = np.arange(1, u.N + 1)
    power = u.sin_coeffs**2 + u.cos_coeffs[1:] ** 2
    for mi, pw in zip(m, power):
        if pw == 0.0:
            continue
        om = u.omega * mi
        t_max = min(om * y_max, 40.0)
        integral = _profile_energy_integral(phi, frac.a, t_max)
        total += pw * om ** (2 * frac.s) * integral
    return 0.5 * u.T * total
