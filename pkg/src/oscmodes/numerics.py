"""Shared numerical kernels: unit reduction, log-scaled reals, grids,
quadrature, ODE integration, and finite-difference stencils.

Everything downstream works in dimensionless variables (hbar = m = omega = 1);
`UnitScale` is the conversion layer.  Exponentially growing amplitudes such as
exp(q^2) overflow doubles near q ~ 26, so growing quantities are carried as
`LogScaledReal` (sign plus natural log of the magnitude).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate as _sciint
from scipy import special as _special

SQRT_PI = math.sqrt(math.pi)

# Points dropped from each end of a grid before taking sup norms of stencil
# output: stencil half-width (3) plus a 2-point safety band.
INTERIOR_MARGIN = 5

__all__ = [
    "SQRT_PI",
    "INTERIOR_MARGIN",
    "UnitScale",
    "LogScaledReal",
    "Grid",
    "Trajectory",
    "QuadratureError",
    "OdeIntegrationError",
    "adaptive_quad",
    "ode_integrate",
    "growing_integral",
    "growing_integral_float",
    "gauss_integral_upper",
    "ErfiAsymptotic",
    "erfi_asymptotic",
    "first_derivative",
    "second_derivative",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge within its subdivision budget."""


class OdeIntegrationError(RuntimeError):
    """Adaptive ODE integration failed (step-size collapse, stiffness, overflow)."""


# ---------------------------------------------------------------------------
# unit reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitScale:
    """Physical constants hbar, m, omega; default instance is dimensionless.

    The characteristic length is sqrt(hbar / m omega), the energy quantum is
    hbar*omega and the characteristic time 1/omega.  All formulas in this
    package are evaluated in the reduced variables xi = q/length, tau = omega*t.
    """

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            if not (getattr(self, name) > 0.0 and math.isfinite(getattr(self, name))):
                raise ValueError(f"UnitScale.{name} must be a finite positive real")

    @property
    def length(self) -> float:
        return math.sqrt(self.hbar / (self.mass * self.omega))

    @property
    def energy(self) -> float:
        return self.hbar * self.omega

    @property
    def time(self) -> float:
        return 1.0 / self.omega

    def q_to_dimensionless(self, q_physical: float) -> float:
        return q_physical / self.length

    def q_from_dimensionless(self, xi: float) -> float:
        return xi * self.length

    def t_to_dimensionless(self, t_physical: float) -> float:
        return t_physical * self.omega

    def t_from_dimensionless(self, tau: float) -> float:
        return tau / self.omega

    def energy_to_physical(self, e_dimensionless: float) -> float:
        return e_dimensionless * self.energy


# ---------------------------------------------------------------------------
# log-scaled reals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogScaledReal:
    """A real number stored as sign in {-1, 0, +1} plus log of its magnitude.

    `logmag` is ignored when sign == 0.  Multiplication and division compose
    by adding/subtracting logmag, so quantities like exp(q^2) stay exactly
    representable far beyond the double-precision overflow threshold.
    Conversion back to float preserves sign and zero exactly; the magnitude
    round-trips through exp(log(x)) and is therefore faithful to ~1 ulp,
    not bit-exact.
    """

    sign: int
    logmag: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.sign != 0 and math.isnan(self.logmag):
            raise ValueError("logmag must not be NaN for nonzero values")

    @classmethod
    def from_float(cls, x: float) -> "LogScaledReal":
        if x == 0.0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def zero(cls) -> "LogScaledReal":
        return cls(0)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            mag = math.exp(self.logmag)
        except OverflowError:
            mag = math.inf
        return self.sign * mag

    def scale_exp(self, delta: float) -> "LogScaledReal":
        """Multiply by exp(delta) without leaving log space."""
        if self.sign == 0:
            return self
        return LogScaledReal(self.sign, self.logmag + delta)

    def __neg__(self) -> "LogScaledReal":
        return LogScaledReal(-self.sign, self.logmag)

    def __abs__(self) -> "LogScaledReal":
        return LogScaledReal(abs(self.sign), self.logmag)

    def _coerce(self, other) -> "LogScaledReal":
        if isinstance(other, LogScaledReal):
            return other
        if isinstance(other, (int, float)):
            return LogScaledReal.from_float(float(other))
        return NotImplemented

    def __mul__(self, other) -> "LogScaledReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return LogScaledReal(0)
        return LogScaledReal(self.sign * other.sign, self.logmag + other.logmag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogScaledReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by log-scaled zero")
        if self.sign == 0:
            return LogScaledReal(0)
        return LogScaledReal(self.sign * other.sign, self.logmag - other.logmag)

    def __add__(self, other) -> "LogScaledReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        if self.sign == other.sign:
            return LogScaledReal(self.sign, np.logaddexp(self.logmag, other.logmag))
        # opposite signs: subtract the smaller magnitude from the larger
        if self.logmag == other.logmag:
            return LogScaledReal(0)
        big, small = (self, other) if self.logmag > other.logmag else (other, self)
        return LogScaledReal(big.sign, big.logmag + math.log1p(-math.exp(small.logmag - big.logmag)))

    def __sub__(self, other) -> "LogScaledReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)


# ---------------------------------------------------------------------------
# grids and trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Strictly increasing, uniformly spaced sample points.

    Uniformity is enforced to 1e-12 relative; symmetric factory grids satisfy
    points[i] == -points[n-1-i] exactly (points are integer multiples of the
    spacing, so negation is exact in floating point).
    """

    points: np.ndarray
    spacing: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("Grid needs at least two points")
        if not self.spacing > 0.0:
            raise ValueError("Grid spacing must be positive")
        steps = np.diff(pts)
        if np.any(steps <= 0.0):
            raise ValueError("Grid points must be strictly increasing")
        if np.max(np.abs(steps - self.spacing)) > 1e-12 * max(1.0, self.spacing):
            raise ValueError("Grid spacing is not uniform to 1e-12")

    @classmethod
    def uniform(cls, start: float, stop: float, spacing: float) -> "Grid":
        n = int(round((stop - start) / spacing))
        if n < 1:
            raise ValueError("empty grid")
        return cls(start + spacing * np.arange(n + 1), spacing)

    @classmethod
    def symmetric(cls, extent: float, spacing: float) -> "Grid":
        n = int(round(extent / spacing))
        if n < 1:
            raise ValueError("empty grid")
        return cls(spacing * np.arange(-n, n + 1), spacing)

    @property
    def n(self) -> int:
        return int(self.points.size)

    @property
    def extent(self) -> tuple[float, float]:
        return float(self.points[0]), float(self.points[-1])

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.points, -self.points[::-1]))

    def interior(self, margin: int = INTERIOR_MARGIN) -> slice:
        if 2 * margin >= self.n:
            raise ValueError("grid too small for the requested interior margin")
        return slice(margin, self.n - margin)


@dataclass(frozen=True)
class Trajectory:
    """Samples of a solution on a Grid plus (optionally) a dense interpolant."""

    grid: Grid
    values: np.ndarray
    dense: Callable[[float], np.ndarray] | None = None

    def at(self, x: float) -> np.ndarray:
        """Dense evaluation; falls back to the stored samples only at nodes."""
        if self.dense is not None:
            return np.atleast_1d(self.dense(x))
        idx = np.searchsorted(self.grid.points, x)
        if idx < self.grid.n and self.grid.points[idx] == x:
            return np.atleast_1d(self.values[idx])
        raise ValueError("no dense output available and x is not a grid node")

    @property
    def component0(self) -> np.ndarray:
        vals = np.asarray(self.values)
        return vals if vals.ndim == 1 else vals[:, 0]


# ---------------------------------------------------------------------------
# quadrature and ODE driver
# ---------------------------------------------------------------------------

def adaptive_quad(integrand: Callable[[float], float], a: float, b: float,
                  tol: float = 1e-10, budget: int = 10_000) -> float:
    """Adaptive Gauss-Kronrod integration of `integrand` over the finite [a, b].

    The embedded error estimate must reach `tol` (absolute, with a 1e-10
    relative fallback for large-magnitude integrals) within `budget`
    subdivisions; otherwise the integrand is treated as divergent/singular
    and QuadratureError is raised.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("adaptive_quad requires finite limits; truncate tails first")
    if not a < b:
        raise ValueError("adaptive_quad requires a < b")
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    result = _sciint.quad(integrand, a, b, epsabs=tol, epsrel=1e-10,
                          limit=budget, full_output=True)
    value, abserr = result[0], result[1]
    if len(result) > 3:  # explanation string present => ier != 0
        raise QuadratureError(f"quadrature did not converge on [{a}, {b}]: {result[3].strip()}")
    if not math.isfinite(value):
        raise QuadratureError(f"quadrature produced a non-finite value on [{a}, {b}]")
    if abserr > tol and abserr > 1e-10 * abs(value):
        raise QuadratureError(
            f"quadrature error estimate {abserr:.3e} exceeds tolerance {tol:.3e}")
    return value


def ode_integrate(rhs: Callable[[float, np.ndarray], Sequence[float]],
                  y0: Sequence[float], span: tuple[float, float],
                  tol: float = 1e-10, grid: Grid | None = None,
                  atol: float | None = None) -> Trajectory:
    """High-order adaptive Runge-Kutta integration with dense output.

    Uses an 8th-order pair with local error <= tol per step (relative; `atol`
    defaults to tol).  If `grid` is given the dense solution is sampled onto
    it; otherwise the trajectory only records the endpoints and callers should
    use the dense interpolant.
    """
    t0, t1 = span
    sol = _sciint.solve_ivp(rhs, (t0, t1), np.asarray(y0, dtype=float),
                            method="DOP853", rtol=tol,
                            atol=tol if atol is None else atol,
                            dense_output=True)
    if not sol.success:
        raise OdeIntegrationError(
            f"ODE integration failed on [{t0}, {t1}]: {sol.message} "
            "(step-size collapse usually means a log-scaled formulation is needed)")
    dense = lambda x: sol.sol(x)
    if grid is not None:
        lo, hi = (t0, t1) if t0 < t1 else (t1, t0)
        if grid.points[0] < lo - 1e-12 or grid.points[-1] > hi + 1e-12:
            raise ValueError("requested grid extends beyond the integration span")
        values = sol.sol(grid.points).T
    else:
        grid_pts = np.asarray(sorted((t0, t1)), dtype=float)
        grid = Grid(grid_pts, abs(t1 - t0))
        values = sol.sol(grid.points).T
    return Trajectory(grid=grid, values=values, dense=dense)


# ---------------------------------------------------------------------------
# special-function kernels
# ---------------------------------------------------------------------------

def growing_integral(q: float) -> LogScaledReal:
    """F(q) = integral_0^q exp(y^2) dy, in log-scaled form.

    Built on the Dawson function D(q) = exp(-q^2) * F(q), which is bounded,
    so log F = q^2 + log D never overflows.  F is odd by construction.
    """
    if not math.isfinite(q):
        raise ValueError("growing_integral requires finite q")
    if q == 0.0:
        return LogScaledReal.zero()
    d = float(_special.dawsn(abs(q)))
    return LogScaledReal(1 if q > 0 else -1, q * q + math.log(d))


def growing_integral_float(q: float) -> float:
    """F(q) as a plain float; overflows to +-inf beyond |q| ~ 26.6."""
    return growing_integral(q).to_float()


def gauss_integral_upper(r: float) -> float:
    """G(r) = integral_r^inf exp(-y^2) dy = (sqrt(pi)/2) erfc(r).

    Strictly decreasing, 0 < G < sqrt(pi), and G(r) + G(-r) = sqrt(pi).
    """
    if not math.isfinite(r):
        raise ValueError("gauss_integral_upper requires finite r")
    return 0.5 * SQRT_PI * math.erfc(r)


class ErfiAsymptotic(NamedTuple):
    """K-term asymptotic partial sum plus the magnitude of the first omitted term."""

    value: LogScaledReal
    next_term: LogScaledReal


def erfi_asymptotic(z: float, terms: int) -> ErfiAsymptotic:
    """Large-|z| expansion of F(z): (exp(z^2)/2z) * sum_k (2k-1)!!/(2z^2)^k.

    Returns the partial sum with k = 0..terms, and the magnitude of term
    terms+1 as the error estimate.  All terms have the same sign, so the
    true truncation error is a small multiple (empirically < 2.5x for
    |z| >= 2, terms <= 5) of that estimate rather than being bounded by it.
    """
    if z == 0.0:
        raise ValueError("the asymptotic series is undefined at z = 0")
    if terms < 0:
        raise ValueError("terms must be >= 0")
    inv = 1.0 / (2.0 * z * z)
    total = 0.0
    term = 1.0
    for k in range(terms + 1):
        if k > 0:
            term *= (2 * k - 1) * inv
        total += term
    next_term = term * (2 * terms + 1) * inv
    prefactor = LogScaledReal(1 if z > 0 else -1, z * z - math.log(2.0 * abs(z)))
    return ErfiAsymptotic(value=prefactor * total,
                          next_term=abs(prefactor) * next_term)


# ---------------------------------------------------------------------------
# finite-difference stencils
# ---------------------------------------------------------------------------

def _fd_weights(offsets: np.ndarray, deriv: int) -> np.ndarray:
    """Weights w with sum_j w_j f(x + o_j h) = h^deriv f^(deriv)(x) + O(h^n)."""
    n = offsets.size
    rhs = np.zeros(n)
    rhs[deriv] = math.factorial(deriv)
    powers = np.vander(offsets.astype(float), n, increasing=True).T
    return np.linalg.solve(powers, rhs)


def _apply_stencil(values: np.ndarray, spacing: float, deriv: int,
                   central_width: int, edge_width: int) -> np.ndarray:
    values = np.asarray(values)
    n = values.shape[0]
    if n < max(central_width, edge_width):
        raise ValueError(f"need at least {max(central_width, edge_width)} points")
    half = central_width // 2
    out = np.empty_like(values, dtype=complex if np.iscomplexobj(values) else float)

    central = _fd_weights(np.arange(-half, half + 1), deriv)
    windows = np.lib.stride_tricks.sliding_window_view(values, central_width, axis=0)
    out[half:n - half] = windows @ central

    # one-sided / skewed stencils of matching order near the edges
    for i in range(half):
        offsets = np.arange(edge_width) - i
        out[i] = _fd_weights(offsets, deriv) @ values[:edge_width]
        offsets = np.arange(-(edge_width - 1), 1) + i
        out[n - 1 - i] = _fd_weights(offsets, deriv) @ values[n - edge_width:]
    return out / spacing ** deriv


def second_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """d^2/dq^2 of uniform samples: 7-point order-6 central stencil in the
    interior, 8-point order-6 skewed stencils at the edges."""
    return _apply_stencil(values, spacing, deriv=2, central_width=7, edge_width=8)


def first_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """d/dq of uniform samples at order 6 (7-point stencils throughout)."""
    return _apply_stencil(values, spacing, deriv=1, central_width=7, edge_width=7)
