"""The rotated (Stokes-wedge) sector, where the growing families become bounded.

Substituting q -> -i r turns the oscillator equation into

    i psi_t = -[ -(1/2) d^2/dr^2 + r^2/2 ] psi,

and maps the growing pair onto the convergent one:

    f(r) = int_r^inf exp(-y^2) dy               (f'' + 2r f' = 0)
    g(r) with g'' + 2r g' = 2 f,  g -> 0 at infinity,

with tails f -> exp(-r^2)/2r and g -> -exp(-r^2) ln(r^2) / 4r.  The decaying
branch of g is pinned by its value at infinity, so it is built by integrating
the tail integral

    g(r) = -2 int_r^inf exp(-y^2) A(y) dy,   A(y) = int_0^y exp(z^2) f(z) dz,

backwards from beyond the working domain; computing it as a difference of
forward cumulatives would cancel catastrophically (the tail is ~1e-17 of the
cumulative already at r = 6).  The zero-at-origin baseline used on the real
axis differs from this branch by the additive constant 2 int_0^inf exp(-y^2) A,
which the tail checks and finite inner products here cannot tolerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as _special

from .jordan import PairOverlaps, pair_overlaps
from .modes import ModeFamily, SectorTag
from .numerics import (
    Grid,
    SQRT_PI,
    Trajectory,
    gauss_integral_upper,
    ode_integrate,
)
from .verify import ResidualReport, stationary_residual

__all__ = [
    "WedgePair",
    "wedge_f",
    "wedge_g",
    "make_wedge_pair",
    "rotated_residual",
    "wedge_psi0hat_family",
    "wedge_linear_family",
    "WedgeOverlapTable",
    "wedge_inner_products",
    "tail_bound_eigen_overlap",
    "tail_bound_full_overlap",
]

# integration continues this far past the working domain so that the seeded
# tail value is negligible relative to g on the domain (ratio ~ exp(-2*R*pad))
_TAIL_PAD = 6.0

_DEFAULT_SPACING = 1.0 / 256.0


@dataclass(frozen=True)
class WedgePair:
    """Convergent (f, g) pair on [0, R]; f is bounded by sqrt(pi) and g decays."""

    f: Trajectory
    g: Trajectory
    domain: tuple[float, float]

    @property
    def grid(self) -> Grid:
        return self.f.grid

    @property
    def f_values(self) -> np.ndarray:
        return self.f.component0

    @property
    def g_values(self) -> np.ndarray:
        return self.g.component0

    def _check_range(self, r: float):
        r0, r1 = self.domain
        if not (r0 - 1e-12 <= r <= r1 + 1e-12):
            raise ValueError(f"r = {r} outside the pair's domain [{r0}, {r1}]")

    def f_at(self, r: float) -> float:
        self._check_range(r)
        return gauss_integral_upper(r)

    def g_at(self, r: float) -> float:
        self._check_range(r)
        return float(self.g.at(r)[0])


def wedge_f(r: float) -> float:
    """f(r) = int_r^inf exp(-y^2) dy; bounded by sqrt(pi), f' = -exp(-r^2)."""
    return gauss_integral_upper(r)


def make_wedge_pair(domain_end: float, spacing: float = _DEFAULT_SPACING) -> WedgePair:
    """Construct the convergent pair on [0, domain_end].

    A(y) is integrated forward (its integrand (sqrt(pi)/2) erfcx is bounded);
    the g tail integral is then swept backwards from domain_end + pad down to
    0, seeded with the leading asymptotic tail value so the error control has
    a nonzero scale to work against.
    """
    if not domain_end > 0.0:
        raise ValueError("domain_end must be positive")
    grid = Grid.uniform(0.0, domain_end, spacing)
    pad_end = domain_end + _TAIL_PAD

    a_sol = ode_integrate(lambda y, a: [0.5 * SQRT_PI * _special.erfcx(y)],
                          [0.0], (0.0, pad_end), tol=1e-13, atol=1e-16)

    # T(r) = int_r^pad_end exp(-y^2) A(y) dy + (true tail beyond pad_end)
    seed = math.exp(-pad_end * pad_end) * math.log(pad_end * pad_end) / (8.0 * pad_end)
    t_sol = ode_integrate(lambda r, tv: [-math.exp(-r * r) * float(a_sol.dense(r)[0])],
                          [seed], (pad_end, 0.0), tol=1e-13, atol=1e-300)

    def g_dense(r):
        return -2.0 * np.asarray(t_sol.dense(r))

    f_vals = np.array([gauss_integral_upper(r) for r in grid.points])
    g_vals = np.asarray(g_dense(grid.points)).reshape(-1)

    f_traj = Trajectory(grid=grid, values=f_vals,
                        dense=lambda r: np.atleast_1d(gauss_integral_upper(float(r))))
    g_traj = Trajectory(grid=grid, values=g_vals,
                        dense=lambda r: np.atleast_1d(g_dense(float(r))))
    return WedgePair(f=f_traj, g=g_traj, domain=(0.0, domain_end))


@lru_cache(maxsize=8)
def _cached_pair(domain_end: float) -> WedgePair:
    return make_wedge_pair(domain_end)


def wedge_g(r: float, domain_end: float) -> float:
    """g(r) on [0, domain_end]; asymptotically -exp(-r^2) ln(r^2) / 4r."""
    if not 0.0 <= r <= domain_end:
        raise ValueError("need 0 <= r <= domain_end")
    return _cached_pair(float(domain_end)).g_at(r)


# ---------------------------------------------------------------------------
# wedge mode families and residuals
# ---------------------------------------------------------------------------

def wedge_psi0hat_family() -> ModeFamily:
    """Ground wedge eigenmode psi(r,t) = exp(-it/2) exp(r^2/2) f(r).

    The profile equals (sqrt(pi)/2) exp(-r^2/2) erfcx(r): bounded, decaying
    like exp(-r^2/2)/2r, yet an eigenstate of the rotated equation with the
    same +1/2 eigenvalue as its real-axis partner.
    """
    energy = 0.5

    def profile(r: float) -> float:
        return 0.5 * SQRT_PI * math.exp(-0.5 * r * r) * float(_special.erfcx(r))

    def evaluate(q, t):
        return complex(np.exp(-1j * energy * t) * profile(q))

    def time_derivative(q, t):
        return -1j * energy * evaluate(q, t)

    def profile_arrays(qs):
        vals = 0.5 * SQRT_PI * _special.erfcx(qs)
        return np.ones(qs.shape, dtype=int), np.log(vals) - 0.5 * qs * qs

    return ModeFamily(sector=SectorTag("wedge-eigen"), energy=energy,
                      parity="none", hamiltonian="wedge",
                      _evaluate=evaluate, _time_derivative=time_derivative,
                      _profile_arrays=profile_arrays)


def wedge_linear_family(pair: WedgePair) -> ModeFamily:
    """exp(-it/2) exp(r^2/2) [f(r) t + i g(r)]: the wedge image of the
    linear-in-time mode, bounded on the half-line."""

    def envelope(q: float) -> float:
        return math.exp(0.5 * q * q)

    def evaluate(q, t):
        h = pair.f_at(q) * t + 1j * pair.g_at(q)
        return complex(np.exp(-0.5j * t) * envelope(q) * h)

    def time_derivative(q, t):
        f, g = pair.f_at(q), pair.g_at(q)
        h = f * t + 1j * g
        return complex(np.exp(-0.5j * t) * envelope(q) * (-0.5j * h + f))

    return ModeFamily(sector=SectorTag("wedge-linear"), energy=None,
                      parity="none", hamiltonian="wedge",
                      _evaluate=evaluate, _time_derivative=time_derivative)


def rotated_residual(mode: ModeFamily, energy: float, grid: Grid) -> ResidualReport:
    """Stationary residual under the rotated equation i psi_t = -H_osc psi,
    i.e. sup |-H_osc u - E u| / sup|u| on the grid interior."""
    if mode.hamiltonian != "wedge":
        raise ValueError("rotated_residual expects a wedge-sector mode")
    return stationary_residual(mode, energy, grid)


# ---------------------------------------------------------------------------
# finite, time-independent inner products
# ---------------------------------------------------------------------------

def tail_bound_eigen_overlap(domain_end: float) -> float:
    """Rigorous bound on int_R^inf f dr, from f(r) <= exp(-r^2)/2r:
    int_R^inf f <= f(R) / 2R."""
    return gauss_integral_upper(domain_end) / (2.0 * domain_end)


def tail_bound_full_overlap(domain_end: float) -> float:
    """Rigorous bound on |int_R^inf 2 f g dr|.

    exp(y^2) f(y) <= sqrt(pi)/2 gives |A(y)| <= (sqrt(pi)/2) y, hence
    |g| <= sqrt(pi)/2 exp(-r^2) and |2fg| <= (sqrt(pi)/2) exp(-2y^2)/y, whose
    tail integral is below (sqrt(pi)/8) exp(-2R^2)/R^2.
    """
    return 0.125 * SQRT_PI * math.exp(-2.0 * domain_end * domain_end) / domain_end ** 2


@dataclass(frozen=True)
class WedgeOverlapTable:
    """Per-time overlap values plus the drift and tail diagnostics."""

    times: tuple[float, ...]
    overlaps: tuple[PairOverlaps, ...]
    max_drift: float
    tail_bound: float


def wedge_inner_products(pair: WedgePair, times, tol: float = 1e-12) -> WedgeOverlapTable:
    """Evaluate the four pair overlaps at each requested time.

    Asserts that the truncation tails beyond the domain are below 1e-10 and
    that the values drift by no more than 1e-12 across the sampled times.
    """
    r0, r1 = pair.domain
    if r1 < 8.0:
        raise ValueError("inner products need a domain reaching at least r = 8")
    tail = max(tail_bound_eigen_overlap(r1), tail_bound_full_overlap(r1))
    if tail >= 1e-10:
        raise ValueError(f"tail estimate {tail:.3e} beyond r = {r1} exceeds 1e-10; "
                         "enlarge the domain")
    times = tuple(float(t) for t in times)
    tables = tuple(pair_overlaps(pair, t, (r0, r1), energy=1.0, tol=tol) for t in times)
    drift = 0.0
    baseline = tables[0].as_tuple()
    for table in tables[1:]:
        drift = max(drift, max(abs(x - y) for x, y in zip(table.as_tuple(), baseline)))
    if drift > 1e-12:
        raise ValueError(f"overlaps drifted by {drift:.3e} across times; "
                         "expected time independence to 1e-12")
    for table in tables:
        for value in table.as_tuple():
            if not np.isfinite(value):
                raise ValueError("overlap integration produced a non-finite value")
    return WedgeOverlapTable(times=times, overlaps=tables,
                             max_drift=drift, tail_bound=tail)
