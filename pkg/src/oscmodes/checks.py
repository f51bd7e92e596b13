"""Registry of machine-checkable identities powering the verify-all report.

Each check produces one record {check_id, anchor, value, bound, pass}: `value`
is the measured number (residual, ratio deviation, overlap, ...), `bound` is
what it must stay below (or inside, for window checks), and `anchor` ties the
record to the equation it verifies in the source derivation.  Records tagged
kind="info" are informational only and never fail the run.

Default sample points are chosen where the asserted asymptotics have actually
set in: the growing-tail windows are checked at q = 6 and the logarithmically
slow g-tail ratios at q = 20 (at q = 6 those ratios still deviate from 1 by
~0.55; see the README discussion of log-slow tails).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg as _linalg
from scipy import special as _special

from . import jordan, modes, verify, wedge
from .numerics import (
    Grid,
    SQRT_PI,
    adaptive_quad,
    erfi_asymptotic,
    first_derivative,
    gauss_integral_upper,
    growing_integral,
    growing_integral_float,
    second_derivative,
)

__all__ = ["CheckRecord", "run_all_checks", "DEFAULTS"]


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    anchor: str
    value: float
    bound: float
    passed: bool
    kind: str = "check"
    detail: str = ""


@dataclass(frozen=True)
class CheckSettings:
    grid_extent: float = 4.0
    grid_step: float = 1.0 / 256.0
    cutoffs: tuple[float, ...] = (5.0, 10.0, 15.0, 20.0)
    times: tuple[float, ...] = (0.0, 1.0, 5.0)
    residual_bound: float = 1e-7
    quad_tol: float = 1e-10


DEFAULTS = CheckSettings()

# sample points for tail/window checks (fixed; independent of the grid extent)
_WINDOW_POINT = 6.0
_LOG_TAIL_POINT = 20.0
_DRIFT_POINTS = (3.0, 4.0, 5.0, 6.0)


class _Context:
    """Heavyweight shared artifacts, built once per run."""

    def __init__(self, settings: CheckSettings):
        self.settings = settings
        self.grid = Grid.symmetric(settings.grid_extent, settings.grid_step)
        self.pair = modes.make_fg_pair(0, self.grid)
        # separate coarse pair reaching the log-tail sample point
        self.tail_pair = modes.make_fg_pair(0, Grid.symmetric(_LOG_TAIL_POINT + 0.5, 1.0 / 64.0))
        self.wedge_grid = Grid.uniform(0.0, 8.0, settings.grid_step)
        self.wedge_pair = wedge.make_wedge_pair(8.0, settings.grid_step)
        self.wedge_tail_pair = wedge.make_wedge_pair(_LOG_TAIL_POINT, 1.0 / 64.0)


def _record(check_id, anchor, value, bound, passed, kind="check", detail=""):
    return CheckRecord(check_id=check_id, anchor=anchor, value=float(value),
                       bound=float(bound), passed=bool(passed), kind=kind,
                       detail=detail)


# ---------------------------------------------------------------------------
# individual check groups
# ---------------------------------------------------------------------------

def _eigen_residual_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    bound = ctx.settings.residual_bound
    for n in range(7):
        rep = verify.stationary_residual(modes.standard_mode(n), n + 0.5, ctx.grid)
        out.append(_record(f"residual-standard-{n}", "eq:1.2", rep.sup_residual,
                           bound, rep.sup_residual <= bound,
                           detail=f"E = {n + 0.5}"))
    anchors = {0: "eq:1.4", 1: "eq:2.6", 2: "eq:2.5", 3: "eq:2.5"}
    for n in range(4):
        rep = verify.stationary_residual(modes.fbar_mode(n), n + 0.5, ctx.grid)
        out.append(_record(f"residual-fbar-{n}", anchors[n], rep.sup_residual,
                           bound, rep.sup_residual <= bound,
                           detail=f"E = {n + 0.5}, non-normalizable sector"))
    rep = verify.stationary_residual(modes.negative_energy_family(), -0.5, ctx.grid)
    out.append(_record("residual-negative-energy", "eq:1.7", rep.sup_residual,
                       bound, rep.sup_residual <= bound,
                       detail="exp(+q^2/2) with E = -1/2"))
    return out


def _growing_integral_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    # oddness (exact by construction)
    dev = max(abs((growing_integral(-q) + growing_integral(q)).to_float())
              for q in (0.3, 1.0, 2.5, 7.0))
    out.append(_record("growing-integral-odd", "eq:1.4", dev, 0.0, dev <= 0.0,
                       detail="F(-q) + F(q) over sample points"))

    # F' = exp(q^2) via stencil on the pair's f component
    qs = ctx.grid.points
    deriv = first_derivative(ctx.pair.f_values, ctx.grid.spacing)
    expected = np.exp(qs * qs)
    rel = np.max(np.abs(deriv - expected)[ctx.grid.interior()]
                 / expected[ctx.grid.interior()])
    out.append(_record("growing-integral-derivative", "eq:1.3", rel, 1e-8,
                       rel <= 1e-8, detail="stencil f' against exp(q^2)"))

    # asymptotic series: exact partial-sum arithmetic at z = 2, terms k <= 3
    series = erfi_asymptotic(2.0, 3).value.to_float()
    closed = math.exp(4.0) / 4.0 * (1 + 1 / 8 + 3 / 64 + 15 / 512)
    rel = abs(series - closed) / closed
    out.append(_record("erfi-series-coefficients", "eq:1.8", rel, 1e-14,
                       rel <= 1e-14, detail="K=3 partial sum vs closed form"))

    # truncation error against quadrature; same-sign series, so the error is a
    # small multiple of the first omitted term (2.5x covers z >= 2, K <= 5)
    worst = 0.0
    for z in (2.0, 3.0, 4.0, 6.0):
        exact = adaptive_quad(lambda y: math.exp(y * y), 0.0, z, tol=1e-10)
        for terms in range(6):
            approx = erfi_asymptotic(z, terms)
            ratio = abs(exact - approx.value.to_float()) / approx.next_term.to_float()
            worst = max(worst, ratio)
    out.append(_record("erfi-series-envelope", "eq:1.8", worst, 2.5, worst <= 2.5,
                       detail="truncation error / first omitted term, quadrature oracle"))

    # l'Hopital leading ratio F(q) 2q exp(-q^2) -> 1
    for check_id, anchor, q in (("growing-ratio-leading-12", "eq:1.6", 12.0),
                                ("growing-ratio-leading-20", "eq:1.5", 20.0)):
        ratio = 2.0 * q * float(_special.dawsn(q))
        hi = 1.0 + 1.0 / (2 * q * q) + 1e-3
        out.append(_record(check_id, anchor, ratio, hi, 1.0 <= ratio <= hi,
                           detail=f"window [1, {hi:.6f}] at q = {q}"))

    # psibar0 tail window at q = 6 (the second-order correction 3/4q^4 is
    # inside the 1e-3 padding only from q ~ 6 on)
    q = _WINDOW_POINT
    ratio = 2.0 * q * float(_special.dawsn(q))
    hi = 1.0 + 1.0 / (2 * q * q) + 1e-3
    out.append(_record("psibar0-tail-window", "eq:1.5,eq:1.6,eq:1.7", ratio, hi,
                       1.0 <= ratio <= hi,
                       detail=f"fbar0 * 2q exp(-q^2/2) at q = {q}"))
    return out


def _fg_pair_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    # the g equation, measured like the eigen-residuals: normalized by the
    # sup of the forcing term on a moderate grid
    grid = Grid.symmetric(2.0, ctx.settings.grid_step)
    pair = modes.make_fg_pair(0, grid)
    g2 = second_derivative(pair.g_values, grid.spacing)
    g1 = first_derivative(pair.g_values, grid.spacing)
    forcing = -2.0 * pair.f_values
    residual = g2 - 2.0 * grid.points * g1 - forcing
    rel = np.max(np.abs(residual[grid.interior()])) / np.max(np.abs(forcing))
    out.append(_record("fg-g-ode-residual", "eq:1.10", rel, 1e-8, rel <= 1e-8,
                       detail="g'' - 2q g' + 2f, interior, normalized by sup|2f|"))

    # nested-quadrature route for g at sample points
    worst = 0.0
    for q in (0.5, 1.0, 2.0):
        inner = lambda y: adaptive_quad(lambda t: float(_special.dawsn(t)), 0.0, y,
                                        tol=1e-13) if y != 0.0 else 0.0
        nested = adaptive_quad(lambda y: -2.0 * math.exp(y * y) * inner(y), 0.0, q,
                               tol=1e-13)
        worst = max(worst, abs(nested - ctx.pair.g_at(q)))
    out.append(_record("fg-g-nested-quadrature", "eq:1.10", worst, 1e-7,
                       worst <= 1e-7, detail="ODE route vs nested integrals"))

    # oddness of g on the grid
    dev = float(np.max(np.abs(ctx.pair.g_values + ctx.pair.g_values[::-1])))
    out.append(_record("fg-g-odd", "eq:1.10", dev, 0.0, dev <= 0.0,
                       detail="g(-q) + g(q) across the symmetric grid"))

    # log-slow tail ratio of g against -exp(q^2) ln(q^2) / 4q
    def g_ratio(q):
        asym = -math.exp(q * q) * math.log(q * q) / (4.0 * q)
        return ctx.tail_pair.g_at(q) / asym

    ratio = g_ratio(_LOG_TAIL_POINT)
    out.append(_record("g-tail-ratio", "eq:1.11", abs(ratio - 1.0), 0.5,
                       abs(ratio - 1.0) <= 0.5,
                       detail=f"ratio {ratio:.4f} at q = {_LOG_TAIL_POINT}; "
                              "corrections decay like 1/ln(q^2)"))
    drifts = [abs(g_ratio(q) - 1.0) for q in _DRIFT_POINTS + (_LOG_TAIL_POINT,)]
    monotone = all(a > b for a, b in zip(drifts, drifts[1:]))
    out.append(_record("g-tail-drift", "eq:1.11", drifts[-1], drifts[0], monotone,
                       detail="|ratio - 1| decreasing over q in "
                              f"{_DRIFT_POINTS + (_LOG_TAIL_POINT,)}"))
    return out


def _linear_mode_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    bound = ctx.settings.residual_bound
    family = modes.linear_mode_family(ctx.pair)
    rep = verify.timedep_residual(family, ctx.grid, ctx.settings.times)
    out.append(_record("linear-mode-residual", "eq:1.1,eq:1.9,eq:1.10",
                       rep.sup_residual, bound, rep.sup_residual <= bound,
                       detail=f"t in {tuple(ctx.settings.times)}"))

    t = 100.0
    target = math.exp(-0.5) * abs(ctx.pair.f_at(1.0))
    ratio = abs(modes.linear_mode(ctx.pair, 1.0, t)) / t / target
    out.append(_record("linear-mode-growth", "eq:1.9", abs(ratio - 1.0), 1e-2,
                       abs(ratio - 1.0) <= 1e-2,
                       detail="|psi(1, t)|/t against exp(-1/2)|f(1)| at t = 100"))

    tag = verify.parity_check(family, [0.5, 1.0, 2.0])
    out.append(_record("linear-mode-parity", "eq:1.9", 0.0 if tag == "odd" else 1.0,
                       0.0, tag == "odd", detail=f"parity check -> {tag}"))
    return out


def _free_particle_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    eigen, companion = modes.free_zero_energy_modes()
    rep = verify.stationary_residual(eigen, 0.0, ctx.grid)
    out.append(_record("free-eigen-residual", "sec:1-free", rep.sup_residual,
                       1e-10, rep.sup_residual <= 1e-10,
                       detail="psi = x at E = 0 under the free Hamiltonian"))
    rep = verify.timedep_residual(companion, ctx.grid, ctx.settings.times)
    out.append(_record("free-linear-residual", "sec:1-free", rep.sup_residual,
                       1e-10, rep.sup_residual <= 1e-10,
                       detail="t x - i x^3/3; cubic coefficient fixed by the residual"))
    printed = modes.free_linear_family(1.0 / 6.0)
    rep = verify.timedep_residual(printed, ctx.grid, ctx.settings.times)
    out.append(_record("free-linear-printed-coefficient", "sec:1-free",
                       rep.sup_residual, 0.0, True, kind="info",
                       detail="t x - i x^3/6 leaves residual |x|/2: consistent "
                              "with 2m = 1 units, not with hbar = m = 1"))
    return out


def _overlap_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    tol = ctx.settings.quad_tol
    for n in range(4):
        worst = max(abs(verify.overlap_truncated(modes.standard_mode(n),
                                                 modes.fbar_mode(n), L, tol=tol))
                    for L in (2.0, 4.0, 6.0))
        out.append(_record(f"orthogonality-level-{n}", "eq:2.4", worst, 1e-9,
                           worst <= 1e-9, detail="opposite parities at every level"))

    psi1 = modes.standard_mode(1, dropped_constants=True)
    fbar0 = modes.fbar_mode(0)
    worst = 0.0
    for cutoff in (3.0, 4.0, 5.0, 6.0):
        value = verify.overlap_truncated(psi1, fbar0, cutoff, tol=tol)
        oracle = cutoff - float(_special.dawsn(cutoff))
        worst = max(worst, abs(value - oracle))
    out.append(_record("overlap-oracle-match", "eq:2.7", worst, 1e-6,
                       worst <= 1e-6,
                       detail="overlap vs I(L) = L - exp(-L^2) F(L), by-parts oracle"))

    report = verify.classify_divergence(psi1, fbar0, ctx.settings.cutoffs, tol=tol)
    ok = report.classification == "linear" and abs(report.fit_slope - 1.0) <= 0.01
    out.append(_record("overlap-linear-divergence", "eq:2.7",
                       abs(report.fit_slope - 1.0), 0.01, ok,
                       detail=f"classification {report.classification}, slope "
                              f"{report.fit_slope:.6f} (dropped-constants units)"))

    report = verify.classify_divergence(fbar0, fbar0, ctx.settings.cutoffs, tol=tol)
    out.append(_record("overlap-fbar-self", "eq:2.7",
                       0.0 if report.classification == "exponential" else 1.0, 0.0,
                       report.classification == "exponential",
                       detail="integrand tail exp(q^2)/4q^2 -> exponential class"))

    report = verify.classify_divergence(modes.standard_mode(0), fbar0,
                                        (3.0, 4.0, 5.0, 6.0), tol=tol)
    out.append(_record("overlap-psi0-fbar0", "eq:2.4",
                       max(abs(v) for v in report.values), 1e-10,
                       report.classification == "convergent",
                       detail="orthogonal pair stays convergent at every cutoff"))
    return out


def _jordan_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    block = jordan.JordanBlock(0.5)
    m = block.matrix

    nilpotent = m - 0.5 * np.eye(2)
    dev = float(np.max(np.abs(nilpotent @ nilpotent)))
    out.append(_record("jordan-nilpotency", "eq:4.1", dev, 0.0, dev <= 0.0,
                       detail="(M - E I)^2 = 0 exactly"))

    left = jordan.left_eigenvector(block)
    right = jordan.right_eigenvector(block).as_array()
    dev = max(float(np.max(np.abs(m @ right - 0.5 * right))),
              float(np.max(np.abs(left @ m - 0.5 * left))))
    out.append(_record("jordan-eigenvectors", "eq:4.2", dev, 0.0, dev <= 0.0,
                       detail="M r = E r and l M = E l"))
    zero_norm = abs(complex(left @ right))
    out.append(_record("jordan-zero-norm", "eq:4.2", zero_norm, 0.0,
                       zero_norm <= 0.0, detail="left . right = 0"))

    for energy in (0.5, 2.5):
        ok, residual = jordan.pseudo_hermiticity_check(jordan.JordanBlock(energy))
        out.append(_record(f"pseudo-hermiticity-E{energy}", "eq:3.3", residual,
                           0.0, ok, detail="sigma1 M sigma1 = M^dagger"))

    # closed-form evolution vs the matrix-exponential oracle
    rng = np.random.default_rng(20260811)
    state = jordan.StateVec2(complex(rng.normal(), rng.normal()),
                             complex(rng.normal(), rng.normal()))
    worst = 0.0
    for t in (0.5, 2.0, 7.0):
        oracle = _linalg.expm(-1j * m * t) @ state.as_array()
        ours = jordan.evolve(block, state, t).as_array()
        worst = max(worst, float(np.max(np.abs(ours - oracle))) / float(np.max(np.abs(oracle))))
    out.append(_record("evolve-closed-form", "eq:4.3", worst, 1e-12,
                       worst <= 1e-12, detail="against expm(-iMt), relative"))

    stack = jordan.assemble(3)
    full_state = rng.normal(size=6) + 1j * rng.normal(size=6)
    base = stack.v_norm(full_state)
    drift = max(abs(stack.v_norm(stack.evolve_state(full_state, t)) - base)
                for t in np.linspace(0.0, 100.0, 21))
    out.append(_record("v-norm-conservation", "eq:3.2,eq:4.3", drift, 1e-12,
                       drift <= 1e-12,
                       detail="<s|V|s> with V = direct sum sigma1, t in [0, 100]"))

    res_right, res_left = jordan.pair_solution_mismatch(ctx.wedge_pair, 1.0, 1.0)
    out.append(_record("pair-solution-right", "eq:4.4", res_right, 1e-12,
                       res_right <= 1e-12, detail="i d/dt right = M right at t = 1"))
    out.append(_record("pair-solution-left", "eq:4.5", res_left, 1e-12,
                       res_left <= 1e-12, detail="-i d/dt left = left M at t = 1"))
    return out


def _wedge_checks(ctx: _Context) -> list[CheckRecord]:
    out = []
    bound = ctx.settings.residual_bound
    psi0hat = wedge.wedge_psi0hat_family()
    rep = wedge.rotated_residual(psi0hat, 0.5, ctx.wedge_grid)
    out.append(_record("wedge-psi0hat-residual", "eq:3.5", rep.sup_residual,
                       bound, rep.sup_residual <= bound,
                       detail="rotated equation keeps E = +1/2"))

    real_axis = verify.stationary_residual(modes.fbar_mode(0), 0.5, ctx.grid)
    both = max(rep.sup_residual, real_axis.sup_residual)
    out.append(_record("wedge-eigenvalue-match", "eq:3.5", both, bound,
                       both <= bound,
                       detail="both sectors pass at the same eigenvalue 1/2"))

    linear = wedge.wedge_linear_family(ctx.wedge_pair)
    rep = verify.timedep_residual(linear, ctx.wedge_grid, ctx.settings.times)
    out.append(_record("wedge-linear-residual", "eq:3.5,eq:3.6", rep.sup_residual,
                       bound, rep.sup_residual <= bound,
                       detail="exp(r^2/2)(f t + i g) under the rotated equation"))

    # wedge f: window, complement identity, derivative
    violation = 0.0
    for r in (4.0, 5.0, 6.0):
        ratio = 2.0 * r * math.exp(r * r) * gauss_integral_upper(r)
        lo = 1.0 - 1.0 / (2 * r * r) - 1e-3
        violation = max(violation, lo - ratio, ratio - 1.0)
    out.append(_record("wedge-f-tail-window", "eq:3.6", violation, 0.0,
                       violation <= 0.0,
                       detail="worst excursion of f(r) 2r exp(r^2) outside "
                              "[1 - 1/2r^2 - 1e-3, 1] at r in {4,5,6}"))

    dev = max(abs(gauss_integral_upper(r) + gauss_integral_upper(-r) - SQRT_PI)
              for r in (0.0, 1.5, 3.0, 6.0))
    out.append(_record("wedge-f-complement", "eq:3.6", dev, 1e-12, dev <= 1e-12,
                       detail="G(r) + G(-r) = sqrt(pi)"))

    deriv = first_derivative(ctx.wedge_pair.f_values, ctx.settings.grid_step)
    expected = -np.exp(-ctx.wedge_grid.points ** 2)
    dev = float(np.max(np.abs(deriv - expected)[ctx.wedge_grid.interior()]))
    out.append(_record("wedge-f-derivative", "eq:3.6", dev, 1e-8, dev <= 1e-8,
                       detail="stencil f' against -exp(-r^2)"))

    # wedge g: ODE residual and log-slow tail ratio
    g2 = second_derivative(ctx.wedge_pair.g_values, ctx.settings.grid_step)
    g1 = first_derivative(ctx.wedge_pair.g_values, ctx.settings.grid_step)
    residual = g2 + 2.0 * ctx.wedge_grid.points * g1 - 2.0 * ctx.wedge_pair.f_values
    dev = float(np.max(np.abs(residual[ctx.wedge_grid.interior()])))
    out.append(_record("wedge-g-ode-residual", "eq:3.6", dev, 1e-8, dev <= 1e-8,
                       detail="g'' + 2r g' - 2f on the interior"))

    def wedge_ratio(r):
        asym = -math.exp(-r * r) * math.log(r * r) / (4.0 * r)
        return ctx.wedge_tail_pair.g_at(r) / asym

    ratio = wedge_ratio(_LOG_TAIL_POINT)
    out.append(_record("wedge-g-tail-ratio", "eq:3.6", abs(ratio - 1.0), 0.5,
                       abs(ratio - 1.0) <= 0.5,
                       detail=f"ratio {ratio:.4f} at r = {_LOG_TAIL_POINT}"))
    drifts = [abs(wedge_ratio(r) - 1.0) for r in _DRIFT_POINTS + (_LOG_TAIL_POINT,)]
    monotone = all(a > b for a, b in zip(drifts, drifts[1:]))
    out.append(_record("wedge-g-tail-drift", "eq:3.6", drifts[-1], drifts[0],
                       monotone, detail="|ratio - 1| decreasing toward larger r"))

    # psi0hat decaying tail
    r = 5.0
    u = psi0hat.profile(r)
    ratio = u * 2.0 * r / math.exp(-0.5 * r * r)
    lo = 1.0 - 1.0 / (2 * r * r) - 1e-3
    out.append(_record("wedge-psi0hat-tail", "eq:3.5", ratio, 1.0,
                       lo <= ratio <= 1.0,
                       detail=f"profile against exp(-r^2/2)/2r at r = 5, "
                              f"window [{lo:.6f}, 1]"))

    # time-independent, finite inner products on [0, 8]
    table = wedge.wedge_inner_products(ctx.wedge_pair, (0.0, 1.0, 10.0), tol=1e-12)
    out.append(_record("pair-overlaps-time-independent", "eq:4.7", table.max_drift,
                       1e-12, table.max_drift <= 1e-12,
                       detail="four overlaps at t in {0, 1, 10}"))
    zero_entry = max(abs(o.eigen_eigen) for o in table.overlaps)
    out.append(_record("pair-overlaps-zero-norm", "eq:4.2,eq:4.7", zero_entry,
                       0.0, zero_entry <= 0.0, detail="the zero-norm entry"))
    out.append(_record("pair-overlaps-finite", "eq:4.7", table.tail_bound, 1e-10,
                       table.tail_bound <= 1e-10,
                       detail="truncation tail beyond r = 8, rigorous bound"))
    return out


def run_all_checks(settings: CheckSettings | None = None) -> list[CheckRecord]:
    """Run every registered check; records come back in a fixed order."""
    settings = settings or DEFAULTS
    ctx = _Context(settings)
    records: list[CheckRecord] = []
    records += _eigen_residual_checks(ctx)
    records += _growing_integral_checks(ctx)
    records += _fg_pair_checks(ctx)
    records += _linear_mode_checks(ctx)
    records += _free_particle_checks(ctx)
    records += _overlap_checks(ctx)
    records += _jordan_checks(ctx)
    records += _wedge_checks(ctx)
    return records
