"""Exceptional-point algebra: 2x2 Jordan blocks, their exact non-unitary time
evolution, left/right eigenvectors with zero mutual norm, pseudo-Hermiticity
under V = sigma_1, and the time-independent overlaps of the mode-pair
solutions.

A level block is M = E*I + N with N the nilpotent upper-right unit.  M has a
single right eigenvector (1,0)^T and a single left eigenvector (0,1); their
overlap vanishes, which is the zero-norm signature of an exceptional point.
Because N^2 = 0 the evolution exponential terminates:

    exp(-iMt) (a, b)^T = exp(-iEt) (a - i t b, b)^T,

so states with b != 0 grow linearly in t while <s| sigma_1 |s> stays constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import adaptive_quad

__all__ = [
    "SIGMA1",
    "StateVec2",
    "JordanBlock",
    "BlockDiagonalH",
    "evolve",
    "right_eigenvector",
    "left_eigenvector",
    "pseudo_hermiticity_check",
    "schrodinger_pair_solutions",
    "pair_solution_mismatch",
    "PairOverlaps",
    "pair_overlaps",
    "assemble",
]

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class StateVec2:
    """Column state (a, b) living in one level block."""

    a: complex
    b: complex

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("state components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "StateVec2":
        arr = np.asarray(arr, dtype=complex)
        return cls(complex(arr[0]), complex(arr[1]))


@dataclass(frozen=True)
class JordanBlock:
    """One level block E*I + N.  Real energies are the physical case; complex
    energies are admitted so the conjugate-pair branch of the antilinear
    eigenvalue dichotomy can be exercised."""

    energy: complex = 1.0

    @property
    def matrix(self) -> np.ndarray:
        return self.energy * np.eye(2, dtype=complex) + _NILPOTENT


def evolve(block: JordanBlock, state: StateVec2, t: float) -> StateVec2:
    """Exact evolution exp(-iMt) s = exp(-iEt) (a - itb, b); no matrix
    exponential approximation is involved."""
    phase = np.exp(-1j * block.energy * t)
    return StateVec2(phase * (state.a - 1j * t * state.b), phase * state.b)


def right_eigenvector(block: JordanBlock) -> StateVec2:
    """The lone right eigenvector (1, 0)^T."""
    return StateVec2(1.0, 0.0)


def left_eigenvector(block: JordanBlock) -> np.ndarray:
    """The lone left eigenvector, the row (0, 1)."""
    return np.array([0.0, 1.0], dtype=complex)


def pseudo_hermiticity_check(block) -> tuple[bool, float]:
    """Check sigma_1 M sigma_1 == M^dagger elementwise.

    Accepts a JordanBlock or a raw 2x2 matrix (so perturbed detectors can be
    probed).  Returns (ok, residual) with residual the max elementwise
    deviation; conforming real-energy blocks give exactly 0.
    """
    m = block.matrix if isinstance(block, JordanBlock) else np.asarray(block, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    deviation = SIGMA1 @ m @ SIGMA1 - m.conj().T
    residual = float(np.max(np.abs(deviation)))
    return residual == 0.0, residual


# ---------------------------------------------------------------------------
# mode-pair solutions attached to a block
# ---------------------------------------------------------------------------

def schrodinger_pair_solutions(pair, energy: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Right column and left row solutions of i d/dt v = M v built from a
    (f, g) pair sampled on its grid.

    right = (exp(-iEt)(g - itf), exp(-iEt) f)^T
    left  = (exp(+iEt) f*,       exp(+iEt)(g* + itf*))

    Both satisfy their block Schrodinger equations identically in t; the
    returned arrays have shape (2, n_grid).
    """
    f = np.asarray(pair.f_values, dtype=complex)
    g = np.asarray(pair.g_values, dtype=complex)
    phase = np.exp(-1j * energy * t)
    right = np.stack([phase * (g - 1j * t * f), phase * f])
    left = np.stack([np.conj(phase) * np.conj(f),
                     np.conj(phase) * (np.conj(g) + 1j * t * np.conj(f))])
    return right, left


def pair_solution_mismatch(pair, energy: float, t: float) -> tuple[float, float]:
    """Max pointwise mismatch of i d/dt right = M right and -i d/dt left = left M,
    with the time derivatives taken in closed form."""
    f = np.asarray(pair.f_values, dtype=complex)
    g = np.asarray(pair.g_values, dtype=complex)
    right, left = schrodinger_pair_solutions(pair, energy, t)
    m = JordanBlock(energy).matrix

    phase = np.exp(-1j * energy * t)
    dt_right = np.stack([-1j * energy * right[0] - 1j * phase * f,
                         -1j * energy * right[1]])
    dt_left = np.stack([1j * energy * left[0],
                        1j * energy * left[1] + 1j * np.conj(phase) * np.conj(f)])

    res_right = float(np.max(np.abs(1j * dt_right - m @ right)))
    res_left = float(np.max(np.abs(-1j * dt_left - (left.T @ m).T)))
    return res_right, res_left


@dataclass(frozen=True)
class PairOverlaps:
    """The four left-right overlaps of the pair solutions, integrated over r.

    full_full  = int (f* g + g* f)      full_eigen = int f*
    eigen_full = int f                  eigen_eigen = 0   (the zero-norm entry)

    All four are time independent; the phases and the +-itf^2 cross terms
    cancel inside the integrand, and the cancellation is performed numerically
    rather than assumed.
    """

    full_full: complex
    eigen_eigen: complex
    full_eigen: complex
    eigen_full: complex

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return (self.full_full, self.eigen_eigen, self.full_eigen, self.eigen_full)


def pair_overlaps(pair, t: float, domain: tuple[float, float],
                  energy: float = 1.0, tol: float = 1e-12) -> PairOverlaps:
    """Integrate the four bra-ket products of the block solutions over `domain`.

    The integrands are assembled with their time-dependent phases in place, so
    the reported time independence is a genuine numerical check.
    """
    r0, r1 = domain
    if not r0 < r1:
        raise ValueError("domain must satisfy r0 < r1")
    phase = np.exp(-1j * energy * t)
    lphase = np.conj(phase)

    def components(r: float):
        f = complex(pair.f_at(r))
        g = complex(pair.g_at(r))
        r_full = (phase * (g - 1j * t * f), phase * f)
        l_full = (lphase * np.conj(f), lphase * (np.conj(g) + 1j * t * np.conj(f)))
        r_eigen = (phase, 0.0)
        l_eigen = (0.0, lphase)
        return r_full, l_full, r_eigen, l_eigen

    def integrand(which: str):
        def w(r: float) -> complex:
            r_full, l_full, r_eigen, l_eigen = components(r)
            if which == "full_full":
                return l_full[0] * r_full[0] + l_full[1] * r_full[1]
            if which == "eigen_eigen":
                return l_eigen[0] * r_eigen[0] + l_eigen[1] * r_eigen[1]
            if which == "full_eigen":
                return l_full[0] * r_eigen[0] + l_full[1] * r_eigen[1]
            return l_eigen[0] * r_full[0] + l_eigen[1] * r_full[1]
        return w

    results = {}
    for which in ("full_full", "eigen_eigen", "full_eigen", "eigen_full"):
        w = integrand(which)
        real = adaptive_quad(lambda r: w(r).real, r0, r1, tol=tol)
        imag = adaptive_quad(lambda r: w(r).imag, r0, r1, tol=tol)
        results[which] = complex(real, imag)
    return PairOverlaps(**results)


# ---------------------------------------------------------------------------
# block-diagonal assembly across levels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockDiagonalH:
    """Direct sum of level blocks with energies E_n = n + 1/2.

    Evolution factorizes blockwise, and pseudo-Hermiticity holds with the
    direct sum of sigma_1 as the metric.
    """

    blocks: tuple[JordanBlock, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("need at least one block")

    @property
    def dim(self) -> int:
        return 2 * len(self.blocks)

    @property
    def matrix(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i, block in enumerate(self.blocks):
            out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = block.matrix
        return out

    @property
    def v_matrix(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(len(self.blocks)):
            out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = SIGMA1
        return out

    def evolve_state(self, state, t: float) -> np.ndarray:
        state = np.asarray(state, dtype=complex)
        if state.shape != (self.dim,):
            raise ValueError(f"state must have dimension {self.dim}")
        out = np.empty_like(state)
        for i, block in enumerate(self.blocks):
            evolved = evolve(block, StateVec2(state[2 * i], state[2 * i + 1]), t)
            out[2 * i], out[2 * i + 1] = evolved.a, evolved.b
        return out

    def v_norm(self, state) -> float:
        """<s|V|s> with V the direct sum of sigma_1; conserved under evolve_state."""
        state = np.asarray(state, dtype=complex)
        value = np.conj(state) @ self.v_matrix @ state
        return float(value.real)


def assemble(levels: int) -> BlockDiagonalH:
    """Stack `levels` blocks with energies 1/2, 3/2, ..., levels - 1/2."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    return BlockDiagonalH(tuple(JordanBlock(n + 0.5) for n in range(levels)))
