r"""Dressed three-level ladder: effective Hamiltonian, eigensystem and
transduction of a Rydberg-level shift onto the upper clock state.

States are ordered ``|1>`` (upper hyperfine ground level), ``|2>``
(intermediate 5P level) and ``|3>`` (Rydberg level).  The effective
non-Hermitian Hamiltonian in units of hbar reads

.. math::

    H/\hbar = \begin{pmatrix}
        -i\Gamma_1 & \Omega_{12}/2 & 0 \\
        \Omega_{12}/2 & -i\Gamma_2 + \Delta_1 & \Omega_{23}/2 \\
        0 & \Omega_{23}/2 & -i\Gamma_3 + \Delta_2 + \delta_{RM}
    \end{pmatrix}

Everything in this module is an angular frequency (rad/s).  The decay
rates enter the diagonal literally, i.e. an amplitude evolves as
``exp(-1j * lam * t)`` and no factor-of-two population convention is
applied.

The matrix is complex *symmetric* (not Hermitian), so eigenvectors are
compared with the bilinear form ``v.T @ w`` where perturbation theory is
concerned and with the Hermitian overlap ``|v^H w|`` for branch tracking.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

TWO_PI = 2.0 * math.pi

# Decay rates quoted for 87Rb (Gamma/2pi in Hz).
GAMMA1_HZ = 1.0
GAMMA2_HZ = 3.8e7
GAMMA3_HZ = 1.4e5

_CUBE_ROOTS_OF_UNITY = (1.0 + 0j, cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3))


class DegenerateEigenvectors(ArithmeticError):
    """Coinciding eigenvalues without a full set of eigenvectors."""


class AmbiguousMatch(ArithmeticError):
    """Eigenvector overlaps do not single out a unique branch."""


@dataclass(frozen=True)
class DressingConfig:
    """Laser and decay parameters of the ladder, all in rad/s."""

    omega12: float
    omega23: float
    delta1: float = 0.0
    delta2: float = 0.0
    gamma1: float = TWO_PI * GAMMA1_HZ
    gamma2: float = TWO_PI * GAMMA2_HZ
    gamma3: float = TWO_PI * GAMMA3_HZ

    def __post_init__(self):
        for name in ("omega12", "omega23", "delta1", "delta2", "gamma1", "gamma2", "gamma3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        for name in ("gamma1", "gamma2", "gamma3", "omega12", "omega23"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")

    @classmethod
    def from_hz(cls, omega12, omega23, delta1=0.0, delta2=0.0,
                gamma1=GAMMA1_HZ, gamma2=GAMMA2_HZ, gamma3=GAMMA3_HZ):
        """Build from linear frequencies (value/2pi, in Hz)."""
        return cls(TWO_PI * omega12, TWO_PI * omega23, TWO_PI * delta1, TWO_PI * delta2,
                   TWO_PI * gamma1, TWO_PI * gamma2, TWO_PI * gamma3)

    def with_detunings(self, delta1: float, delta2: float) -> "DressingConfig":
        return DressingConfig(self.omega12, self.omega23, delta1, delta2,
                              self.gamma1, self.gamma2, self.gamma3)

    @property
    def rates(self) -> tuple[float, float, float]:
        return (self.gamma1, self.gamma2, self.gamma3)


@dataclass
class DressedSolution:
    """Eigenpairs of a 3x3 complex matrix.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``; ``admixtures[i]``
    holds the bare-state probabilities ``(P1, P2, P3)`` of that eigenvector.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    admixtures: np.ndarray
    selected: int | None = None


@dataclass
class GroundShiftResult:
    shift: float
    decay: float
    admixtures: np.ndarray
    figure_of_merit: float
    selected: int
    eigenvalue: complex


def build_hamiltonian(cfg: DressingConfig, delta_rm: float = 0.0) -> np.ndarray:
    """Effective Hamiltonian divided by hbar, in rad/s."""
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = -1j * cfg.gamma1
    h[1, 1] = cfg.delta1 - 1j * cfg.gamma2
    h[2, 2] = (cfg.delta2 + delta_rm) - 1j * cfg.gamma3
    h[0, 1] = h[1, 0] = 0.5 * cfg.omega12
    h[1, 2] = h[2, 1] = 0.5 * cfg.omega23
    return h


# -- small dense helpers on nested tuples (faster than numpy at 3x3) -------

def _rows(m):
    return tuple(tuple(complex(x) for x in row) for row in np.asarray(m, dtype=complex))


def _shifted(rows, lam):
    """Rows of ``M - lam*I``."""
    return tuple(tuple(rows[i][j] - (lam if i == j else 0.0) for j in range(3)) for i in range(3))


def _cross(a, b):
    # bilinear cross product, no conjugation: a.(a x b) = 0 for complex a, b
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _norm(v):
    return math.sqrt(sum(abs(x) ** 2 for x in v))


def _charpoly(rows, x):
    """det(x I - M) and its first derivative at x."""
    a = [[(x if i == j else 0.0) - rows[i][j] for j in range(3)] for i in range(3)]
    m00 = a[1][1] * a[2][2] - a[1][2] * a[2][1]
    m11 = a[0][0] * a[2][2] - a[0][2] * a[2][0]
    m22 = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    det = (a[0][0] * m00
           - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
           + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    return det, m00 + m11 + m22


def _cubic_roots(rows):
    tr = rows[0][0] + rows[1][1] + rows[2][2]
    e2 = (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
          + rows[0][0] * rows[2][2] - rows[0][2] * rows[2][0]
          + rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
    det, _ = _charpoly(rows, 0.0)
    det = -det
    # x^3 + a x^2 + b x + c
    a, b, c = -tr, e2, -det
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    sq = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    w1, w2 = -q / 2.0 + sq, -q / 2.0 - sq
    w = w1 if abs(w1) >= abs(w2) else w2
    if w == 0:
        return [-a / 3.0] * 3
    u = w ** (1.0 / 3.0)
    roots = []
    for z in _CUBE_ROOTS_OF_UNITY:
        uk = u * z
        roots.append(uk - p / (3.0 * uk) - a / 3.0)
    return roots


def _polish(rows, lam, scale):
    for _ in range(3):
        f, df = _charpoly(rows, lam)
        if df == 0:
            break
        step = f / df
        if not cmath.isfinite(step):
            break
        lam -= step
        if abs(step) <= 4e-16 * scale:
            break
    return lam


def _null_vector(rows, lam):
    """Right eigenvector for a simple eigenvalue: adjugate column + one
    inverse-iteration sweep (the adjugate is ``det * inverse``)."""
    a = _shifted(rows, lam)
    cols = (_cross(a[1], a[2]), _cross(a[2], a[0]), _cross(a[0], a[1]))
    norms = [_norm(col) for col in cols]
    k = max(range(3), key=norms.__getitem__)
    if norms[k] == 0.0:
        return None
    x0 = tuple(z / norms[k] for z in cols[k])
    x1 = tuple(cols[0][i] * x0[0] + cols[1][i] * x0[1] + cols[2][i] * x0[2] for i in range(3))
    n1 = _norm(x1)
    if n1 > 0.0 and math.isfinite(n1):
        return tuple(z / n1 for z in x1)
    return x0


def _null_space(m, lam, tol):
    """Basis of ker(m - lam I) with unit entries at pivot columns."""
    a = np.asarray(m, dtype=complex) - lam * np.eye(3)
    _, s, vh = np.linalg.svd(a)
    basis = vh[s <= tol].conj().T
    k = basis.shape[1]
    if k == 0:
        return basis
    bt = basis.T
    best = max(combinations(range(3), k), key=lambda cols: abs(np.linalg.det(bt[:, cols])))
    reduced = np.linalg.solve(bt[:, best], bt)
    return (reduced / np.linalg.norm(reduced, axis=1, keepdims=True)).T


def _fix_phase(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    for z in v:
        if abs(z) > 1e-14:
            return v * (abs(z) / z)
    return v


def _admixtures(vecs):
    p = np.abs(vecs.T) ** 2
    return p / p.sum(axis=1, keepdims=True)


def solve_eigensystem(m) -> DressedSolution:
    """Eigenvalues (sorted ascending by real part) and unit eigenvectors.

    Roots of the characteristic cubic come from Cardano's formula and are
    then Newton-polished on ``det(x I - M)`` evaluated by cofactors.

    Raises
    ------
    DegenerateEigenvectors
        if eigenvalues coincide within ``1e-12 * ||m||`` and the eigenspace
        is too small to provide independent eigenvectors.
    """
    rows = _rows(m)
    scale = math.sqrt(sum(abs(x) ** 2 for row in rows for x in row))
    if not math.isfinite(scale):
        raise ValueError("matrix entries must be finite")
    if scale == 0.0:
        ev = np.zeros(3, dtype=complex)
        vecs = np.eye(3, dtype=complex)
        return DressedSolution(ev, vecs, _admixtures(vecs))

    lams = [_polish(rows, lam, scale) for lam in _cubic_roots(rows)]
    lams.sort(key=lambda z: (z.real, z.imag))

    # Multiple roots of the characteristic polynomial come back split by up to
    # ~sqrt(eps); group such candidates and let the null space decide.
    window = 1e-6 * scale
    clusters = []
    for i, lam in enumerate(lams):
        if clusters and abs(lam - lams[clusters[-1][0]]) <= window:
            clusters[-1].append(i)
        else:
            clusters.append([i])

    vecs = np.empty((3, 3), dtype=complex)
    for group in clusters:
        if len(group) > 1:
            # the trace pins the cluster mean far better than the split roots do
            others = sum(lams[i] for i in range(3) if i not in group)
            lam = (rows[0][0] + rows[1][1] + rows[2][2] - others) / len(group)
            basis = _null_space(m, lam, 1e-10 * scale)
            if basis.shape[1] >= len(group):
                for j, i in enumerate(group):
                    lams[i] = lam
                    vecs[:, i] = _fix_phase(basis[:, j])
                continue
        for i in group:
            v = _null_vector(rows, lams[i])
            if v is None:
                raise DegenerateEigenvectors(f"no eigenvector resolved at {lams[i]}")
            vecs[:, i] = _fix_phase(v)

    # a defective eigenvalue has a one-dimensional eigenspace: its split
    # roots produce collinear eigenvectors
    gram = np.abs(vecs.conj().T @ vecs)
    for i, j in combinations(range(3), 2):
        if gram[i, j] > 1.0 - 1e-10:
            raise DegenerateEigenvectors(
                f"eigenvalues {lams[i]} and {lams[j]} share one eigenvector (defective)")

    ev = np.array(lams, dtype=complex)
    return DressedSolution(ev, vecs, _admixtures(vecs))


def select_dressed_state(sol: DressedSolution, delta1: float, delta2: float) -> int:
    """Quadrant rule for which dressed branch carries the ground state.

    Both detunings >= 0 picks the lowest branch, both < 0 the highest,
    mixed signs the intermediate one.  Zero counts as positive.
    """
    pos1, pos2 = delta1 >= 0, delta2 >= 0
    if pos1 and pos2:
        return 0
    if not pos1 and not pos2:
        return 2
    return 1


def match_branch(sol_a: DressedSolution, sol_b: DressedSolution) -> tuple[int, int, int]:
    """``perm[i]`` is the branch of ``sol_b`` that continues branch ``i`` of ``sol_a``."""
    va, vb = sol_a.eigenvectors, sol_b.eigenvectors
    overlap = np.abs(va.conj().T @ vb)
    for i in range(3):
        best, second = np.sort(overlap[i])[::-1][:2]
        if best - second < 1e-6:
            raise AmbiguousMatch(f"branch {i}: overlaps {best:.9g} and {second:.9g}")
    pairs = sorted(
        ((i, j) for i in range(3) for j in range(3)),
        key=lambda ij: (-overlap[ij], abs(sol_a.eigenvalues[ij[0]] - sol_b.eigenvalues[ij[1]])),
    )
    perm = [-1, -1, -1]
    used = set()
    for i, j in pairs:
        if perm[i] < 0 and j not in used:
            perm[i] = j
            used.add(j)
    return tuple(perm)


def figure_of_merit(shift, admixtures, rates, fringe_period=False) -> float:
    """Ramsey contrast proxy ``sum_i P_i exp(-Gamma_i / |shift|)``.

    With ``fringe_period=True`` the exponent uses the full fringe period
    ``2 pi / |shift|`` instead of ``1 / |shift|``.  Returns 0 for a zero
    shift (infinitely long fringe period).
    """
    if shift == 0:
        return 0.0
    t = (TWO_PI if fringe_period else 1.0) / abs(shift)
    return float(sum(p * math.exp(-g * t) for p, g in zip(admixtures, rates)))


def perturbation_slope(sol: DressedSolution, index: int) -> complex:
    """d lambda / d delta_RM for a simple eigenvalue: ``v3^2 / (v^T v)``."""
    v = sol.eigenvectors[:, index]
    return complex(v[2] ** 2 / (v @ v))


def _refine_shift(rows0, lam0, delta_rm, guess):
    """Eigenvalue displacement ``s`` with ``lam0 + s`` a root of
    ``det(x I - M0) - delta_rm * q(x)``.

    Working on the displacement keeps its relative accuracy at machine
    precision even when ``|s| << |lam0|``.
    """
    tr = rows0[0][0] + rows0[1][1] + rows0[2][2]
    _, d1 = _charpoly(rows0, lam0)
    d2 = 3.0 * lam0 - tr
    m00, m11 = rows0[0][0], rows0[1][1]
    c01 = rows0[0][1] * rows0[1][0]
    s = guess
    for _ in range(20):
        x = lam0 + s
        g = d1 * s + d2 * s * s + s ** 3 - delta_rm * ((x - m00) * (x - m11) - c01)
        dg = d1 + 2.0 * d2 * s + 3.0 * s * s - delta_rm * (2.0 * x - m00 - m11)
        if dg == 0:
            break
        step = g / dg
        s -= step
        if abs(step) <= 1e-16 * abs(s) or step == 0:
            break
    return s


def ground_shift(cfg: DressingConfig, delta_rm: float, fringe_period: bool = False) -> GroundShiftResult:
    """Energy shift (rad/s) of the dressed upper ground state caused by a
    Rydberg-level shift ``delta_rm``.

    The branch is chosen by :func:`select_dressed_state` on the unshifted
    Hamiltonian and followed to the shifted one by eigenvector overlap.
    """
    h0 = build_hamiltonian(cfg, 0.0)
    sol0 = solve_eigensystem(h0)
    sel0 = select_dressed_state(sol0, cfg.delta1, cfg.delta2)
    sol0.selected = sel0
    lam0 = complex(sol0.eigenvalues[sel0])

    if delta_rm == 0:
        sol1, sel1, s = sol0, sel0, 0j
    else:
        sol1 = solve_eigensystem(build_hamiltonian(cfg, delta_rm))
        sel1 = match_branch(sol0, sol1)[sel0]
        s = _refine_shift(_rows(h0), lam0, delta_rm, complex(sol1.eigenvalues[sel1]) - lam0)
    lam1 = lam0 + s
    adm = sol1.admixtures[sel1].copy()
    shift = s.real
    fom = figure_of_merit(shift, adm, cfg.rates, fringe_period)
    return GroundShiftResult(shift=shift, decay=-lam1.imag, admixtures=adm,
                             figure_of_merit=fom, selected=sel0, eigenvalue=lam1)
