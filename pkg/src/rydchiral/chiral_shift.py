r"""Discriminatory Casimir-Polder shift of a moving, circularly polarised
Rydberg atom above a perfect chiral mirror.

Geometry: mirror in the ``z = 0`` plane, atom at ``z_a e_z`` moving with
``v e_x``.  The perfect chiral mirror only cross-couples polarisations,
``r_ss = r_pp = 0`` and ``r_sp = -r_ps = r``.

The curl of the scattering Green tensor (SI units, ``G`` in 1/m so its
curl is in 1/m^2) is evaluated either from the nonretarded closed form

.. math::

    \nabla\times G^{(1)}(r_A, r_A, \omega) = -\frac{i c r}{32\pi\omega z_A^3}\,
    \mathrm{diag}(1, 1, 2)

or by quadrature of the plane-wave (Weyl) expansion of the mirror's Green
tensor.

Phase convention of the resonant shift
--------------------------------------
The resonant-pole shift is assembled as

.. math::

    \hbar\delta_{RM} = \mu_0\omega_{nk}\,
    \mathrm{Im}\bigl[(v\times d_{nk})\cdot C\cdot d_{kn}
                   - (v\times d_{kn})\cdot C\cdot d_{nk}\bigr],

with ``C`` the curl matrix and ``d_kn = conj(d_nk)``.  The antisymmetrised
bracket vanishes identically for real (linearly polarised) dipoles; taking
its imaginary part fixes the overall phase so that the canonical
configuration ``d_kn = d (e_y + i e_z)/sqrt(2)``, ``r = i`` gives exactly
``3 v d^2 / (32 pi eps0 c z_A^3)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import constants as _sc
from scipy.integrate import quad_vec


class NonretardedViolation(UserWarning):
    """The atom is not in the nonretarded regime ``z_a * omega / c << 1``."""


class QuadratureNotConverged(ArithmeticError):
    def __init__(self, message, error_estimate):
        super().__init__(f"{message} (relative error estimate {error_estimate:.3g})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = _sc.c
    # tabulated eps0 and mu0 are rounded independently; derive eps0 so that
    # mu0 * eps0 * c**2 == 1 holds to rounding
    eps0: float = 1.0 / (_sc.mu_0 * _sc.c ** 2)
    mu0: float = _sc.mu_0
    hbar: float = _sc.hbar
    a0: float = _sc.physical_constants["Bohr radius"][0]
    E_R: float = _sc.physical_constants["Rydberg constant times hc in J"][0]
    e: float = _sc.e


CONSTANTS = PhysicalConstants()

NONRETARDED_LIMIT = 0.1


@dataclass(frozen=True)
class ChiralSetup:
    """Moving atom above a chiral mirror.

    ``v`` is the velocity along +x (m/s, sign allowed), ``d`` the transition
    dipole magnitude (C m), ``omega_nk`` the downward transition frequency
    (rad/s), ``z_a`` the atom-mirror distance (m), ``r`` the complex
    cross-polarised reflection coefficient.
    """

    v: float
    d: float
    omega_nk: float
    z_a: float
    r: complex = 1j
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False)

    def __post_init__(self):
        if not self.z_a > 0:
            raise ValueError(f"z_a must be positive, got {self.z_a}")
        if not self.omega_nk > 0:
            raise ValueError(f"omega_nk must be positive, got {self.omega_nk}")
        if abs(self.r) > 1 + 1e-12:
            raise ValueError(f"|r| must not exceed 1, got {abs(self.r)}")

    @property
    def retardation(self) -> float:
        return self.z_a * self.omega_nk / self.constants.c

    @property
    def nonretarded(self) -> bool:
        return self.retardation < NONRETARDED_LIMIT


@dataclass(frozen=True)
class QuadConfig:
    """Settings for :func:`curl_green_numeric`.

    The upper cutoff is ``kmax_factor / z_a``; ``rtol`` is the required
    relative accuracy, checked both against the adaptive error estimate
    and against a second evaluation with doubled cutoff.
    """

    kmax_factor: float = 1e3
    rtol: float = 1e-6
    epsrel: float = 1e-10
    n_phi: int = 8


def canonical_dipole(d: float) -> np.ndarray:
    """``d_kn = d (e_y + i e_z) / sqrt(2)``, rotating in the yz plane."""
    return d / math.sqrt(2.0) * np.array([0.0, 1.0, 1.0j])


def curl_green_analytic(z_a: float, omega: float, r: complex, constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    """Nonretarded curl of the chiral-mirror scattering Green tensor (1/m^2)."""
    pref = -1j * constants.c * r / (32.0 * math.pi * omega * z_a ** 3)
    return pref * np.diag([1.0, 1.0, 2.0]).astype(complex)


def _angular_average(kpar, kperp, k, n_phi):
    """Azimuthal integral of ``i k+ x (e_s+ e_p- - e_p+ e_s-)``.

    The integrand is a trigonometric polynomial of degree 2 in the
    azimuth, so an ``n_phi >= 3`` point periodic rule is exact.
    """
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    ek = np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=-1)
    ez = np.array([0.0, 0.0, 1.0])
    es = np.cross(ek, ez)
    ep_plus = (kpar * ez - kperp * ek) / k
    ep_minus = (kpar * ez + kperp * ek) / k
    kplus = kpar * ek + kperp * ez
    curl_s = 1j * np.cross(kplus, es)
    curl_p = 1j * np.cross(kplus, ep_plus)
    t = np.einsum("ai,aj->ij", curl_s, ep_minus) - np.einsum("ai,aj->ij", curl_p, es)
    return t * (2.0 * math.pi / n_phi)


def _radial_integral(z_a, k, kmax, cfg):
    """Integral over k_par of the angular-averaged kernel, split into the
    propagating (k_par < k) and evanescent (k_par > k) parts.

    Substitutions ``k_par = k sin(t)`` and ``k_par = k cosh(u)`` remove the
    inverse-square-root singularity of ``1/k_perp`` at ``k_par = k``.
    """
    def pack(m):
        return np.concatenate([m.real.ravel(), m.imag.ravel()])

    def propagating(t):
        kpar, kperp = k * math.sin(t), k * math.cos(t)
        return pack(_angular_average(kpar, kperp, k, cfg.n_phi) * kpar * np.exp(2j * kperp * z_a))

    def evanescent(u):
        kpar, kappa = k * math.cosh(u), k * math.sinh(u)
        # dk_par / k_perp = -i du with k_perp = i kappa
        return pack(_angular_average(kpar, 1j * kappa, k, cfg.n_phi) * kpar * math.exp(-2.0 * kappa * z_a) * -1j)

    a, err_a = quad_vec(propagating, 0.0, math.pi / 2, epsrel=cfg.epsrel, epsabs=0.0)
    b, err_b = quad_vec(evanescent, 0.0, math.acosh(max(kmax / k, 1.0)), epsrel=cfg.epsrel, epsabs=0.0)
    total = a + b
    return total[:9] + 1j * total[9:], err_a + err_b


def curl_green_numeric(z_a: float, omega: float, r: complex, quad: QuadConfig | None = None,
                       constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    r"""Curl of the chiral-mirror scattering Green tensor at coincident
    points, by quadrature of

    .. math::

        G^{(1)}(r, r', \omega) = \frac{i}{8\pi^2}\int \frac{d^2k_\parallel}{k_\perp}
        e^{i k_\parallel\cdot(r - r') + i k_\perp (z + z')}
        \, r\,(e_{s+} e_{p-} - e_{p+} e_{s-}),

    with ``e_s = e_k x e_z`` and ``e_p(+/-) = (k_par e_z -/+ k_perp e_k)/k``.
    The curl acts on the first position argument.

    Raises
    ------
    QuadratureNotConverged
        if the error estimate or the cutoff-doubling check exceeds ``quad.rtol``.
    """
    cfg = quad or QuadConfig()
    if z_a * omega / constants.c >= NONRETARDED_LIMIT:
        warnings.warn(f"z_a*omega/c = {z_a * omega / constants.c:.3g}; comparison with the "
                      "nonretarded closed form is not meaningful", NonretardedViolation, stacklevel=2)
    k = omega / constants.c
    kmax = cfg.kmax_factor / z_a
    vals, err = _radial_integral(z_a, k, kmax, cfg)
    vals2, _ = _radial_integral(z_a, k, 2.0 * kmax, cfg)
    size = np.max(np.abs(vals2))
    if size > 0:
        rel_err = float(np.sum(err)) / size
        rel_cut = float(np.max(np.abs(vals2 - vals))) / size
        if rel_err > cfg.rtol or rel_cut > cfg.rtol:
            raise QuadratureNotConverged("Green tensor quadrature", max(rel_err, rel_cut))
    return (1j / (8.0 * math.pi ** 2)) * r * vals.reshape(3, 3)


def resonant_chiral_shift(setup: ChiralSetup, d_nk, curl_source: str = "analytic",
                          quad: QuadConfig | None = None) -> float:
    """Chiral shift delta_RM (rad/s) from one downward transition n -> k.

    ``d_nk`` is the complex dipole matrix element; ``d_kn = conj(d_nk)``.
    ``curl_source`` selects ``"analytic"`` or ``"numeric"`` curl matrices.
    Sums over several lower levels are sums of calls.
    """
    c0 = setup.constants
    if not setup.nonretarded:
        warnings.warn(f"z_a*omega/c = {setup.retardation:.3g} outside the nonretarded regime",
                      NonretardedViolation, stacklevel=2)
    if curl_source == "analytic":
        curl = curl_green_analytic(setup.z_a, setup.omega_nk, setup.r, c0)
    elif curl_source == "numeric":
        curl = curl_green_numeric(setup.z_a, setup.omega_nk, setup.r, quad, c0)
    else:
        raise ValueError(f"unknown curl_source {curl_source!r}")
    d_nk = np.asarray(d_nk, dtype=complex)
    d_kn = d_nk.conj()
    v = np.array([setup.v, 0.0, 0.0])
    bracket = np.cross(v, d_nk) @ curl @ d_kn - np.cross(v, d_kn) @ curl @ d_nk
    return c0.mu0 * setup.omega_nk * bracket.imag / c0.hbar


def closed_form_shift(setup: ChiralSetup) -> float:
    """``3 v d^2 |r| / (32 pi eps0 c z_a^3 hbar)`` in rad/s."""
    c0 = setup.constants
    return 3.0 * setup.v * setup.d ** 2 * abs(setup.r) / (32.0 * math.pi * c0.eps0 * c0.c * setup.z_a ** 3 * c0.hbar)


def ordinary_electric_shift(d: float, z_a: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Resonant shift of a stationary atom near a perfect conductor, rad/s."""
    if not z_a > 0:
        raise ValueError("z_a must be positive")
    return 3.0 * d ** 2 / (128.0 * math.pi * constants.eps0 * z_a ** 3 * constants.hbar)


def dipole_for_ordinary_shift(delta: float, z_a: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Dipole moment (C m) whose ordinary shift at ``z_a`` equals ``delta`` (rad/s)."""
    return math.sqrt(delta * 128.0 * math.pi * constants.eps0 * z_a ** 3 * constants.hbar / 3.0)


def orbital_speed(n: int, constants: PhysicalConstants = CONSTANTS) -> float:
    """``a_n * omega_kn`` with ``a_n = a0 n^2`` and ``omega_kn = 2 E_R / (hbar n^3)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return constants.a0 * n ** 2 * 2.0 * constants.E_R / (constants.hbar * n ** 3)


def helix_slope(n: int, v: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Slope ``v / (a_n omega_kn)`` of the helix traced by the rotating dipole."""
    if v < 0:
        raise ValueError("v must be non-negative")
    return v / orbital_speed(n, constants)
