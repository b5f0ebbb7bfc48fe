"""Dirac sea ensembles in a spatial box with periodic boundary conditions.

Negative-energy plane-wave solutions of the Dirac equation on R x [-L, L]^3
below an energy cutoff 1/eps span a finite-dimensional Hilbert space; the
local correlation operators and the two-point kernel of such an ensemble
furnish concrete regular causal-fermion data at spin dimension 2.

Conventions: metric signature (+, -, -, -); gamma matrices in the Dirac
representation; the spinor space carries the indefinite inner product
psi^dag gamma^0 phi of signature (2, 2); momentum modes live on the lattice
(pi/L) Z^3, with frequency sign fixed to -1 (the Dirac sea), so a mode's
four-momentum is k = (-omega, k_vec) with omega = sqrt(|k_vec|^2 + m^2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .correlation import _fix_column_phases, hermitize, local_correlation
from .errors import EmptyCutoff, MasslessNormalization, TooFewModes

_SIGMA = (
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

_ZERO2 = np.zeros((2, 2), dtype=complex)
_EYE2 = np.eye(2, dtype=complex)

#: Dirac-representation gamma matrices, upper index 0..3
GAMMA = (
    np.block([[_EYE2, _ZERO2], [_ZERO2, -_EYE2]]),
    np.block([[_ZERO2, _SIGMA[0]], [-_SIGMA[0], _ZERO2]]),
    np.block([[_ZERO2, _SIGMA[1]], [-_SIGMA[1], _ZERO2]]),
    np.block([[_ZERO2, _SIGMA[2]], [-_SIGMA[2], _ZERO2]]),
)

#: Gram matrix of the spinor inner product psi^dag gamma^0 phi
SPINOR_GRAM = GAMMA[0]

#: Minkowski metric diag(1, -1, -1, -1)
ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def gamma_matrices():
    """The four gamma matrices and the spinor Gram matrix gamma^0."""
    return GAMMA, SPINOR_GRAM


def slash(v) -> np.ndarray:
    """Contraction v_mu gamma^mu = v^0 gamma^0 - v . gamma_spatial."""
    v = np.asarray(v)
    return (v[0] * GAMMA[0] - v[1] * GAMMA[1]
            - v[2] * GAMMA[2] - v[3] * GAMMA[3])


def minkowski_dot(a, b) -> float:
    """Minkowski product a^0 b^0 - a_vec . b_vec."""
    a = np.asarray(a)
    b = np.asarray(b)
    return float(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3])


@dataclass(frozen=True)
class DiracBoxConfig:
    """Box half-length L, energy cutoff scale eps, and mass m (hbar = c = 1)."""

    L: float
    eps: float
    m: float

    def __post_init__(self):
        if not (self.L > 0.0):
            raise ValueError("box half-length L must be positive")
        if not (self.eps > 0.0):
            raise ValueError("cutoff scale eps must be positive")
        if self.m < 0.0:
            raise ValueError("mass m must be nonnegative")

    def point(self, t: float, x_vec) -> "SpacetimePoint":
        """A spacetime point with spatial components reduced into [-L, L)."""
        return SpacetimePoint.in_box(t, x_vec, self.L)


@dataclass(frozen=True)
class SpacetimePoint:
    """Point (t, x_vec) of the periodically continued box."""

    t: float
    x_vec: tuple

    @classmethod
    def in_box(cls, t: float, x_vec, L: float) -> "SpacetimePoint":
        reduced = tuple(((float(c) + L) % (2.0 * L)) - L for c in x_vec)
        return cls(t=float(t), x_vec=reduced)


@dataclass(frozen=True)
class MomentumMode:
    """One occupied sea state: lattice momentum, frequency, polarization.

    ``n_vec`` are the integer lattice coordinates, ``k_vec = (pi / L) n_vec``
    the physical momentum, ``a`` the polarization index in {1, 2}; the
    frequency sign ``s`` is always -1 for the sea ensemble.
    """

    n_vec: tuple
    k_vec: tuple
    omega: float
    a: int
    s: int = -1

    @property
    def four_momentum(self) -> tuple:
        return (-self.omega,) + self.k_vec


def momentum_modes(cfg: DiracBoxConfig) -> list[MomentumMode]:
    """All sea modes below the cutoff, in deterministic order.

    Enumerates lattice momenta k in (pi/L) Z^3 with omega(k) < 1/eps (strict)
    and pairs each with the two polarizations; for m = 0 the zero mode is
    excluded.  Ordering is lexicographic in (|k|^2, k1, k2, k3, a).  Raises
    EmptyCutoff when no mode satisfies the bound.
    """
    step = math.pi / cfg.L
    cutoff_sq = 1.0 / cfg.eps ** 2 - cfg.m ** 2
    if cutoff_sq <= 0.0:
        raise EmptyCutoff("energy cutoff lies below the mass gap")
    nmax = int(math.floor(math.sqrt(cutoff_sq) / step))
    entries = []
    for n in itertools.product(range(-nmax, nmax + 1), repeat=3):
        n_sq = n[0] * n[0] + n[1] * n[1] + n[2] * n[2]
        if cfg.m == 0.0 and n_sq == 0:
            continue
        k_sq = (step * step) * n_sq
        if k_sq >= cutoff_sq:
            continue
        entries.append((n_sq, n))
    if not entries:
        raise EmptyCutoff("no lattice momentum lies below the energy cutoff")
    entries.sort()
    modes = []
    for n_sq, n in entries:
        k_vec = tuple(step * c for c in n)
        omega = math.sqrt((step * step) * n_sq + cfg.m ** 2)
        for a in (1, 2):
            modes.append(MomentumMode(n_vec=n, k_vec=k_vec, omega=omega, a=a))
    return modes


def momentum_points(cfg: DiracBoxConfig) -> list[MomentumMode]:
    """One representative mode (a = 1) per occupied lattice momentum."""
    return [mode for mode in momentum_modes(cfg) if mode.a == 1]


def chi_spinors(mode: MomentumMode, m: float) -> np.ndarray:
    """Pseudo-orthonormal momentum-space solutions for a sea mode (m > 0).

    Columns chi_1, chi_2 solve (kslash - m) chi = 0 at k = (-omega, k_vec)
    and satisfy <chi_a | chi_b> = -delta_ab in the spinor inner product.
    Built by applying kslash + m to the constant spinors e_3, e_4 and
    orthonormalizing in the spin inner product; deterministic in k.
    """
    if m <= 0.0:
        raise MasslessNormalization(
            "spin normalization of the sea spinors degenerates at m = 0"
        )
    kslash = slash(mode.four_momentum)
    seed = kslash + m * np.eye(4)
    raw = [seed[:, 2].copy(), seed[:, 3].copy()]

    def spin_inner(u, v):
        return complex(np.vdot(u, SPINOR_GRAM @ v))

    chis = []
    for vec in raw:
        for prev in chis:
            # <prev | prev> = -1, so the projection coefficient flips sign
            vec = vec + prev * spin_inner(prev, vec)
        norm_sq = -spin_inner(vec, vec).real
        chis.append(vec / math.sqrt(norm_sq))
    return np.column_stack(chis)


def sea_spinors(mode: MomentumMode, m: float) -> np.ndarray:
    """Euclidean-orthonormal negative-energy spinors, valid for any m >= 0.

    Columns span the same solution space as ``chi_spinors`` but are
    orthonormal in the plain C^4 product (eigenvectors of the momentum-space
    Dirac Hamiltonian with eigenvalue -omega), which stays well defined in
    the massless case where the spin normalization degenerates.
    """
    k = mode.k_vec
    hamiltonian = GAMMA[0] @ (k[0] * GAMMA[1] + k[1] * GAMMA[2]
                              + k[2] * GAMMA[3]) + m * GAMMA[0]
    vals, vecs = np.linalg.eigh(hermitize(hamiltonian))
    if not np.all(np.abs(vals[:2] + mode.omega) <= 1e-10 * (1.0 + mode.omega)):
        raise ValueError("momentum-space Hamiltonian has unexpected spectrum")
    return _fix_column_phases(vecs[:, :2])


def plane_wave(mode: MomentumMode, point: SpacetimePoint,
               cfg: DiracBoxConfig) -> np.ndarray:
    """Value of the normalized sea plane wave at a spacetime point (m > 0).

    sqrt(m / (pi omega)) / (4 L^{3/2}) * exp(-i k x) * chi_a with
    k x = -omega t - k_vec . x_vec.
    """
    chi = chi_spinors(mode, cfg.m)[:, mode.a - 1]
    c = math.sqrt(cfg.m / (math.pi * mode.omega)) / (4.0 * cfg.L ** 1.5)
    phase = _wave_phase(mode, point)
    return c * phase * chi


def _wave_phase(mode: MomentumMode, point: SpacetimePoint) -> complex:
    kx = (-mode.omega * point.t
          - sum(kc * xc for kc, xc in zip(mode.k_vec, point.x_vec)))
    return complex(np.exp(-1j * kx))


def wave_value_matrix(cfg: DiracBoxConfig, point: SpacetimePoint) -> np.ndarray:
    """4 x f matrix of all basis wave values at one point.

    Columns follow the mode ordering of ``momentum_modes``.  For m > 0 these
    are the spin-normalized plane waves; for m = 0 the Euclidean-orthonormal
    sea basis is used (same span per momentum, orthonormal in the solution
    scalar product), keeping the ensemble well defined.
    """
    modes = momentum_modes(cfg)
    columns = []
    cached_n = None
    cached_spinors = None
    for mode in modes:
        if mode.n_vec != cached_n:
            cached_n = mode.n_vec
            if cfg.m > 0.0:
                chi = chi_spinors(mode, cfg.m)
                c = (math.sqrt(cfg.m / (math.pi * mode.omega))
                     / (4.0 * cfg.L ** 1.5))
            else:
                chi = sea_spinors(mode, cfg.m)
                c = 1.0 / math.sqrt(2.0 * math.pi * (2.0 * cfg.L) ** 3)
            cached_spinors = c * chi
        phase = _wave_phase(mode, point)
        columns.append(phase * cached_spinors[:, mode.a - 1])
    return np.column_stack(columns)


def build_correlation_map(cfg: DiracBoxConfig, points) -> list[np.ndarray]:
    """Local correlation operators F(x) of the sea ensemble at given points.

    F(x)_ij = -psi_i(x)^dag gamma^0 psi_j(x) over the ordered mode basis;
    every F(x) is Hermitian of rank 4 and signature (2, 2) once at least two
    momenta are occupied.  Raises TooFewModes when dim H < 4.
    """
    modes = momentum_modes(cfg)
    if len(modes) < 4:
        raise TooFewModes(f"ensemble has only {len(modes)} modes, need >= 4")
    return [local_correlation(wave_value_matrix(cfg, p), SPINOR_GRAM)
            for p in points]


def kernel_mode_sum(cfg: DiracBoxConfig, x: SpacetimePoint,
                    y: SpacetimePoint) -> np.ndarray:
    """Two-point kernel of the sea ensemble as an explicit mode sum.

    (2L)^{-3} sum_k (4 pi omega)^{-1} exp(-i k (x - y)) (kslash + m) over the
    occupied lattice momenta, with k = (-omega, k_vec).  Agrees with the
    bra/ket sum over the basis waves.
    """
    total = np.zeros((4, 4), dtype=complex)
    dt = x.t - y.t
    dx = tuple(xc - yc for xc, yc in zip(x.x_vec, y.x_vec))
    for mode in momentum_points(cfg):
        kx = -mode.omega * dt - sum(kc * dc for kc, dc in zip(mode.k_vec, dx))
        phase = np.exp(-1j * kx)
        total += (phase / (4.0 * math.pi * mode.omega)) * (
            slash(mode.four_momentum) + cfg.m * np.eye(4)
        )
    return total / (2.0 * cfg.L) ** 3


def kernel_braket_sum(cfg: DiracBoxConfig, x: SpacetimePoint,
                      y: SpacetimePoint) -> np.ndarray:
    """Two-point kernel as -sum over basis waves |psi(x)><psi(y)|."""
    wx = wave_value_matrix(cfg, x)
    wy = wave_value_matrix(cfg, y)
    return -(wx @ wy.conj().T @ SPINOR_GRAM)


def mode_overlap(cfg: DiracBoxConfig, mode_i: MomentumMode,
                 mode_j: MomentumMode) -> complex:
    """Closed form of the solution scalar product of two basis waves.

    2 pi integral over the box of psi_i^dag psi_j: zero unless the lattice
    momenta agree (the spatial integral collapses), in which case the
    exponentials cancel and only the spinor product survives.
    """
    if mode_i.n_vec != mode_j.n_vec:
        return 0.0 + 0.0j
    origin = SpacetimePoint(t=0.0, x_vec=(0.0, 0.0, 0.0))
    w = wave_value_matrix(cfg, origin)
    modes = momentum_modes(cfg)
    i = modes.index(mode_i)
    j = modes.index(mode_j)
    volume = (2.0 * cfg.L) ** 3
    return complex(2.0 * math.pi * volume * np.vdot(w[:, i], w[:, j]))


def evaluation_isometry(cfg: DiracBoxConfig, point: SpacetimePoint,
                        sp) -> np.ndarray:
    """Matrix of the evaluation map restricted to a spin space (4 x 2n).

    Sends the recorded spin basis of ``sp`` (coefficient vectors over the
    mode basis) to its wave values at ``point``; a Krein isometry from the
    spin inner product onto the spinor inner product.
    """
    return wave_value_matrix(cfg, point) @ sp.basis
