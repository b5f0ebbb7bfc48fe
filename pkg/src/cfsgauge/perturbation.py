"""Pure-gauge perturbations of the sea ensemble and phase cancellation.

A pure-gauge electromagnetic potential multiplies every wave value at x by
the local phase exp(i Lambda(x)).  The correlation operators are exactly
invariant, the mixed kernel picks up the conjugate phase, and the
distinguished gauge built from the closed chain cancels the phases
altogether.  All operations here act on 4 x f wave-value matrices at a single
spacetime point, so the exact phase law applies with no expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlation import local_correlation, spin_space
from .dirac_box import (SPINOR_GRAM, DiracBoxConfig, SpacetimePoint,
                        kernel_mode_sum, wave_value_matrix)
from .errors import NotDiagonalKernel
from .krein import KreinSpace, opnorm, sqrt_near_identity

#: the spinor space as a Krein space of signature (2, 2)
SPINOR_KREIN = KreinSpace(gram=SPINOR_GRAM, signature=(2, 2))

#: relative size allowed for non-diagonal components of P(x, x)
DIAGONAL_KERNEL_RTOL = 1e-6


@dataclass(frozen=True)
class GaugeFunction:
    """Real box-periodic gauge function as a finite Fourier sum.

    Each term is (amplitude, n_vec, omega, phase) contributing
    amplitude * cos((pi / L) n_vec . x_vec - omega t + phase); the spatial
    frequencies live on the box lattice so the sum is 2L-periodic.
    """

    terms: tuple
    L: float

    def __call__(self, point: SpacetimePoint) -> float:
        value = 0.0
        step = math.pi / self.L
        for amplitude, n_vec, omega, phase in self.terms:
            spatial = step * sum(n * xc for n, xc in zip(n_vec, point.x_vec))
            value += amplitude * math.cos(spatial - omega * point.t + phase)
        return value

    def shifted_to_vanish_at(self, point: SpacetimePoint) -> "GaugeFunction":
        """The same gauge function minus its value at ``point``.

        Generates the identical pure-gauge potential; the constant offset is
        itself a lattice term (zero frequency).
        """
        offset = (-self(point), (0, 0, 0), 0.0, 0.0)
        return GaugeFunction(terms=self.terms + (offset,), L=self.L)


def apply_local_phase(waves: np.ndarray, gauge_fn: GaugeFunction,
                      point: SpacetimePoint) -> np.ndarray:
    """Wave values after the exact local phase transformation at ``point``."""
    return np.exp(1j * gauge_fn(point)) * np.asarray(waves, dtype=complex)


def perturbed_correlation(perturbed_waves: np.ndarray) -> np.ndarray:
    """Correlation operator of the perturbed wave values (phases cancel)."""
    return local_correlation(perturbed_waves, SPINOR_GRAM)


def diagonal_kernel(waves: np.ndarray) -> np.ndarray:
    """P(x, x) = -Psi(x) Psi(x)* from the wave values at x."""
    w = np.asarray(waves, dtype=complex)
    return -(w @ w.conj().T @ SPINOR_GRAM)


def mixed_kernel(waves: np.ndarray, perturbed_waves: np.ndarray) -> np.ndarray:
    """Kernel with only the second factor perturbed, -Psi(x) Psi~(x)*.

    For a pure gauge perturbation this equals exp(-i Lambda(x)) P(x, x).
    """
    w = np.asarray(waves, dtype=complex)
    wt = np.asarray(perturbed_waves, dtype=complex)
    return -(w @ wt.conj().T @ SPINOR_GRAM)


def kernel_time_coefficient(diag: np.ndarray,
                            rtol: float = DIAGONAL_KERNEL_RTOL) -> float:
    """Coefficient alpha of a diagonal kernel of the form alpha gamma^0.

    Raises NotDiagonalKernel when the non-gamma^0 components exceed
    ``rtol`` times |alpha|.
    """
    diag = np.asarray(diag, dtype=complex)
    alpha = float(np.real(np.trace(SPINOR_GRAM @ diag)) / 4.0)
    residual = opnorm(diag - alpha * SPINOR_GRAM)
    if residual > rtol * abs(alpha):
        raise NotDiagonalKernel(
            f"P(x, x) deviates from alpha gamma^0 by {residual:.3g} "
            f"(|alpha| = {abs(alpha):.3g})"
        )
    return alpha


def perturbed_symmetric_gauge(waves: np.ndarray, perturbed_waves: np.ndarray,
                              unitary: np.ndarray | None = None) -> np.ndarray:
    """Value of the distinguished gauge at x for the perturbed ensemble.

    unitary . gamma^0 . A^{-1/2} . P(x, F~(x)) . Psi~(x), where A is the
    mixed closed chain; requires the unperturbed diagonal kernel to be of the
    form alpha gamma^0.  For a pure gauge perturbation the result equals the
    unperturbed gauge value exactly (local phases drop out).
    """
    w = np.asarray(waves, dtype=complex)
    wt = np.asarray(perturbed_waves, dtype=complex)
    if unitary is None:
        unitary = np.eye(4, dtype=complex)
    alpha = kernel_time_coefficient(diagonal_kernel(w))
    p_mixed = mixed_kernel(w, wt)
    p_mixed_rev = mixed_kernel(wt, w)
    chain = p_mixed @ p_mixed_rev
    normalized = chain / (alpha * alpha)
    inv_sqrt = sqrt_near_identity(normalized, SPINOR_KREIN).inv_sqrt / abs(alpha)
    return unitary @ SPINOR_GRAM @ inv_sqrt @ p_mixed @ wt


@dataclass(frozen=True, eq=False)
class BasisWaves:
    """An orthonormal basis of the spin subspace at x, as wave functions.

    ``coeffs`` holds four orthonormal coefficient vectors over the mode basis
    spanning the image of F(x); ``chi`` the spinors gamma^0 u_a(x) / alpha
    that transport the kernel onto the basis waves.
    """

    cfg: DiracBoxConfig
    point: SpacetimePoint
    coeffs: np.ndarray
    chi: np.ndarray
    alpha: float

    def evaluate(self, point: SpacetimePoint) -> np.ndarray:
        """Wave values u_a(point), one column per basis vector."""
        return wave_value_matrix(self.cfg, point) @ self.coeffs

    def kernel_transport(self, point: SpacetimePoint) -> np.ndarray:
        """P(point, x) chi_a, which reproduces u_a(point)."""
        return kernel_mode_sum(self.cfg, point, self.point) @ self.chi


def basis_waves(cfg: DiracBoxConfig, point: SpacetimePoint,
                check_points=(), tol: float = 1e-9) -> BasisWaves:
    """Build the distinguished basis waves of the spin subspace at a point.

    Requires the diagonal kernel at the point to be of the form
    alpha gamma^0 (massless or nearly massless ensemble).  For every point
    in ``check_points`` the kernel-transport identity
    u_a(y) = P(y, x) chi_a is verified to ``tol``.
    """
    waves = wave_value_matrix(cfg, point)
    alpha = kernel_time_coefficient(diagonal_kernel(waves))
    correlation = local_correlation(waves, SPINOR_GRAM)
    sp = spin_space(correlation, 2)
    coeffs = sp.basis
    values_at_x = waves @ coeffs
    chi = (1.0 / alpha) * (SPINOR_GRAM @ values_at_x)
    bw = BasisWaves(cfg=cfg, point=point, coeffs=coeffs, chi=chi,
                    alpha=alpha)
    for other in check_points:
        residual = opnorm(bw.kernel_transport(other) - bw.evaluate(other))
        if residual > tol:
            raise ValueError(
                f"kernel transport misses the basis waves at {other} "
                f"(residual {residual:.3g})"
            )
    return bw


def gauged_basis(waves: np.ndarray, perturbed_waves: np.ndarray,
                 coeffs: np.ndarray,
                 unitary: np.ndarray | None = None):
    """Gauge values of the basis waves, by two routes.

    Route one applies the full gauge map to the basis coefficient vectors;
    route two is the closed form unitary . gamma^0 . A^{+1/2} . chi_a, which
    involves only the gauge-invariant chain.  Returns (via_gauge, via_chain).
    """
    w = np.asarray(waves, dtype=complex)
    wt = np.asarray(perturbed_waves, dtype=complex)
    if unitary is None:
        unitary = np.eye(4, dtype=complex)
    via_gauge = perturbed_symmetric_gauge(w, wt, unitary) @ np.asarray(coeffs)

    alpha = kernel_time_coefficient(diagonal_kernel(w))
    p_mixed = mixed_kernel(w, wt)
    p_mixed_rev = mixed_kernel(wt, w)
    chain = p_mixed @ p_mixed_rev
    normalized = chain / (alpha * alpha)
    sqrt_chain = abs(alpha) * sqrt_near_identity(normalized, SPINOR_KREIN).sqrt
    chi = (1.0 / alpha) * (SPINOR_GRAM @ (w @ np.asarray(coeffs)))
    via_chain = unitary @ SPINOR_GRAM @ sqrt_chain @ chi
    return via_gauge, via_chain
