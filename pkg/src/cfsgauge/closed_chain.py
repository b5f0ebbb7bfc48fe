"""Closed-form spectral analysis of the massless closed chain.

A massless two-point kernel has only a vector component and can be written as
slash(u) + i slash(z) with two real Minkowski vectors.  The associated closed
chain

    A = (u^2 + z^2) 1 - i [slash(u), slash(z)]

has two doubly degenerate eigenvalues with explicit spectral projectors, so
the inverse square root entering the distinguished gauge can be evaluated in
closed form.  Two routes are kept side by side: the spectral-calculus
evaluation (the reference) and a fixed coefficient formula in the scalar
invariants whose radicand differs on generic inputs; their deviation is
reported, never patched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dirac_box import GAMMA, minkowski_dot, slash
from .errors import BranchCut, DegenerateChain
from .krein import opnorm

#: relative eigenvalue gap below which the chain counts as degenerate
DEGENERACY_RTOL = 1e-8
#: tolerance for deciding whether a complex number sits on the branch cut
BRANCH_CUT_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class VectorKernel:
    """Kernel of pure vector form: slash(real_vec) + i slash(imag_vec)."""

    real_vec: np.ndarray
    imag_vec: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.real_vec, dtype=float)
        z = np.asarray(self.imag_vec, dtype=float)
        if u.shape != (4,) or z.shape != (4,):
            raise ValueError("vector components must be real 4-vectors")
        object.__setattr__(self, "real_vec", u)
        object.__setattr__(self, "imag_vec", z)

    def kernel_matrix(self) -> np.ndarray:
        return slash(self.real_vec) + 1j * slash(self.imag_vec)

    def conjugate_kernel(self) -> np.ndarray:
        """The reversed kernel slash(u) - i slash(z)."""
        return slash(self.real_vec) - 1j * slash(self.imag_vec)


def vector_kernel_from_matrix(m: np.ndarray,
                              tol: float = 1e-10) -> VectorKernel:
    """Recover the unique (u, z) with m = slash(u) + i slash(z).

    Components follow from the trace pairing tr(m gamma^mu) / 4; raises
    ValueError when m has parts outside the span of the gamma matrices.
    """
    m = np.asarray(m, dtype=complex)
    w = np.array([np.trace(m @ g) / 4.0 for g in GAMMA])
    vk = VectorKernel(real_vec=w.real, imag_vec=w.imag)
    residual = opnorm(vk.kernel_matrix() - m)
    if residual > tol * max(1.0, opnorm(m)):
        raise ValueError(
            f"matrix is not of vector form (residual {residual:.3g})"
        )
    return vk


def _invariants(vk: VectorKernel):
    u, z = vk.real_vec, vk.imag_vec
    u_sq = minkowski_dot(u, u)
    z_sq = minkowski_dot(z, z)
    uz = minkowski_dot(u, z)
    return u_sq, z_sq, uz


def chain_from_vectors(vk: VectorKernel) -> np.ndarray:
    """Closed chain (u^2 + z^2) 1 - i [slash(u), slash(z)]."""
    u_sq, z_sq, _ = _invariants(vk)
    su = slash(vk.real_vec)
    sz = slash(vk.imag_vec)
    return (u_sq + z_sq) * np.eye(4) - 1j * (su @ sz - sz @ su)


def chain_eigenvalues(vk: VectorKernel) -> tuple[complex, complex]:
    """The two doubly degenerate eigenvalues of the closed chain.

    u^2 + z^2 +/- 2 sqrt(u^2 z^2 - (u z)^2), principal square root.
    """
    u_sq, z_sq, uz = _invariants(vk)
    root = np.sqrt(complex(u_sq * z_sq - uz * uz))
    return (complex(u_sq + z_sq + 2.0 * root),
            complex(u_sq + z_sq - 2.0 * root))


def _degenerate(lam_plus: complex, lam_minus: complex) -> bool:
    gap = abs(lam_plus - lam_minus)
    return gap <= DEGENERACY_RTOL * (abs(lam_plus) + abs(lam_minus) + 1e-30)


def spectral_projectors(vk: VectorKernel) -> tuple[np.ndarray, np.ndarray]:
    """Projectors onto the two eigenspaces of the closed chain.

    E_+/- = (1 -/+ i [slash(u), slash(z)] / (2 sqrt(u^2 z^2 - (u z)^2))) / 2.
    Raises DegenerateChain when the eigenvalues coincide.
    """
    lam_plus, lam_minus = chain_eigenvalues(vk)
    if _degenerate(lam_plus, lam_minus):
        raise DegenerateChain("closed chain has coinciding eigenvalues")
    u_sq, z_sq, uz = _invariants(vk)
    root = np.sqrt(complex(u_sq * z_sq - uz * uz))
    su = slash(vk.real_vec)
    sz = slash(vk.imag_vec)
    commutator = su @ sz - sz @ su
    eye = np.eye(4)
    e_plus = 0.5 * (eye - 1j * commutator / (2.0 * root))
    e_minus = 0.5 * (eye + 1j * commutator / (2.0 * root))
    return e_plus, e_minus


def _principal_inv_sqrt(lam: complex) -> complex:
    if abs(lam.imag) <= BRANCH_CUT_ATOL * (abs(lam) + 1e-300) and lam.real <= 0.0:
        raise BranchCut(f"eigenvalue {lam:.6g} lies on the branch cut")
    return 1.0 / np.sqrt(lam)


def spectral_inv_sqrt_kernel(vk: VectorKernel) -> np.ndarray:
    """A^{-1/2} P(x, y) evaluated by the spectral calculus (reference route).

    Scalar chains (coinciding eigenvalues with A proportional to 1, e.g.
    z = 0 or z parallel to u) are handled directly; a degenerate chain with a
    nilpotent part raises DegenerateChain.
    """
    lam_plus, lam_minus = chain_eigenvalues(vk)
    kernel = vk.kernel_matrix()
    if _degenerate(lam_plus, lam_minus):
        lam = 0.5 * (lam_plus + lam_minus)
        chain = chain_from_vectors(vk)
        if opnorm(chain - lam * np.eye(4)) > 1e-10 * (abs(lam) + 1.0):
            raise DegenerateChain(
                "degenerate closed chain with nilpotent part has no "
                "spectral inverse square root"
            )
        return _principal_inv_sqrt(lam) * kernel
    e_plus, e_minus = spectral_projectors(vk)
    return (_principal_inv_sqrt(lam_plus) * e_plus
            + _principal_inv_sqrt(lam_minus) * e_minus) @ kernel


def closed_form_inv_sqrt_kernel(vk: VectorKernel) -> np.ndarray:
    """A^{-1/2} P(x, y) as an explicit formula in the scalar invariants.

    Alternative route with coefficients built from u^2, z^2 and u z.  Its
    radicand u^2 z^2 - 2 (u z)^2 and the signs of the i (u z) terms disagree
    with the spectral calculus whenever u z != 0; ``dual_route_inv_sqrt``
    reports that deviation rather than correcting it here.  Raises
    DegenerateChain when the eigenvalue gap vanishes.
    """
    lam_plus, lam_minus = chain_eigenvalues(vk)
    if _degenerate(lam_plus, lam_minus):
        raise DegenerateChain("coefficient formula needs distinct eigenvalues")
    u_sq, z_sq, uz = _invariants(vk)
    sqrt_plus = np.sqrt(lam_plus)
    sqrt_minus = np.sqrt(lam_minus)
    denom = sqrt_plus * sqrt_minus
    c_sum = (sqrt_plus + sqrt_minus) / denom
    c_diff = (sqrt_plus - sqrt_minus) / denom
    radicand = np.sqrt(complex(u_sq * z_sq - 2.0 * uz * uz))
    coeff_u = 0.5 * (c_sum - (z_sq - 1j * uz) / radicand * c_diff)
    coeff_z = 0.5j * (c_sum - (u_sq - 1j * uz) / radicand * c_diff)
    return coeff_u * slash(vk.real_vec) + coeff_z * slash(vk.imag_vec)


@dataclass(frozen=True)
class DualRouteResult:
    """Both evaluations of A^{-1/2} P and their disagreement.

    ``unitarity_residual`` measures || (spectral route) paired with its
    indefinite adjoint minus 1 ||; the deviation of the coefficient formula
    is reported (nan where it is undefined), not asserted.
    """

    spectral: np.ndarray
    closed_form: np.ndarray | None
    deviation: float
    unitarity_residual: float
    eigenvalues: tuple


def dual_route_inv_sqrt(vk: VectorKernel) -> DualRouteResult:
    """Evaluate A^{-1/2} P on both routes and report their deviation."""
    spectral = spectral_inv_sqrt_kernel(vk)
    adjoint = GAMMA[0] @ spectral.conj().T @ GAMMA[0]
    unitarity = opnorm(spectral @ adjoint - np.eye(4))
    try:
        closed_form = closed_form_inv_sqrt_kernel(vk)
        deviation = opnorm(spectral - closed_form)
    except DegenerateChain:
        closed_form = None
        deviation = float("nan")
    return DualRouteResult(
        spectral=spectral,
        closed_form=closed_form,
        deviation=float(deviation),
        unitarity_residual=float(unitarity),
        eigenvalues=chain_eigenvalues(vk),
    )


@dataclass(frozen=True)
class ExpansionReport:
    """First-order behavior of g(tau) = gamma^0 A^{-1/2} P under perturbation.

    The base kernel is alpha gamma^0; the real and imaginary vector parts are
    perturbed linearly in tau.  ``coefficient_fd`` is the finite-difference
    first derivative of g at tau = 0 (Richardson-extrapolated),
    ``coefficient_predicted`` the expected value
    -gamma^0 (u1_vec . gamma) + i z1^0 / |alpha|, exact for |alpha| = 1.
    Residuals are || g(tau) - 1 - tau * predicted || and should scale as
    tau^2 (ratios near 4 under halving).
    """

    taus: tuple
    residuals: tuple
    residual_ratios: tuple
    coefficient_fd: np.ndarray
    coefficient_predicted: np.ndarray
    coefficient_deviation: float
    antisymmetry_residual: float


def _gauge_factor(alpha: float, real_step, imag_step, tau: float) -> np.ndarray:
    u = np.array([alpha, 0.0, 0.0, 0.0]) + tau * np.asarray(real_step, dtype=float)
    z = tau * np.asarray(imag_step, dtype=float)
    vk = VectorKernel(real_vec=u, imag_vec=z)
    return GAMMA[0] @ spectral_inv_sqrt_kernel(vk)


def unitary_expansion(alpha: float, real_step, imag_step,
                      tau_list=(1e-2, 5e-3, 2.5e-3)) -> ExpansionReport:
    """Expand the gauge factor g(tau) around the diagonal kernel.

    ``real_step`` and ``imag_step`` are the first-order Minkowski vectors of
    the kernel's Hermitian and anti-Hermitian parts.  Only the spatial part
    of ``real_step`` and the time component of ``imag_step`` enter at first
    order; the predicted coefficient is antisymmetric with respect to the
    spinor inner product, making g unitary to this order.
    """
    real_step = np.asarray(real_step, dtype=float)
    imag_step = np.asarray(imag_step, dtype=float)
    spatial = (real_step[1] * GAMMA[1] + real_step[2] * GAMMA[2]
               + real_step[3] * GAMMA[3])
    predicted = (-GAMMA[0] @ spatial
                 + 1j * (imag_step[0] / abs(alpha)) * np.eye(4))

    eye = np.eye(4)
    residuals = []
    for tau in tau_list:
        g = _gauge_factor(alpha, real_step, imag_step, tau)
        residuals.append(opnorm(g - eye - tau * predicted))
    ratios = []
    for (ta, ra), (tb, rb) in zip(list(zip(tau_list, residuals)),
                                  list(zip(tau_list, residuals))[1:]):
        ratios.append(ra / rb if rb != 0.0 else float("nan"))

    # Richardson-extrapolated central difference of g at tau = 0
    tau_fd = min(tau_list)
    def central(t):
        return (_gauge_factor(alpha, real_step, imag_step, t)
                - _gauge_factor(alpha, real_step, imag_step, -t)) / (2.0 * t)
    coeff_fd = (4.0 * central(tau_fd / 2.0) - central(tau_fd)) / 3.0

    adjoint = GAMMA[0] @ coeff_fd.conj().T @ GAMMA[0]
    return ExpansionReport(
        taus=tuple(float(t) for t in tau_list),
        residuals=tuple(float(r) for r in residuals),
        residual_ratios=tuple(float(r) for r in ratios),
        coefficient_fd=coeff_fd,
        coefficient_predicted=predicted,
        coefficient_deviation=float(opnorm(coeff_fd - predicted)),
        antisymmetry_residual=float(opnorm(adjoint + coeff_fd)),
    )
