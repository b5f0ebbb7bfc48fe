"""Correlation operators, spin spaces, wave evaluation and two-point kernels.

A correlation operator x is a Hermitian f x f matrix of rank 2n whose nonzero
spectrum splits into n positive and n negative eigenvalues.  Its image carries
the indefinite spin inner product

    <u | v>_x = - (u, x v)

of signature (n, n), so every such operator spawns a Krein space (the spin
space).  The wave evaluation operator is the orthogonal projection onto the
image expressed in a fixed eigenbasis; the kernel P(x, y) is the projection of
y onto the spin space at x.  Every operator here is a plain ndarray in the
bases recorded on the SpinSpace object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotRegular
from .krein import KreinSpace, opnorm

#: relative threshold separating genuine eigenvalues from numerical zeros
TOL_RANK_FACTOR = 1e-8


def hermitize(a: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian part, removing roundoff asymmetry."""
    return 0.5 * (a + a.conj().T)


def _fix_column_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    v = v.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        k = int(np.argmax(np.abs(col)))
        pivot = col[k]
        if abs(pivot) > 0.0:
            v[:, j] = col * (abs(pivot) / pivot)
    return v


@dataclass(frozen=True, eq=False)
class ImageSplit:
    """Orthonormal splitting of the ambient space along the image of x.

    ``basis`` holds eigenvectors of the p+q nonzero eigenvalues (descending
    eigenvalue order, phases fixed deterministically), ``complement`` the
    remaining eigenvectors, and ``restricted`` the compression of x onto its
    image, basis^dag x basis.
    """

    operator: np.ndarray
    basis: np.ndarray
    complement: np.ndarray
    restricted: np.ndarray
    signature: tuple[int, int]

    @property
    def ambient_dim(self) -> int:
        return self.operator.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


def split_by_image(x: np.ndarray, p: int, q: int,
                   tol_rank: float | None = None) -> ImageSplit:
    """Eigen-split a Hermitian operator of expected signature (p, q).

    Raises NotRegular when the counts of eigenvalues above +tol / below -tol
    differ from (p, q) or some discarded eigenvalue exceeds the threshold.
    """
    x = np.asarray(x, dtype=complex)
    scale = opnorm(x)
    if tol_rank is None:
        tol_rank = TOL_RANK_FACTOR * max(scale, 1e-300)
    vals, vecs = np.linalg.eigh(hermitize(x))
    pos = vals > tol_rank
    neg = vals < -tol_rank
    if int(pos.sum()) != p or int(neg.sum()) != q:
        raise NotRegular(
            f"expected signature ({p}, {q}), found "
            f"({int(pos.sum())}, {int(neg.sum())}) at threshold {tol_rank:.3g}"
        )
    keep = pos | neg
    rest = vals[keep]
    order = np.argsort(rest)[::-1]
    basis = _fix_column_phases(vecs[:, keep][:, order])
    complement = _fix_column_phases(vecs[:, ~keep])
    restricted = hermitize(basis.conj().T @ x @ basis)
    return ImageSplit(operator=x, basis=basis, complement=complement,
                      restricted=restricted, signature=(p, q))


@dataclass(frozen=True, eq=False)
class SpinSpace:
    """Spin space of a regular correlation operator.

    Wraps the image splitting of x and equips the image with the spin inner
    product of Gram matrix -X, where X = basis^dag x basis is the invertible
    compression of x onto its image.
    """

    split: ImageSplit
    spin_gram: np.ndarray
    krein: KreinSpace
    n: int

    @property
    def operator(self) -> np.ndarray:
        return self.split.operator

    @property
    def basis(self) -> np.ndarray:
        return self.split.basis

    @property
    def complement(self) -> np.ndarray:
        return self.split.complement

    @property
    def restriction(self) -> np.ndarray:
        """X = basis^dag x basis."""
        return self.split.restricted

    @property
    def ambient_dim(self) -> int:
        return self.split.ambient_dim


def spin_space(x: np.ndarray, n: int,
               tol_rank: float | None = None) -> SpinSpace:
    """Construct the spin space of a regular correlation operator.

    Raises NotRegular unless x has exactly n eigenvalues above +tol and n
    below -tol, the rest being numerically zero.
    """
    split = split_by_image(x, n, n, tol_rank=tol_rank)
    gram = -split.restricted
    return SpinSpace(
        split=split,
        spin_gram=gram,
        krein=KreinSpace(gram=gram, signature=(n, n)),
        n=n,
    )


def local_correlation(wave_values: np.ndarray,
                      spinor_gram: np.ndarray) -> np.ndarray:
    """Correlation operator of an ensemble of wave values at one point.

    ``wave_values`` has one column per basis vector of the ensemble (assumed
    orthonormal); entry (i, j) of the result is minus the indefinite inner
    product of values i and j, giving a Hermitian matrix.
    """
    w = np.asarray(wave_values, dtype=complex)
    g = np.asarray(spinor_gram, dtype=complex)
    return hermitize(-(w.conj().T @ g @ w))


def wave_evaluation(sp: SpinSpace) -> np.ndarray:
    """Projection onto the spin space, expressed in its basis (2n x f)."""
    return sp.basis.conj().T.copy()


def kernel(sp_x: SpinSpace, sp_y: SpinSpace) -> np.ndarray:
    """Two-point kernel P(x, y): spin space at y -> spin space at x.

    In the recorded bases this is basis_x^dag y basis_y, equivalently the
    bra/ket sum -Psi(x) Psi(y)* over the ensemble.
    """
    return sp_x.basis.conj().T @ sp_y.operator @ sp_y.basis


def kernel_krein_adjoint(p_xy: np.ndarray, sp_x: SpinSpace,
                         sp_y: SpinSpace) -> np.ndarray:
    """Adjoint of P(x, y) with respect to the two spin inner products.

    Maps the spin space at x to the spin space at y; equals P(y, x) for
    kernels of correlation operators.
    """
    return np.linalg.solve(sp_y.spin_gram, p_xy.conj().T @ sp_x.spin_gram)


def closed_chain(sp_x: SpinSpace, sp_y: SpinSpace) -> np.ndarray:
    """Closed chain A_xy = P(x, y) P(y, x), an endomorphism of S_x.

    Symmetric with respect to the spin inner product at x; its spectrum does
    not depend on the choice of spin bases.
    """
    return kernel(sp_x, sp_y) @ kernel(sp_y, sp_x)


def reconstruct(sp: SpinSpace) -> np.ndarray:
    """Rebuild x from its wave evaluation, Psi^dag X Psi."""
    psi = wave_evaluation(sp)
    return psi.conj().T @ sp.restriction @ psi
