"""Seeded random inputs for property suites and experiment tasks.

All randomness is drawn from an explicit numpy Generator.  Complex matrices
are built from independent standard complex Gaussians (real and imaginary
parts N(0, 1) / sqrt(2)), Hermitian-symmetrized or orthonormalized where
needed, so a fixed seed reproduces every trial bit for bit.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .correlation import hermitize
from .krein import KreinSpace
from .manifold import ChartCoordinates
from .perturbation import GaugeFunction


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    """Independent standard complex Gaussian entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_hermitian(rng: np.random.Generator, dim: int,
                     scale: float = 1.0) -> np.ndarray:
    return scale * hermitize(random_complex(rng, dim, dim))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish unitary via QR with a fixed diagonal phase convention."""
    q, r = np.linalg.qr(random_complex(rng, dim, dim))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_gram(rng: np.random.Generator, p: int, q: int,
                spread=(0.5, 2.0)) -> np.ndarray:
    """Random invertible Hermitian Gram matrix of signature (p, q)."""
    dim = p + q
    u = random_unitary(rng, dim)
    vals = np.concatenate([rng.uniform(*spread, size=p),
                           -rng.uniform(*spread, size=q)])
    return hermitize((u * vals) @ u.conj().T)


def random_correlation(rng: np.random.Generator, f: int, n: int,
                       spread=(0.5, 2.0)) -> np.ndarray:
    """Random regular correlation operator: rank 2n, signature (n, n)."""
    basis, _ = np.linalg.qr(random_complex(rng, f, 2 * n))
    vals = np.concatenate([np.sort(rng.uniform(*spread, size=n))[::-1],
                           -np.sort(rng.uniform(*spread, size=n))])
    return hermitize((basis * vals) @ basis.conj().T)


def random_krein_unitary(rng: np.random.Generator, space: KreinSpace,
                         scale: float = 0.1) -> np.ndarray:
    """Unitary of the indefinite product near 1, exp of an antisymmetric op."""
    m = scale * random_complex(rng, space.dim, space.dim)
    generator = 0.5 * (m - space.adjoint(m))
    return expm(generator)


def random_krein_symmetric(rng: np.random.Generator, space: KreinSpace,
                           scale: float = 0.1) -> np.ndarray:
    """Symmetric operator of the indefinite product with norm ~ scale."""
    m = scale * random_complex(rng, space.dim, space.dim)
    return 0.5 * (m + space.adjoint(m))


def random_chart_coords(rng: np.random.Generator, split,
                        scale: float = 0.1) -> ChartCoordinates:
    """Small random chart coordinates around a base splitting."""
    r = split.rank
    f = split.ambient_dim
    a = random_hermitian(rng, r, scale=scale)
    b = scale * random_complex(rng, r, f - r)
    return ChartCoordinates(a=a, b=b, split=split)


def random_direction_pair(rng: np.random.Generator, split):
    """Two normalized coordinate directions (a, b) for metric probes."""
    def one():
        a = random_hermitian(rng, split.rank)
        b = random_complex(rng, split.rank, split.ambient_dim - split.rank)
        norm = np.sqrt(np.linalg.norm(a, "fro") ** 2
                       + 2.0 * np.linalg.norm(b, "fro") ** 2)
        return a / norm, b / norm
    return one(), one()


def random_gauge_function(rng: np.random.Generator, L: float,
                          n_terms: int = 3, amplitude: float = 0.5,
                          max_mode: int = 2) -> GaugeFunction:
    """Random real Fourier gauge function on the box lattice."""
    terms = []
    for _ in range(n_terms):
        amp = amplitude * rng.standard_normal()
        n_vec = tuple(int(v) for v in rng.integers(-max_mode, max_mode + 1, size=3))
        omega = rng.standard_normal()
        phase = rng.uniform(0.0, 2.0 * np.pi)
        terms.append((amp, n_vec, omega, phase))
    return GaugeFunction(terms=tuple(terms), L=L)


def random_box_point(rng: np.random.Generator, L: float,
                     t_spread: float = 1.0):
    """Random spacetime point inside the box."""
    from .dirac_box import SpacetimePoint

    t = float(rng.uniform(-t_spread, t_spread))
    x = tuple(float(c) for c in rng.uniform(-L, L, size=3))
    return SpacetimePoint.in_box(t, x, L)
