"""Wave charts and distinguished gauges around a regular base point.

Points near a regular correlation operator x can be parametrized by maps
psi from the ambient Hilbert space into the spin space at x ("wave
coordinates"), via the realization map psi -> -psi* psi.  That map is
invertible only up to composition with unitaries of the spin inner product;
the gauge is fixed by demanding that the component of psi on the image of x
be symmetric with respect to the spin inner product.  Two constructions of
this distinguished section are provided:

* ``symmetric_wave_chart`` follows the polar-decomposition route through the
  two-point kernels, psi = (X^{-1} A_xy X^{-1})^{-1/2} X^{-1} P(x, y) Psi(y);
* ``gaussian_wave_map`` transports the operator-manifold chart coordinates
  (a, b), psi = (sqrt(1 + X^{-1} a), (1 + X^{-1} a)^{-1/2} X^{-1} b).

They coincide on their common domain, which ``charts_coincide_check``
quantifies.  ``build_gauge`` composes the chart with one fixed unitary onto a
reference spin space, producing a gauge over a whole point set that is unique
up to a single global unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import krein as _krein
from .correlation import (SpinSpace, hermitize, kernel, spin_space,
                          wave_evaluation)
from .errors import (NotInvertible, OutOfChartDomain, OutOfConvergenceRadius,
                     TooFarFromBase)
from .krein import opnorm
from .manifold import ChartCoordinates, chart_inverse

#: bound on ||X^{-1} a|| shared by both wave-chart constructions
CHART_DOMAIN_RADIUS = 0.8
#: relative tolerance when comparing realizations in the orbit test
ORBIT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class WaveChartPoint:
    """Wave coordinates of a point, split along the image of the base.

    ``on_image`` is the 2n x 2n component acting within the spin space of the
    base point; ``on_complement`` maps the orthogonal complement into it.
    For points of a symmetric wave chart, ``on_image`` is symmetric with
    respect to the spin inner product and invertible.
    """

    on_image: np.ndarray
    on_complement: np.ndarray
    base: SpinSpace

    def full_matrix(self) -> np.ndarray:
        """The map from the ambient space into the spin space, 2n x f."""
        return (self.on_image @ self.base.basis.conj().T
                + self.on_complement @ self.base.complement.conj().T)

    @classmethod
    def from_full(cls, full: np.ndarray, base: SpinSpace) -> "WaveChartPoint":
        return cls(on_image=full @ base.basis,
                   on_complement=full @ base.complement,
                   base=base)


def identity_point(base: SpinSpace) -> WaveChartPoint:
    """The wave coordinates of the base point itself, (1, 0)."""
    two_n = 2 * base.n
    return WaveChartPoint(
        on_image=np.eye(two_n, dtype=complex),
        on_complement=np.zeros((two_n, base.ambient_dim - two_n), dtype=complex),
        base=base,
    )


def realize(psi: WaveChartPoint) -> np.ndarray:
    """Realization map psi -> -psi* psi, a Hermitian operator on H.

    With the spin Gram -X this is psi^dag X psi; the wave coordinates of the
    base point realize the base point itself.
    """
    full = psi.full_matrix()
    return hermitize(full.conj().T @ psi.base.restriction @ full)


def gauge_orbit_witness(psi: WaveChartPoint, psi_tilde: WaveChartPoint,
                        tol: float = ORBIT_TOL):
    """Unitary connecting two wave-coordinate points on the same orbit.

    If both points realize the same operator, returns the spin-space unitary
    U with psi_tilde = U psi (verified on both components); returns None when
    the realizations differ or no such unitary exists within tolerance.
    Raises NotInvertible when the on-image component cannot be inverted.
    """
    sv = np.linalg.svd(psi.on_image, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise NotInvertible("on-image component is singular")
    r1 = realize(psi)
    r2 = realize(psi_tilde)
    scale = max(1.0, opnorm(r1))
    if opnorm(r1 - r2) > tol * scale:
        return None
    u = psi_tilde.on_image @ np.linalg.inv(psi.on_image)
    if not psi.base.krein.is_unitary(u, tol * max(1.0, opnorm(u) ** 2)):
        return None
    if opnorm(psi_tilde.on_complement - u @ psi.on_complement) > tol * scale:
        return None
    return u


def symmetrize(psi: WaveChartPoint) -> WaveChartPoint:
    """Move a point along its gauge orbit to the symmetric representative.

    Polar-decomposes the on-image component as U S and applies U^{-1} to both
    components; the realization is unchanged and the new on-image component is
    symmetric with respect to the spin inner product.
    """
    space = psi.base.krein
    u, s = _krein.polar_decompose(psi.on_image, space)
    u_inv = space.adjoint(u)
    return WaveChartPoint(on_image=s,
                          on_complement=u_inv @ psi.on_complement,
                          base=psi.base)


def connecting_unitary(base: SpinSpace, sp_y: SpinSpace) -> np.ndarray:
    """Spin-space unitary transporting the spin space at y onto the base.

    U = (X^{-1} A_xy X^{-1})^{-1/2} X^{-1} P(x, y), with the inverse square
    root taken near the identity.  Satisfies U U* = 1 across the two spin
    inner products.
    """
    p_xy = kernel(base, sp_y)
    p_yx = kernel(sp_y, base)
    chain = p_xy @ p_yx
    inv_x = np.linalg.inv(base.restriction)
    normalized = inv_x @ chain @ inv_x
    try:
        result = _krein.sqrt_near_identity(normalized, base.krein)
    except OutOfConvergenceRadius as exc:
        raise OutOfChartDomain(str(exc)) from exc
    return result.inv_sqrt @ inv_x @ p_xy


def symmetric_wave_chart(y: np.ndarray, base: SpinSpace) -> WaveChartPoint:
    """Wave coordinates of y in the symmetric wave chart around the base.

    The on-image component comes out symmetric with respect to the spin inner
    product, and realizing the result returns y.  Raises OutOfChartDomain
    when y leaves the shared domain of the two wave-chart constructions
    (image overlap too small, chart coordinate too large, or square root out
    of its convergence radius).
    """
    try:
        coords = chart_inverse(y, base.split)
    except TooFarFromBase as exc:
        raise OutOfChartDomain(str(exc)) from exc
    inv_x = np.linalg.inv(base.restriction)
    if opnorm(inv_x @ coords.a) > CHART_DOMAIN_RADIUS:
        raise OutOfChartDomain("chart coordinate exceeds the shared domain radius")
    sp_y = spin_space(y, base.n)
    u_conn = connecting_unitary(base, sp_y)
    full = u_conn @ wave_evaluation(sp_y)
    return WaveChartPoint.from_full(full, base)


def gaussian_wave_map(coords: ChartCoordinates, base: SpinSpace) -> WaveChartPoint:
    """Wave coordinates obtained by transporting manifold chart coordinates.

    Returns (sqrt(1 + X^{-1} a), (1 + X^{-1} a)^{-1/2} X^{-1} b); realizing
    the result reproduces the operator the chart assembles from (a, b), and
    the on-image component is symmetric with respect to the spin inner
    product.  Raises OutOfConvergenceRadius if X^{-1} a is too large.
    """
    inv_x = np.linalg.inv(base.restriction)
    argument = np.eye(2 * base.n, dtype=complex) + inv_x @ coords.a
    result = _krein.sqrt_near_identity(argument, base.krein)
    on_image = result.sqrt
    on_complement = result.inv_sqrt @ inv_x @ coords.b
    return WaveChartPoint(on_image=on_image, on_complement=on_complement,
                          base=base)


@dataclass(frozen=True)
class CoincidenceReport:
    """Pointwise deviation between the two wave-chart constructions."""

    max_deviation: float
    deviations: tuple


def charts_coincide_check(base: SpinSpace, sample_points) -> CoincidenceReport:
    """Compare the symmetric and transported wave charts on sample operators.

    For each y both wave-coordinate constructions are evaluated and the
    operator norm of their difference (as maps from the ambient space) is
    recorded.  Domain errors propagate.
    """
    deviations = []
    for y in sample_points:
        via_polar = symmetric_wave_chart(y, base)
        via_chart = gaussian_wave_map(chart_inverse(y, base.split), base)
        deviations.append(opnorm(via_polar.full_matrix()
                                 - via_chart.full_matrix()))
    return CoincidenceReport(max_deviation=float(max(deviations)),
                             deviations=tuple(float(d) for d in deviations))


@dataclass(frozen=True, eq=False)
class GaugeMap:
    """A gauge over a point set: one wave map into a common target per point.

    ``values[i]`` is the 2n x f matrix of the gauge at ``points[i]``; the
    target space carries the indefinite inner product ``target_gram``, and
    ``unitary`` is the single spin-space-to-target unitary entering every
    value.  ``condition_residuals`` record how well each point satisfies the
    defining condition y = -(value)* (value).
    """

    points: tuple
    values: tuple
    target_gram: np.ndarray
    unitary: np.ndarray
    base: SpinSpace
    condition_residuals: tuple


def build_gauge(base: SpinSpace, points, unitary: np.ndarray | None = None,
                target_gram: np.ndarray | None = None) -> GaugeMap:
    """Construct the distinguished gauge over a set of operators.

    Every value is ``unitary @ symmetric_wave_chart(y, base)``; with the
    default identity unitary the target is the spin space of the base point
    itself.  A supplied unitary must be an isometry from the spin inner
    product of the base onto ``target_gram``.
    """
    two_n = 2 * base.n
    if unitary is None:
        unitary = np.eye(two_n, dtype=complex)
    if target_gram is None:
        target_gram = base.spin_gram
    unitary = np.asarray(unitary, dtype=complex)
    target_gram = np.asarray(target_gram, dtype=complex)
    pullback = unitary.conj().T @ target_gram @ unitary
    if opnorm(pullback - base.spin_gram) > 1e-9 * max(1.0, opnorm(base.spin_gram)):
        raise ValueError("unitary is not an isometry onto the target inner product")

    values = []
    residuals = []
    for y in points:
        value = unitary @ symmetric_wave_chart(y, base).full_matrix()
        values.append(value)
        residuals.append(opnorm(y + value.conj().T @ target_gram @ value))
    return GaugeMap(points=tuple(np.asarray(y, dtype=complex) for y in points),
                    values=tuple(values),
                    target_gram=target_gram,
                    unitary=unitary,
                    base=base,
                    condition_residuals=tuple(float(r) for r in residuals))
