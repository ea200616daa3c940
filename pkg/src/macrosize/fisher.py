"""Quantum and classical Fisher-information kernels.

The central quantity is the quantum Fisher information (QFI) of a state
``rho`` with respect to a Hermitian generator ``A``, evaluated from the
spectral decomposition

    F(rho, A) = 2 sum_{i,j} (l_i - l_j)^2 / (l_i + l_j) |<i|A|j>|^2,

restricted to pairs with ``l_i + l_j`` above a deterministic threshold.
For pure states this reduces to four times the variance, which is used
as a fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quantum
from .errors import DomainError

# Spectral pairs with l_i + l_j below this times the top eigenvalue are 0/0
# artifacts of rank deficiency and are excluded (count reported).
PAIR_THRESHOLD_FACTOR = 1e-12
# Grid cells with p below this times max(p) would let numerical tails of
# p'^2/p dominate the classical FI integral; they are excluded instead.
FLOOR_FACTOR = 1e-12


@dataclass(frozen=True)
class FisherResult:
    """A Fisher-information value plus how it was obtained."""

    value: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


def _check_pair(rho: np.ndarray, operator: np.ndarray):
    rho = quantum.validate_density(rho)
    operator = quantum.require_hermitian(operator, "observable")
    if rho.shape != operator.shape:
        raise DomainError(
            f"dimension mismatch: state {rho.shape} vs observable {operator.shape}"
        )
    return rho, operator


def variance(rho: np.ndarray, operator: np.ndarray) -> float:
    """Var(rho, A) = tr(rho A^2) - tr(rho A)^2."""
    rho, operator = _check_pair(rho, operator)
    mean = quantum.expectation(rho, operator)
    second = quantum.expectation(rho, operator @ operator)
    return second - mean * mean


def covariance(rho: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """Symmetrized covariance 0.5 tr[rho (AB + BA)] - tr[rho A] tr[rho B]."""
    rho, a = _check_pair(rho, a)
    b = quantum.require_hermitian(b, "observable B")
    if b.shape != a.shape:
        raise DomainError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sym = 0.5 * (a @ b + b @ a)
    return quantum.expectation(rho, sym) - quantum.expectation(
        rho, a
    ) * quantum.expectation(rho, b)


def qfi(rho: np.ndarray, operator: np.ndarray) -> FisherResult:
    """Quantum Fisher information of ``rho`` with respect to ``operator``."""
    rho, operator = _check_pair(rho, operator)
    pur = quantum.purity(rho)
    if pur > quantum.PURITY_PURE_THRESHOLD:
        mean = quantum.expectation(rho, operator)
        second = quantum.expectation(rho, operator @ operator)
        value = 4.0 * (second - mean * mean)
        return FisherResult(max(value, 0.0), "pure-variance", {"purity": pur})

    lam, vec = quantum.eigh(rho)
    a_eig = vec.conj().T @ operator @ vec
    sums = lam[:, None] + lam[None, :]
    diffs = lam[:, None] - lam[None, :]
    threshold = PAIR_THRESHOLD_FACTOR * float(lam[0])
    keep = sums > threshold
    weights = np.zeros_like(sums)
    weights[keep] = diffs[keep] ** 2 / sums[keep]
    value = 2.0 * float(np.sum(weights * np.abs(a_eig) ** 2))
    discarded = int(np.count_nonzero(~keep))
    discarded_mass = float(np.sum(np.abs(a_eig[~keep]) ** 2))
    return FisherResult(
        max(value, 0.0),
        "spectral",
        {
            "purity": pur,
            "discarded_pairs": discarded,
            "discarded_overlap_mass": discarded_mass,
            "pair_threshold": threshold,
        },
    )


def sub_qfi_f2(rho: np.ndarray, operator: np.ndarray) -> FisherResult:
    """Lower bound F2(rho, A) = -2 tr([rho, A]^2) <= F(rho, A)."""
    rho, operator = _check_pair(rho, operator)
    comm = rho @ operator - operator @ rho
    value = -2.0 * float(np.real(np.trace(comm @ comm)))
    return FisherResult(max(value, 0.0), "sub-qfi", {})


def classical_fi_grid(p: np.ndarray, h: float) -> FisherResult:
    """Classical Fisher information of a sampled density under translations.

    ``p`` is a probability density sampled on a uniform grid of step ``h``;
    the derivative is taken by central differences and cells below a floor
    (and the two boundary cells) are excluded, with the count reported.
    """
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 3:
        raise DomainError("density must be a 1-D array with at least 3 samples")
    if h <= 0:
        raise DomainError(f"grid step must be positive, got {h}")
    if np.any(p < 0):
        raise DomainError("density has negative entries")
    total = float(np.sum(p) * h)
    if abs(total - 1.0) > 1e-6:
        raise DomainError(f"density integrates to {total!r}, expected 1 within 1e-6")
    deriv = (p[2:] - p[:-2]) / (2.0 * h)
    interior = p[1:-1]
    floor = FLOOR_FACTOR * float(np.max(p))
    keep = interior > floor
    value = float(np.sum(deriv[keep] ** 2 / interior[keep]) * h)
    return FisherResult(
        value,
        "classical",
        {"excluded_cells": int(np.count_nonzero(~keep)), "floor": floor},
    )


def binary_trial_fi(probability: float, derivative: float) -> float:
    """FI of a two-outcome trial {R, 1-R}: R'^2 / (R (1 - R))."""
    if not 0.0 < probability < 1.0:
        raise DomainError(
            f"binary-trial probability must lie strictly in (0, 1), got {probability}"
        )
    return derivative**2 / (probability * (1.0 - probability))


def qfi_max_quadrature(
    rho: np.ndarray,
    x_op: np.ndarray,
    p_op: np.ndarray,
    angle_count: int = 64,
):
    """Maximize QFI over quadratures A(theta) = cos(theta) x + sin(theta) p.

    A coarse scan over ``theta in [0, pi)`` brackets the maximum, which is
    then refined by golden-section search to 1e-4 rad.  The returned value
    is never below any scanned value.
    """
    if angle_count < 8:
        raise DomainError(f"angle_count must be >= 8, got {angle_count}")
    rho = quantum.validate_density(rho)
    x_op = quantum.require_hermitian(x_op, "x quadrature")
    p_op = quantum.require_hermitian(p_op, "p quadrature")

    def f_of(theta: float) -> float:
        return qfi(rho, math.cos(theta) * x_op + math.sin(theta) * p_op).value

    thetas = np.linspace(0.0, math.pi, angle_count, endpoint=False)
    values = np.array([f_of(t) for t in thetas])
    best = int(np.argmax(values))
    step = math.pi / angle_count

    # Golden-section refinement on the bracketing interval (F is smooth and
    # pi-periodic, so the grid maximum brackets the true one).
    lo = thetas[best] - step
    hi = thetas[best] + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f_of(c), f_of(d)
    while hi - lo > 1e-4:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f_of(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f_of(d)
    theta_star = 0.5 * (lo + hi) % math.pi
    refined = f_of(theta_star)
    candidates = [(refined, theta_star)] + list(zip(values, thetas))
    best_value, best_theta = max(candidates, key=lambda pair: pair[0])
    result = qfi(rho, math.cos(best_theta) * x_op + math.sin(best_theta) * p_op)
    return float(best_theta), FisherResult(
        best_value, result.method, dict(result.diagnostics, scanned=angle_count)
    )
