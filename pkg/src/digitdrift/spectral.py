"""Fourier side: the drift law as a product of 2x2 complex matrices.

Under ``theta -> sum_d exp(-i d theta) mu(d)`` the shift operators turn
into phases, so each bit of ``a`` acts on C^2 through ``A0(theta)`` or
``A1(theta)`` and the closing step through ``A0inf(theta)``.  Functions
here take a scalar ``theta`` or a numpy array of them; matrices are arrays
of shape ``(..., 2, 2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .digits import to_word
from .distribution import TailedMeasure


def A0(theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float)
    m = np.zeros(t.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 1.0
    m[..., 0, 1] = 0.5 * np.exp(-1j * t)
    m[..., 1, 1] = 0.5 * np.exp(1j * t)
    return m


def A1(theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float)
    m = np.zeros(t.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 0.5 * np.exp(-1j * t)
    m[..., 1, 0] = 0.5 * np.exp(1j * t)
    m[..., 1, 1] = 1.0
    return m


def A0_inf(theta) -> np.ndarray:
    """Limit of ``A0(theta)**k``; the denominator ``2 - e^{i theta}`` never vanishes."""
    t = np.asarray(theta, dtype=float)
    m = np.zeros(t.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = 1.0
    m[..., 0, 1] = np.exp(-1j * t) / (2.0 - np.exp(1j * t))
    return m


def column_norm(M) -> np.ndarray | float:
    """Max over columns of the summed entry moduli (batched over leading axes)."""
    out = np.abs(np.asarray(M)).sum(axis=-2).max(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def phi(theta):
    return (1.0 + np.sqrt(5.0 + 4.0 * np.cos(theta))) / 4.0


def char_function(a: int, theta):
    """``(1,1) A0inf A_{a_N} ... A_{a_0} (1,0)^T`` evaluated at ``theta``."""
    t = np.asarray(theta, dtype=float)
    v = np.zeros(t.shape + (2,), dtype=complex)
    v[..., 0] = 1.0
    e_minus = np.exp(-1j * t)
    e_plus = np.exp(1j * t)
    for bit in to_word(a):
        x, y = v[..., 0], v[..., 1]
        if bit == 0:
            v = np.stack([x + 0.5 * e_minus * y, 0.5 * e_plus * y], axis=-1)
        else:
            v = np.stack([0.5 * e_minus * x, 0.5 * e_plus * x + y], axis=-1)
    out = v[..., 0] + e_minus / (2.0 - e_plus) * v[..., 1]
    return complex(out) if out.ndim == 0 else out


def char_function_series(dist: TailedMeasure, theta):
    """Direct sum of ``exp(-i d theta) dist(d)`` with the geometric tail in closed form."""
    t = np.asarray(theta, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for d, v in dist.finite.items():
        out += float(v) * np.exp(-1j * d * t)
    if dist.tail:
        r = 0.5 * np.exp(1j * t)
        out += float(dist.tail_anchor) * np.exp(-1j * dist.D * t) * r / (1.0 - r)
    return complex(out) if out.ndim == 0 else out


def l2_norm_squared(dist: TailedMeasure) -> Fraction:
    """Exact ``sum_d dist(d)**2``; the tail adds ``dist(D)**2 / 3``."""
    total = sum((v.to_fraction() ** 2 for v in dist.finite.values()), Fraction(0))
    if dist.tail:
        total += dist.tail_anchor.to_fraction() ** 2 / 3
    return total


def l2_norm_direct(dist: TailedMeasure) -> tuple[float, Fraction]:
    sq = l2_norm_squared(dist)
    return math.sqrt(sq), sq


def l2_norm_quadrature(a: int, points: int = 4096) -> float:
    """Parseval: the l2 norm from the midpoint rule on ``|mu_hat|**2`` over one period."""
    if points < 64:
        raise ValueError("points must be >= 64")
    theta = (np.arange(points) + 0.5) * (2.0 * np.pi / points)
    vals = char_function(a, theta)
    return math.sqrt(float(np.mean(np.abs(vals) ** 2)))


def asymptotic_norm_bound(l: int) -> float:
    """``sqrt(2) * (15 / (pi (l - 1)))**(1/4)``, defined for ``l >= 2``."""
    if l < 2:
        raise ValueError("bound needs l >= 2")
    return math.sqrt(2.0) * (15.0 / (math.pi * (l - 1))) ** 0.25


@dataclass
class LemmaReport:
    lemma: str
    grid: int
    violations: int
    min_margin: float
    argmin: float
    max_slack: float | None = None
    kmax: int | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _grid(n: int) -> np.ndarray:
    return np.arange(n) * (2.0 * np.pi / n)


def check_phi_lemma(grid: int = 4096, tol: float = 1e-12) -> LemmaReport:
    """Column norms of single, double and triple products against 1 and phi."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    th = _grid(grid)
    a0, a1 = A0(th), A1(th)
    f = phi(th)
    cases = [
        (a0, 1.0), (a1, 1.0), (a0 @ a1, 1.0), (a1 @ a0, 1.0),
        (a0 @ a1 @ a0, f), (a1 @ a0 @ a1, f),
    ]
    err = np.max([np.abs(column_norm(m) - target) for m, target in cases], axis=0)
    worst = int(np.argmax(err))
    return LemmaReport("phi", grid, int(np.sum(err > tol)), float(-err[worst]), float(th[worst]))


def check_reduction_lemma(k_max: int = 32, grid: int = 4096, tol: float = 1e-12) -> LemmaReport:
    """``||A0 A1^k A0||_1 <= ||A0 A1 A0||_1`` for ``k = 1..k_max`` on a uniform grid."""
    if k_max < 2 or grid < 2:
        raise ValueError("need k_max >= 2 and grid >= 2")
    th = _grid(grid)
    a0, a1 = A0(th), A1(th)
    ref = column_norm(a0 @ a1 @ a0)
    power = a1.copy()
    margins = []
    for _ in range(k_max):
        margins.append(ref - column_norm(a0 @ power @ a0))
        power = power @ a1
    margins = np.array(margins)
    k_idx, t_idx = np.unravel_index(int(np.argmin(margins)), margins.shape)
    return LemmaReport(
        "reduction", grid, int(np.sum(margins < -tol)),
        float(margins[k_idx, t_idx]), float(th[t_idx]),
        max_slack=float(margins.max()), kmax=k_max,
    )


def check_gauss_bound(grid: int = 100_000) -> LemmaReport:
    """``phi(theta) <= exp(-theta**2 / 15)`` on ``grid`` points of ``[-pi, pi]``."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    th = np.linspace(-np.pi, np.pi, grid)
    margin = np.exp(-th ** 2 / 15.0) - phi(th)
    i = int(np.argmin(margin))
    return LemmaReport("gauss", grid, int(np.sum(margin < 0.0)), float(margin[i]), float(th[i]))
