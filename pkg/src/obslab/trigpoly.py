"""Trigonometric polynomials and quantitative norm inequalities on (-pi, pi).

Implements the L^p Remez-type bound, its sup-norm form, the sub-level-set
measure estimate behind it, and the lower bound on integrals of |sin|
over measurable subsets of a window [delta, lambda*b*S + delta].

Subsets of (-pi, pi) are unions of cells of a fixed uniform grid
(N_CELLS cells); all integrals are midpoint quadrature on that grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

N_CELLS = 8192
SUP_SAMPLES = 4096


def grid_midpoints(n_cells: int = N_CELLS) -> np.ndarray:
    h = 2.0 * math.pi / n_cells
    return -math.pi + (np.arange(n_cells) + 0.5) * h


def cell_width(n_cells: int = N_CELLS) -> float:
    return 2.0 * math.pi / n_cells


def intervals_to_mask(intervals, n_cells: int = N_CELLS) -> np.ndarray:
    """Cells of (-pi, pi) whose midpoints fall in one of the intervals."""
    mids = grid_midpoints(n_cells)
    mask = np.zeros(n_cells, dtype=bool)
    for a, b in intervals:
        mask |= (mids > a) & (mids < b)
    return mask


def mask_measure(mask: np.ndarray) -> float:
    return float(mask.sum()) * cell_width(mask.shape[0])


def random_interval_union(rng: np.random.Generator, max_intervals: int = 5,
                          min_measure: float = 0.1,
                          n_cells: int = N_CELLS) -> np.ndarray:
    """Union of up to max_intervals random intervals with |E| >= min_measure.

    Tiny sets are rejected: the Remez constant blows up as |E| -> 0 and
    float precision tests nothing there.
    """
    while True:
        k = int(rng.integers(1, max_intervals + 1))
        ends = rng.uniform(-math.pi, math.pi, size=(k, 2))
        mask = intervals_to_mask([tuple(sorted(e)) for e in ends], n_cells)
        if mask_measure(mask) >= min_measure:
            return mask


@dataclass(frozen=True)
class TrigPoly:
    """f(theta) = sum_k a_k sin(k theta) + b_k cos(k theta), k = 0..n."""

    sin_coeffs: np.ndarray
    cos_coeffs: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float)).copy()
        b = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float)).copy()
        if a.shape != b.shape:
            raise ValueError("sin and cos coefficient arrays must match in length")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "sin_coeffs", a)
        object.__setattr__(self, "cos_coeffs", b)

    @property
    def degree(self) -> int:
        return self.sin_coeffs.shape[0] - 1

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = np.arange(self.degree + 1)
        arg = np.multiply.outer(theta, k)
        return np.sin(arg) @ self.sin_coeffs + np.cos(arg) @ self.cos_coeffs

    def is_zero(self) -> bool:
        return not (np.any(self.sin_coeffs[1:]) or np.any(self.cos_coeffs))

    def scaled(self, c: float) -> "TrigPoly":
        return TrigPoly(c * self.sin_coeffs, c * self.cos_coeffs)

    @staticmethod
    def random(rng: np.random.Generator, degree: int) -> "TrigPoly":
        return TrigPoly(rng.standard_normal(degree + 1),
                        rng.standard_normal(degree + 1))

    @cached_property
    def sup_norm(self) -> float:
        """Sup of |f| on [-pi, pi]: dense sampling plus local golden refinement."""
        theta = np.linspace(-math.pi, math.pi, SUP_SAMPLES)
        vals = np.abs(self(theta))
        i = int(np.argmax(vals))
        lo = theta[max(i - 1, 0)]
        hi = theta[min(i + 1, SUP_SAMPLES - 1)]
        return max(float(vals[i]), _golden_max(lambda t: abs(float(self(t))), lo, hi))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
    return max(fc, fd)


@dataclass(frozen=True)
class CheckResult:
    lhs: float
    rhs: float
    holds: bool


def remez_check(f: TrigPoly, E: np.ndarray, p: float) -> CheckResult:
    """L^p norm over (-pi, pi) against the Remez constant times the norm on E."""
    if not 1.0 <= p <= 8.0:
        raise ValueError("p must lie in [1, 8]")
    measure = mask_measure(E)
    if measure <= 0:
        raise ValueError("the subset E must have positive measure")
    h = cell_width(E.shape[0])
    vals = np.abs(f(grid_midpoints(E.shape[0])))
    lhs = float((vals ** p).sum() * h) ** (1.0 / p)
    on_E = float((vals[E] ** p).sum() * h) ** (1.0 / p)
    const = (64.0 / math.sin(measure / 4.0)) ** (2.0 * (f.degree + 1.0 / p))
    rhs = const * on_E
    return CheckResult(lhs, rhs, lhs <= rhs * (1.0 + 1e-9))


def sup_remez_check(f: TrigPoly, E: np.ndarray) -> CheckResult:
    """Sup-norm form: ||f||_C <= (2/sin(|E|/4))^(2n) sup_E |f|."""
    measure = mask_measure(E)
    if measure <= 0:
        raise ValueError("the subset E must have positive measure")
    vals = np.abs(f(grid_midpoints(E.shape[0])))
    sup_E = float(vals[E].max())
    # refine inside the best cell only; the constant's slack dominates elsewhere
    h = cell_width(E.shape[0])
    best = int(np.nonzero(E)[0][np.argmax(vals[E])])
    center = grid_midpoints(E.shape[0])[best]
    sup_E = max(sup_E, _golden_max(lambda t: abs(float(f(t))),
                                   center - h / 2, center + h / 2))
    const = (2.0 / math.sin(measure / 4.0)) ** (2.0 * f.degree)
    rhs = const * sup_E
    return CheckResult(f.sup_norm, rhs, f.sup_norm <= rhs * (1.0 + 1e-9))


def sublevel_measure_check(f: TrigPoly, eps: float) -> tuple[float, bool]:
    """Measure of {|f| <= (sin(eps/4)/2)^(2n) ||f||_C}; must not exceed eps.

    Degree-0 polynomials are treated as degree 1 (the estimate is stated
    for degrees >= 1; a constant has an empty sub-level set either way).
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no sub-level estimate")
    if not 0.0 < eps < 2.0 * math.pi:
        raise ValueError("eps must lie in (0, 2*pi)")
    n = max(f.degree, 1)
    threshold = (0.5 * math.sin(eps / 4.0)) ** (2 * n) * f.sup_norm
    vals = np.abs(f(grid_midpoints()))
    measure = float((vals <= threshold).sum()) * cell_width()
    tol = 16 * cell_width()
    return measure, measure <= eps + tol


@dataclass(frozen=True)
class SineBoundCase:
    """A subset F of the window [delta, lam*b*S + delta] for the |sin| bound."""

    lam: float
    b: float
    S: float
    delta: float
    F: np.ndarray             # bool over a uniform grid of the window

    def __post_init__(self):
        if self.lam <= 0 or self.b <= 0 or self.S <= 0:
            raise ValueError("lam, b, S must be positive")
        if not -math.pi / 2 <= self.delta <= math.pi / 2:
            raise ValueError("phase delta must lie in [-pi/2, pi/2]")
        m = np.asarray(self.F, dtype=bool).copy()
        m.flags.writeable = False
        object.__setattr__(self, "F", m)

    @property
    def window_length(self) -> float:
        return self.lam * self.b * self.S

    @property
    def cell(self) -> float:
        return self.window_length / self.F.shape[0]

    def measure(self) -> float:
        return float(self.F.sum()) * self.cell

    @staticmethod
    def random(rng: np.random.Generator, max_lbs: float = 100.0,
               n_cells: int = 1024) -> "SineBoundCase":
        lam = float(rng.uniform(0.5, 10.0))
        b = float(rng.uniform(0.1, 5.0))
        S = float(rng.uniform(0.05, max_lbs / (lam * b)))
        delta = float(rng.uniform(-math.pi / 2, math.pi / 2))
        while True:
            mask = np.zeros(n_cells, dtype=bool)
            for _ in range(int(rng.integers(1, 5))):
                i0 = int(rng.integers(0, n_cells))
                i1 = int(rng.integers(i0 + 1, n_cells + 1))
                mask[i0:i1] = True
            if mask.any():
                return SineBoundCase(lam, b, S, delta, mask)


def sine_integral_bound(case: SineBoundCase) -> CheckResult:
    """2^-50 (lam*b*S + pi/2)^-4 |F|^4 <= integral of |sin| over F."""
    measure = case.measure()
    if measure <= 0:
        raise ValueError("F must have positive measure")
    lhs = 2.0 ** -50 * (case.window_length + math.pi / 2.0) ** -4 * measure ** 4
    mids = case.delta + (np.nonzero(case.F)[0] + 0.5) * case.cell
    rhs = float(np.abs(np.sin(mids)).sum() * case.cell)
    return CheckResult(lhs, rhs, lhs <= rhs)
