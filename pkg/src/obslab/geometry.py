"""Measurable space-time sets on grids: slices, good-time sets, density points.

A "measurable set" here is any union of grid cells; measures are exact
cell counts times cell volumes.  Time cells are the half-open intervals
[i*dt, (i+1)*dt).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ContainmentError, ResolutionError
from .spectral import SpectralDomain


def ball_volume(dim: int, radius: float) -> float:
    if dim == 1:
        return 2.0 * radius
    if dim == 2:
        return math.pi * radius * radius
    raise ValueError("only dimensions 1 and 2 are supported")


@dataclass(frozen=True)
class TimeSet:
    """A union of time cells inside (0, horizon)."""

    mask: np.ndarray          # (n_time,) bool
    horizon: float

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool).copy()
        m.flags.writeable = False
        object.__setattr__(self, "mask", m)

    @property
    def n_time(self) -> int:
        return self.mask.shape[0]

    @property
    def dt(self) -> float:
        return self.horizon / self.n_time

    def measure(self) -> float:
        return float(self.mask.sum()) * self.dt

    def measure_in(self, a: float, b: float) -> float:
        """Exact measure of the set intersected with the interval (a, b)."""
        if b <= a:
            return 0.0
        dt = self.dt
        idx = np.nonzero(self.mask)[0]
        lo = np.maximum(idx * dt, a)
        hi = np.minimum((idx + 1) * dt, b)
        return float(np.clip(hi - lo, 0.0, None).sum())

    def contains_time(self, t: float) -> bool:
        i = int(t / self.dt)
        return 0 <= i < self.n_time and bool(self.mask[i])

    @staticmethod
    def full(n_time: int, horizon: float) -> "TimeSet":
        return TimeSet(np.ones(n_time, dtype=bool), horizon)

    @staticmethod
    def from_intervals(intervals, n_time: int, horizon: float) -> "TimeSet":
        """Cells whose midpoints fall in one of the (a, b) intervals."""
        mids = (np.arange(n_time) + 0.5) * (horizon / n_time)
        mask = np.zeros(n_time, dtype=bool)
        for a, b in intervals:
            mask |= (mids > a) & (mids < b)
        return TimeSet(mask, horizon)


@dataclass(frozen=True)
class SpaceTimeSet:
    """Boolean occupancy over (time cells) x (space cells) of a domain grid."""

    mask: np.ndarray          # (n_time, n_cells) bool
    horizon: float
    domain: SpectralDomain

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool).copy()
        if m.ndim != 2 or m.shape[1] != self.domain.n_cells:
            raise ValueError(
                f"mask must have shape (n_time, {self.domain.n_cells}), got {m.shape}"
            )
        if self.horizon <= 0:
            raise ValueError("time horizon must be positive")
        m.flags.writeable = False
        object.__setattr__(self, "mask", m)

    @property
    def n_time(self) -> int:
        return self.mask.shape[0]

    @property
    def dt(self) -> float:
        return self.horizon / self.n_time

    def measure(self) -> float:
        return float(self.mask.sum()) * self.domain.cell_volume * self.dt

    def time_index(self, t: float) -> int:
        """Nearest-cell snap of a time in (0, horizon)."""
        if not 0.0 < t < self.horizon:
            raise ValueError(f"time {t} outside (0, {self.horizon})")
        return min(int(t / self.dt), self.n_time - 1)

    def slice_at(self, t: float):
        """Spatial mask D_t and its measure at the snapped time."""
        row = self.mask[self.time_index(t)]
        return row, float(row.sum()) * self.domain.cell_volume

    @cached_property
    def slice_measures(self) -> np.ndarray:
        out = self.mask.sum(axis=1) * self.domain.cell_volume
        out.flags.writeable = False
        return out

    # -- constructors -------------------------------------------------

    @staticmethod
    def full_cylinder(domain: SpectralDomain, horizon: float, n_time: int
                      ) -> "SpaceTimeSet":
        return SpaceTimeSet(np.ones((n_time, domain.n_cells), dtype=bool),
                            horizon, domain)

    @staticmethod
    def random(domain: SpectralDomain, horizon: float, n_time: int,
               rng: np.random.Generator, fill: float = 0.3,
               min_measure_fraction: float = 0.0) -> "SpaceTimeSet":
        """Random union of space-time boxes with roughly the target fill.

        Boxes are drawn until the occupied fraction reaches ``fill``;
        the result is rejected and redrawn while its measure is below
        ``min_measure_fraction`` of the full cylinder.
        """
        total = n_time * domain.n_cells
        for _ in range(1000):
            mask = np.zeros((n_time, domain.n_cells), dtype=bool)
            while mask.sum() < fill * total:
                t0 = rng.integers(0, n_time)
                t1 = rng.integers(t0 + 1, n_time + 1)
                x0 = rng.integers(0, domain.n_cells)
                x1 = rng.integers(x0 + 1, domain.n_cells + 1)
                mask[t0:t1, x0:x1] = True
            if mask.sum() >= min_measure_fraction * total:
                return SpaceTimeSet(mask, horizon, domain)
        raise RuntimeError("failed to draw a random set of the requested measure")

    # -- serialization ------------------------------------------------

    def to_rle(self) -> str:
        """Run-length text: header line, then one 'start:length,...' line per row."""
        lines = [f"nt={self.n_time} nx={self.domain.n_cells} T={self.horizon!r}"]
        for row in self.mask:
            runs = []
            idx = np.nonzero(row)[0]
            if idx.size:
                breaks = np.nonzero(np.diff(idx) > 1)[0]
                starts = np.concatenate([[idx[0]], idx[breaks + 1]])
                ends = np.concatenate([idx[breaks], [idx[-1]]])
                runs = [f"{s}:{e - s + 1}" for s, e in zip(starts, ends)]
            lines.append(",".join(runs))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_rle(text: str, domain: SpectralDomain) -> "SpaceTimeSet":
        lines = text.strip("\n").split("\n")
        header = dict(kv.split("=") for kv in lines[0].split())
        nt, nx = int(header["nt"]), int(header["nx"])
        horizon = float(header["T"])
        if nx != domain.n_cells:
            raise ValueError(f"fixture has {nx} space cells, domain has {domain.n_cells}")
        mask = np.zeros((nt, nx), dtype=bool)
        for i, line in enumerate(lines[1:]):
            if not line:
                continue
            for run in line.split(","):
                s, n = (int(v) for v in run.split(":"))
                mask[i, s:s + n] = True
        return SpaceTimeSet(mask, horizon, domain)


@dataclass(frozen=True)
class GoodTimeSet:
    """The times whose slice carries at least the average slice measure."""

    times: TimeSet
    threshold: float          # slice-measure cutoff |D|/(2T)
    ball_volume: float


def good_time_set(D: SpaceTimeSet, ball_center, ball_radius: float) -> GoodTimeSet:
    """Times t with |D_t| >= |D|/(2T), with the measure lower bound asserted.

    The supplied ball must contain D's spatial support (cell centers) and
    every slice must fit in it, which is what the |E| lower bound needs.
    """
    measure = D.measure()
    if measure <= 0:
        raise ValueError("the space-time set must have positive measure")
    center = np.atleast_1d(np.asarray(ball_center, dtype=float))
    support = D.mask.any(axis=0)
    pts = D.domain.points[support]
    if pts.size and np.linalg.norm(pts - center, axis=1).max() > ball_radius + 1e-12:
        raise ContainmentError("supplied ball does not contain the spatial support")
    vol_ball = ball_volume(D.domain.dim, ball_radius)
    slice_measures = D.slice_measures
    if slice_measures.max() > vol_ball + 1e-12:
        raise ContainmentError(
            "a slice exceeds the ball volume; enlarge the ball radius"
        )
    threshold = measure / (2.0 * D.horizon)
    E = TimeSet(slice_measures >= threshold, D.horizon)
    # both slice-set conclusions, asserted on every call
    assert E.measure() >= measure / (2.0 * vol_ball) - 1e-12
    assert np.all(E.mask[:, None] & D.mask <= D.mask)
    return GoodTimeSet(times=E, threshold=threshold, ball_volume=vol_ball)


DENSITY_RADIUS_DIVISORS = (8, 16, 32, 64)


def density_proxy(E: TimeSet, ell: float, radii=None) -> float:
    """min over the radius ladder of |E cap (ell-r, ell+r)| / (2r)."""
    if radii is None:
        radii = [E.horizon / d for d in DENSITY_RADIUS_DIVISORS]
    return min(E.measure_in(ell - r, ell + r) / (2.0 * r) for r in radii)


def find_density_point(E: TimeSet, radii=None) -> float:
    """A time in E whose small-radius density proxy is maximal (and >= 1/2)."""
    if E.measure() <= 0:
        raise ValueError("the time set must have positive measure")
    dt = E.dt
    candidates = (np.nonzero(E.mask)[0] + 0.5) * dt
    proxies = np.array([density_proxy(E, c, radii) for c in candidates])
    best = int(np.argmax(proxies))
    if proxies[best] < 0.5 - 1e-12:
        raise ResolutionError(
            f"no grid point reaches density proxy 1/2 (best {proxies[best]:.4f}); "
            "refine the time grid"
        )
    return float(candidates[best])


@dataclass(frozen=True)
class DensitySequence:
    """Certified telescoping times ell_m decreasing to the density point."""

    ell: float
    ell1: float
    mu: float
    beta: float
    terms: np.ndarray         # ell_1, ..., ell_depth

    def __post_init__(self):
        t = np.asarray(self.terms, dtype=float).copy()
        t.flags.writeable = False
        object.__setattr__(self, "terms", t)


def sequence_terms(ell: float, ell1: float, mu: float, depth: int) -> np.ndarray:
    """ell_{m+1} = ell + mu^(-m) (ell_1 - ell), m = 0..depth-1."""
    m = np.arange(depth)
    return ell + mu ** (-m.astype(float)) * (ell1 - ell)


def certificate_holds(E: TimeSet, terms: np.ndarray) -> bool:
    """ell_m - ell_{m+1} <= 3 |E cap (ell_{m+1}, ell_m)| for all pairs."""
    for hi, lo in zip(terms[:-1], terms[1:]):
        if hi - lo > 3.0 * E.measure_in(lo, hi) + 1e-12:
            return False
    return True


def mu_from_beta(beta: float) -> float:
    return math.sqrt((beta + 2.0) / (beta + 1.0))


def telescoping_sequence(E: TimeSet, ell: float, beta: float, depth: int,
                         mu: float | None = None) -> DensitySequence:
    """Largest ell_1 in (ell, T) whose sequence passes the certificate.

    Scans ell_1 downward from the horizon in steps of one time cell.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if depth < 2:
        raise ValueError("depth must be at least 2")
    if density_proxy(E, ell) < 0.5 - 1e-12:
        raise ValueError("ell must be a density point of E (proxy >= 1/2)")
    if mu is None:
        mu = mu_from_beta(beta)
    dt = E.dt
    ell1 = E.horizon - dt
    while ell1 > ell + dt / 2:
        terms = sequence_terms(ell, ell1, mu, depth)
        if certificate_holds(E, terms):
            return DensitySequence(ell=ell, ell1=ell1, mu=mu, beta=beta, terms=terms)
        ell1 -= dt
    raise ResolutionError(
        "no ell_1 passes the telescoping certificate at this grid resolution"
    )
