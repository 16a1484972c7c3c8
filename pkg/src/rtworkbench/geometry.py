"""Points on the unit sphere and spherical cap measures.

A cap is described by its *chord radius* ``r``: the set of unit vectors at
Euclidean distance at most ``r`` from a pole.  Its angular radius is
``theta = 2 asin(r / 2)``, and the normalized surface measure on
``S^{h-1}`` is

    int_0^theta sin^{h-2}(phi) dphi  /  int_0^pi sin^{h-2}(phi) dphi.

The numerator is integrated by adaptive Simpson in log space; the
denominator is the closed form ``sqrt(pi) Gamma((h-1)/2) / Gamma(h/2)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .rng import stream

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class SpherePointSet:
    h: int
    points: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.h:
            raise InputError(f"points must have shape (count, {self.h})")
        if len(pts) and np.abs((pts * pts).sum(axis=1) - 1.0).max() > 1e-12:
            raise InputError("points are not unit vectors")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {"h": self.h, "seed": self.seed, "points": self.points.tolist()}

    def to_json(self) -> str:
        # json uses repr() for floats, which is the shortest round-trip form
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> SpherePointSet:
        return cls(int(data["h"]), np.array(data["points"], dtype=np.float64).reshape(-1, int(data["h"])), data.get("seed"))


@dataclass(frozen=True)
class CapQuery:
    h: int
    epsilon: float
    mu: float = field(init=False)

    def __post_init__(self):
        if self.h < 2:
            raise InputError("dimension must be at least 2")
        if not 0 < self.epsilon < 1:
            raise InputError("epsilon must lie in (0, 1)")
        object.__setattr__(self, "mu", self.epsilon / math.sqrt(self.h))

    @property
    def delta(self) -> float:
        """Height of the cap boundary above the equator, for chord sqrt(2) - mu."""
        return self.epsilon * math.sqrt(2 / self.h) - self.epsilon**2 / (2 * self.h)


@dataclass(frozen=True)
class CapCheck:
    lhs: float
    rhs: float
    holds: bool


def normalize_rows(x: np.ndarray) -> np.ndarray:
    """Scale each row to unit norm (two passes keep squared norms within 1e-15)."""
    x = x / np.linalg.norm(x, axis=1, keepdims=True)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def sample_sphere_points(h: int, count: int, seed: int, name: str = "sphere") -> SpherePointSet:
    """Draw ``count`` i.i.d. uniform points on ``S^{h-1}`` by normalizing Gaussians."""
    if h < 2:
        raise InputError("dimension must be at least 2")
    if count < 1:
        raise InputError("need at least one point")
    g = stream(seed, name).standard_normal((count, h))
    return SpherePointSet(h, normalize_rows(g), seed)


def distance(p, q) -> float:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise InputError(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(np.linalg.norm(p - q))


def chord_to_angle(chord: float) -> float:
    return 2.0 * math.asin(min(chord, 2.0) / 2.0)


def diameter_to_chord(diameter: float) -> float:
    """Chord radius of the cap whose diameter is ``diameter`` (at most a hemisphere)."""
    theta = math.asin(diameter / 2.0)
    return 2.0 * math.sin(theta / 2.0)


def _log_sphere_normalizer(h: int) -> float:
    # log int_0^pi sin^{h-2}
    return 0.5 * math.log(math.pi) + math.lgamma((h - 1) / 2) - math.lgamma(h / 2)


def _adaptive_simpson(f, a: float, b: float, tol: float, noise: float = 1e-15, depth: int = 40) -> float:
    """Adaptive Simpson; ``noise`` is the relative evaluation error of ``f``."""
    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, fa, fm, fb, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, lo, mid)
        right = simpson(fm, frm, fb, mid, hi)
        delta = left + right - whole
        # tol halves per level; stop once the estimate change is below what
        # the integrand's own evaluation error can resolve
        if depth <= 0 or abs(delta) <= 15.0 * tol or abs(delta) <= noise * abs(left + right):
            return left + right + delta / 15.0
        return recurse(lo, mid, fa, flm, fm, left, tol / 2, depth - 1) + recurse(
            mid, hi, fm, frm, fb, right, tol / 2, depth - 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, depth)


def _log_cap_integral(h: int, theta: float) -> float:
    """log of int_0^theta sin^{h-2}(phi) dphi for 0 < theta <= pi/2."""
    k = h - 2
    if k == 0:
        return math.log(theta)
    if k * theta * theta < 1e-6:
        # sin^k(phi) = phi^k (1 - k phi^2/6 + k(5k-2) phi^4/360 - ...), integrated termwise;
        # the dropped term is O((k theta^2)^3) relative
        t2 = theta * theta
        series = 1.0 / (k + 1) - k * t2 / (6.0 * (k + 3)) + k * (5 * k - 2) * t2 * t2 / (360.0 * (k + 5))
        return (k + 1) * math.log(theta) + math.log(series)
    log_peak = k * math.log(math.sin(theta))

    def f(phi):
        s = math.sin(phi)
        if s <= 0.0:
            return 0.0
        return math.exp(k * math.log(s) - log_peak)

    # The scaled integrand peaks at 1 at theta and decays on a scale of
    # w = 1 / (k cot(theta) + sqrt(k)); split the last 60 w into panels of
    # width ~w so Simpson cannot step over the mass.
    cot = math.cos(theta) / math.sin(theta)
    w = 1.0 / (k * cot + math.sqrt(k))
    span = min(theta, 60.0 * w)
    panels = max(4, math.ceil(span / w))
    tol = 1e-13 * w / panels
    # exp(k log sin) carries ~k ulps of relative error
    noise = 8.0 * k * 2.2e-16
    edges = np.linspace(theta - span, theta, panels + 1)
    total = 0.0
    if theta - span > 0.0:
        total += _adaptive_simpson(f, 0.0, theta - span, tol, noise)
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += _adaptive_simpson(f, float(lo), float(hi), tol, noise)
    return math.log(total) + log_peak


def cap_measure(h: int, chord_radius: float) -> float:
    """Normalized measure of ``{x in S^{h-1} : |x - pole| <= chord_radius}``."""
    if h < 2:
        raise InputError("dimension must be at least 2")
    if not 0.0 <= chord_radius <= 2.0:
        raise InputError(f"chord radius {chord_radius} outside [0, 2]")
    theta = chord_to_angle(chord_radius)
    if theta == 0.0:
        return 0.0
    if theta >= math.pi:
        return 1.0
    small = min(theta, math.pi - theta)
    part = math.exp(_log_cap_integral(h, small) - _log_sphere_normalizer(h))
    return part if theta <= math.pi / 2 else 1.0 - part


def check_cap_lower_bound(q: CapQuery) -> CapCheck:
    """Compare the cap of chord radius sqrt(2) - eps/sqrt(h) with 1/2 - sqrt(2) eps."""
    if q.h < 5:
        raise InputError("the cap lower bound is stated for h >= 5")
    lhs = cap_measure(q.h, SQRT2 - q.mu)
    rhs = 0.5 - SQRT2 * q.epsilon
    return CapCheck(lhs, rhs, lhs >= rhs)


def check_cap_upper_bound(h: int, mu: float) -> CapCheck:
    """Compare the cap of diameter 2 - mu with 2 exp(-mu h / 2)."""
    if not 0.0 <= mu < 1.0:
        raise InputError("mu must lie in [0, 1)")
    if h < 2:
        raise InputError("dimension must be at least 2")
    lhs = cap_measure(h, diameter_to_chord(2.0 - mu))
    rhs = 2.0 * math.exp(-mu * h / 2.0)
    return CapCheck(lhs, rhs, lhs <= rhs)
