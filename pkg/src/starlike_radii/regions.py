"""
The ten Ma-Minda target regions for zf'(z)/f(z).

Every region has a membership predicate, a boundary curve and a "margin": the
radius of the largest disc centered at a real point a that the region is known
to contain. Five regions are tested with closed-form inequalities; the cardioid,
sine, rational and nephroid regions are images phi(D) of the unit disc and are
tested with a winding number against the sampled boundary phi(e^{it}).
"""
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike

from starlike_radii.config import DEFAULT_WINDING, WindingSettings
from starlike_radii.errors import ParameterError, ValidityError

SQRT2 = math.sqrt(2.0)
E = math.e
SIN1 = math.sin(1.0)
RATIONAL_K = 1.0 + SQRT2
_POINTS_PER_CHUNK = 1 << 20


class RegionTag(str, Enum):
    PARABOLIC = "parabolic"
    ORDER = "order"
    LEMNISCATE = "lemniscate"
    EXPONENTIAL = "exponential"
    CARDIOID = "cardioid"
    SINE = "sine"
    LUNE = "lune"
    RATIONAL = "rational"
    NEPHROID = "nephroid"
    SIGMOID = "sigmoid"


PHI_DEFINED = frozenset({RegionTag.CARDIOID, RegionTag.SINE, RegionTag.RATIONAL, RegionTag.NEPHROID})


@dataclass(frozen=True)
class RegionKind:
    tag: RegionTag
    alpha: float | None = None

    def __post_init__(self):
        try:
            tag = RegionTag(self.tag)
        except ValueError:
            raise ParameterError(f"Region {self.tag} not supported") from None
        object.__setattr__(self, "tag", tag)
        if tag is RegionTag.ORDER:
            if self.alpha is None or not 0.0 <= self.alpha < 1.0:
                raise ParameterError(f"Order region needs alpha in [0, 1), got {self.alpha}")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            raise ParameterError(f"Region {tag.value} takes no alpha")

    @classmethod
    def parse(cls, name: str, alpha: float | None = None) -> "RegionKind":
        try:
            tag = RegionTag(name.lower().strip())
        except ValueError:
            raise ParameterError(f"Region {name} not supported") from None
        if tag is RegionTag.ORDER:
            return cls(tag, 0.0 if alpha is None else alpha)
        return cls(tag, alpha)

    @property
    def name(self) -> str:
        return self.tag.value

    def __str__(self) -> str:
        if self.tag is RegionTag.ORDER:
            return f"order({self.alpha:g})"
        return self.name


def all_regions(alphas: tuple[float, ...] = (0.0,)) -> list[RegionKind]:
    regions = []
    for tag in RegionTag:
        if tag is RegionTag.ORDER:
            regions.extend(RegionKind(tag, alpha) for alpha in alphas)
        else:
            regions.append(RegionKind(tag))
    return regions


@dataclass(frozen=True)
class MarginSpec:
    """Affine margin a -> slope * a + offset, valid for lower_a < a < upper_a (endpoint strictness per flags)."""

    lower_a: float
    upper_a: float
    slope: int
    offset: float
    lower_is_strict: bool = True
    upper_is_strict: bool = False

    def admits(self, a: float) -> bool:
        if math.isnan(a):
            return False
        above = a > self.lower_a if self.lower_is_strict else a >= self.lower_a
        below = a < self.upper_a if self.upper_is_strict else a <= self.upper_a
        return above and below

    def __call__(self, a: float) -> float:
        return self.slope * a + self.offset

    @property
    def interval(self) -> str:
        left = "(" if self.lower_is_strict else "["
        right = ")" if self.upper_is_strict else "]"
        return f"{left}{self.lower_a:.9g}, {self.upper_a:.9g}{right}"


def margin_spec(region: RegionKind) -> MarginSpec:
    match region.tag:
        case RegionTag.PARABOLIC:
            return MarginSpec(0.5, 1.5, 1, -0.5)
        case RegionTag.ORDER:
            return MarginSpec(region.alpha, math.inf, 1, -region.alpha, upper_is_strict=True)
        case RegionTag.LEMNISCATE:
            return MarginSpec(2 * SQRT2 / 3, SQRT2, -1, SQRT2, lower_is_strict=False)
        case RegionTag.EXPONENTIAL:
            return MarginSpec(1 / E, (E + 1 / E) / 2, 1, -1 / E)
        case RegionTag.CARDIOID:
            return MarginSpec(1 / 3, 5 / 3, 1, -1 / 3)
        case RegionTag.SINE:
            return MarginSpec(1.0, 1 + SIN1, -1, 1 + SIN1, lower_is_strict=False)
        case RegionTag.LUNE:
            return MarginSpec(SQRT2 - 1, SQRT2 + 1, 1, -(SQRT2 - 1), upper_is_strict=True)
        case RegionTag.RATIONAL:
            return MarginSpec(2 * SQRT2 - 2, SQRT2, 1, -(2 * SQRT2 - 2))
        case RegionTag.NEPHROID:
            return MarginSpec(1.0, 5 / 3, -1, 5 / 3, lower_is_strict=False)
        case RegionTag.SIGMOID:
            return MarginSpec(1.0, 2 * E / (1 + E), -1, 2 * E / (1 + E), lower_is_strict=False)
        case _:
            raise ParameterError(f"Region {region} not supported")


def margin(region: RegionKind, a: float) -> float:
    spec = margin_spec(region)
    if not spec.admits(a):
        raise ValidityError(f"Disc center a={a:.12g} is outside the validity interval {spec.interval} of {region}")
    return spec(a)


def phi(region: RegionKind, z: ArrayLike) -> np.ndarray:
    """Generating function of the region, evaluated on |z| <= 1."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        match region.tag:
            case RegionTag.PARABOLIC:
                root = np.sqrt(z)
                return 1 + (2 / np.pi**2) * np.log((1 + root) / (1 - root)) ** 2
            case RegionTag.ORDER:
                return (1 + (1 - 2 * region.alpha) * z) / (1 - z)
            case RegionTag.LEMNISCATE:
                return np.sqrt(1 + z)
            case RegionTag.EXPONENTIAL:
                return np.exp(z)
            case RegionTag.CARDIOID:
                return 1 + 4 * z / 3 + 2 * z**2 / 3
            case RegionTag.SINE:
                return 1 + np.sin(z)
            case RegionTag.LUNE:
                return z + np.sqrt(1 + z**2)
            case RegionTag.RATIONAL:
                return 1 + (z / RATIONAL_K) * (RATIONAL_K + z) / (RATIONAL_K - z)
            case RegionTag.NEPHROID:
                return 1 + z - z**3 / 3
            case RegionTag.SIGMOID:
                return 2 / (1 + np.exp(-z))
            case _:
                raise ParameterError(f"Region {region} not supported")


def _angles(samples: int) -> np.ndarray:
    # both 0 and pi are always sampled; the touch points of every region lie on the real axis
    upper = samples - samples // 2
    first = np.linspace(0.0, np.pi, upper + 1)
    second = np.linspace(np.pi, 2 * np.pi, samples // 2 + 1)[1:]
    return np.concatenate([first, second])


def _polyline(vertices: list[complex], samples: int) -> np.ndarray:
    vertices = np.asarray(vertices, dtype=complex)
    lengths = np.abs(np.diff(vertices))
    counts = np.maximum(1, np.floor(samples * lengths / lengths.sum()).astype(int))
    counts[np.argmax(lengths)] += samples - counts.sum()
    pieces = [
        np.linspace(start, end, count, endpoint=False) for start, end, count in zip(vertices, vertices[1:], counts)
    ]
    return np.concatenate(pieces + [vertices[-1:]])


def boundary_curve(region: RegionKind, samples: int, extent: float = DEFAULT_WINDING.extent) -> np.ndarray:
    """
    Closed sampled boundary (samples + 1 points, last == first).

    The parabolic and order boundaries are unbounded; they are truncated to
    |Im w| <= extent and closed with a vertical segment.
    """
    if samples < 16:
        raise ParameterError(f"Boundary curves need at least 16 samples, got {samples}")
    match region.tag:
        case RegionTag.PARABOLIC:
            arc_samples = 3 * samples // 4
            v = np.linspace(-extent, extent, arc_samples + 1)
            arc = (1 + v**2) / 2 + 1j * v
            closing = np.linspace(arc[-1], arc[0], samples - arc_samples + 1)[1:]
            curve = np.concatenate([arc, closing])
        case RegionTag.ORDER:
            alpha = region.alpha
            right = alpha + extent
            corners = [alpha - 1j * extent, alpha + 1j * extent, right + 1j * extent, right - 1j * extent]
            curve = _polyline(corners + corners[:1], samples)
        case RegionTag.LUNE:
            outer_samples = samples // 2
            outer = 1 + SQRT2 * np.exp(1j * np.linspace(-3 * np.pi / 4, 3 * np.pi / 4, outer_samples + 1))
            inner = -1 + SQRT2 * np.exp(1j * np.linspace(np.pi / 4, -np.pi / 4, samples - outer_samples + 1))
            curve = np.concatenate([outer, inner[1:]])
        case _:
            curve = phi(region, np.exp(1j * _angles(samples)))
    curve[-1] = curve[0]
    return curve


@lru_cache(maxsize=64)
def _sampled_boundary(region: RegionKind, samples: int, extent: float) -> np.ndarray:
    curve = boundary_curve(region, samples, extent)
    curve.setflags(write=False)
    return curve


def _chunked(fn, curve: np.ndarray, points: np.ndarray) -> np.ndarray:
    step = max(1, _POINTS_PER_CHUNK // curve.size)
    return np.concatenate([fn(curve, points[i : i + step]) for i in range(0, points.size, step)] or [np.empty(0)])


def _polyline_distance(curve: np.ndarray, points: np.ndarray) -> np.ndarray:
    start = curve[:-1]
    segment = np.diff(curve)
    offset = points[:, None] - start[None, :]
    t = np.clip((offset * segment.conj()).real / np.maximum(np.abs(segment) ** 2, 1e-300), 0.0, 1.0)
    return np.abs(offset - t * segment).min(axis=1)


def _winding_numbers(curve: np.ndarray, points: np.ndarray) -> np.ndarray:
    d = curve[None, :] - points[:, None]
    return np.angle(d[:, 1:] / d[:, :-1]).sum(axis=1) / (2 * np.pi)


def winding_contains(region: RegionKind, w: ArrayLike, settings: WindingSettings = DEFAULT_WINDING) -> np.ndarray:
    """Winding-number membership against the sampled boundary, refining near the polyline."""
    points = np.asarray(w, dtype=complex).ravel()
    inside = np.zeros(points.size, dtype=bool)
    pending = np.arange(points.size)
    samples = settings.samples
    for doubling in range(settings.max_doublings + 1):
        curve = _sampled_boundary(region, samples, settings.extent)
        distance = _chunked(_polyline_distance, curve, points[pending])
        finest = doubling == settings.max_doublings
        settled = np.ones(pending.size, dtype=bool) if finest else distance > settings.near_boundary
        candidates = pending[settled & (distance > settings.on_boundary)]
        if candidates.size:
            inside[candidates] = np.abs(_chunked(_winding_numbers, curve, points[candidates])) > 0.5
        pending = pending[~settled]
        if not pending.size:
            break
        samples *= 2
    return inside


def _closed_form(region: RegionKind, w: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        match region.tag:
            case RegionTag.PARABOLIC:
                return w.real > np.abs(w - 1)
            case RegionTag.ORDER:
                return w.real > region.alpha
            case RegionTag.LEMNISCATE:
                return (w.real > 0) & (np.abs(w * w - 1) < 1)
            case RegionTag.EXPONENTIAL:
                right = w.real > 0
                return right & (np.abs(np.log(np.where(right, w, 1))) < 1)
            case RegionTag.LUNE:
                return (w.real > 0) & (2 * np.abs(w) > np.abs(w * w - 1))
            case RegionTag.SIGMOID:
                q = w / (2 - w)
                cut = ~np.isfinite(q) | ((q.imag == 0) & (q.real <= 0))
                return ~cut & (np.abs(np.log(np.where(cut, 1, q))) < 1)
            case _:
                raise ParameterError(f"Region {region} has no closed-form predicate")


def contains_many(region: RegionKind, w: ArrayLike, settings: WindingSettings = DEFAULT_WINDING) -> np.ndarray:
    points = np.asarray(w, dtype=complex)
    if region.tag in PHI_DEFINED:
        inside = winding_contains(region, points, settings)
    else:
        inside = _closed_form(region, points.ravel())
    return inside.reshape(points.shape)


def contains(region: RegionKind, w: complex) -> bool:
    return bool(contains_many(region, [w])[0])


def boundary_residual(region: RegionKind, w: complex) -> float:
    """How far w is from satisfying the region's boundary identity at its touch point."""
    w = complex(w)
    match region.tag:
        case RegionTag.PARABOLIC:
            return abs(w.real - abs(w - 1))
        case RegionTag.ORDER:
            return abs(w.real - region.alpha)
        case RegionTag.LEMNISCATE:
            return abs(abs(w * w - 1) - 1)
        case RegionTag.EXPONENTIAL:
            return abs(abs(np.log(w)) - 1)
        case RegionTag.CARDIOID:
            return abs(w - 1 / 3)
        case RegionTag.SINE:
            return abs(w - (1 + SIN1))
        case RegionTag.LUNE:
            return abs(abs(w * w - 1) - 2 * abs(w))
        case RegionTag.RATIONAL:
            return abs(w - (2 * SQRT2 - 2))
        case RegionTag.NEPHROID:
            return abs(abs(w) - 5 / 3)
        case RegionTag.SIGMOID:
            return abs(abs(np.log(w / (2 - w))) - 1)
        case _:
            raise ParameterError(f"Region {region} not supported")
