"""
The three function classes with fixed second coefficient and the disc that
zf'(z)/f(z) is guaranteed to stay in over |z| <= r.

K1 is keyed by ntilde = |2b|, K2 by (m, n) = (|4b - 2c|, |2c|) and K3 by
(u, v) = (|2c - 3b|, |2c|). The radius computations only ever see these
normalized parameters; raw (b, c) are kept when known because sharpness needs
their signs.
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.typing import ArrayLike

from starlike_radii.errors import DomainError, ParameterError

_BOUND_SLACK = 1e-12


class ClassKind(str, Enum):
    K1 = "K1"
    K2 = "K2"
    K3 = "K3"


@dataclass(frozen=True)
class ClassSpec:
    kind: ClassKind
    p1: float
    p2: float | None = None
    b: float | None = None
    c: float | None = None

    @property
    def params(self) -> tuple[float, ...]:
        return (self.p1,) if self.kind is ClassKind.K1 else (self.p1, self.p2)

    @property
    def has_raw(self) -> bool:
        return self.b is not None

    @property
    def label(self) -> str:
        match self.kind:
            case ClassKind.K1:
                return f"K1(ntilde={self.p1:g})"
            case ClassKind.K2:
                return f"K2(m={self.p1:g}, n={self.p2:g})"
            case _:
                return f"K3(u={self.p1:g}, v={self.p2:g})"

    def __str__(self) -> str:
        return self.label


def _class_kind(kind: ClassKind | str) -> ClassKind:
    try:
        return ClassKind(kind)
    except ValueError:
        raise ParameterError(f"Class {kind} not supported") from None


def _check_bound(name: str, value: float, upper: float) -> None:
    if not 0.0 <= value <= upper + _BOUND_SLACK:
        raise ParameterError(f"{name}={value:g} must lie in [0, {upper:g}]")


def _check_unit(name: str, value: float) -> None:
    if not abs(value) <= 1.0:
        raise ParameterError(f"|{name}|={abs(value):g} must not exceed 1")


def from_normalized(kind: ClassKind | str, p1: float, p2: float | None = None) -> ClassSpec:
    kind = _class_kind(kind)
    match kind:
        case ClassKind.K1:
            _check_bound("ntilde", p1, 2.0)
            return ClassSpec(kind, min(float(p1), 2.0))
        case ClassKind.K2:
            if p2 is None:
                raise ParameterError("K2 needs both m and n")
            _check_bound("m", p1, 2.0)
            _check_bound("n", p2, 2.0)
            return ClassSpec(kind, min(float(p1), 2.0), min(float(p2), 2.0))
        case ClassKind.K3:
            if p2 is None:
                raise ParameterError("K3 needs both u and v")
            _check_bound("u", p1, 1.0)
            _check_bound("v", p2, 2.0)
            return ClassSpec(kind, min(float(p1), 1.0), min(float(p2), 2.0))
    raise ParameterError(f"Class {kind} not supported")


def normalize(kind: ClassKind | str, b: float, c: float | None = None) -> ClassSpec:
    kind = _class_kind(kind)
    _check_unit("b", b)
    if kind is ClassKind.K1:
        spec = from_normalized(kind, abs(2 * b))
        return ClassSpec(kind, spec.p1, b=float(b))
    if c is None:
        raise ParameterError(f"{kind.value} needs both b and c")
    _check_unit("c", c)
    if kind is ClassKind.K2:
        spec = from_normalized(kind, abs(4 * b - 2 * c), abs(2 * c))
    else:
        spec = from_normalized(kind, abs(2 * c - 3 * b), abs(2 * c))
    return ClassSpec(kind, spec.p1, spec.p2, b=float(b), c=float(c))


@dataclass(frozen=True)
class DiscBound:
    a: float
    R: float
    r: float


def center(r: float) -> float:
    return (1 + r**4) / (1 - r**4)


def center_radius(a: float) -> float:
    """The r at which the disc center (1 + r^4)/(1 - r^4) reaches a."""
    if a < 1:
        raise DomainError(f"Disc centers start at 1, got a={a:g}")
    return ((a - 1) / (a + 1)) ** 0.25


def side_constants() -> dict[str, float]:
    return {
        "parabolic_center_3_2": center_radius(1.5),
        "lemniscate_center_sqrt2": center_radius(math.sqrt(2)),
        "exponential_center_e": center_radius(math.e),
        "exponential_center_cosh1": center_radius((math.e + 1 / math.e) / 2),
        "nephroid_center_5_3": center_radius(5 / 3),
    }


def radius_numerator(spec: ClassSpec) -> np.ndarray:
    """Ascending coefficients of the numerator of R(r)."""
    match spec.kind:
        case ClassKind.K1:
            n = spec.p1
            return np.array([0.0, n, 6.0, 4 * n, 6.0, n])
        case ClassKind.K2:
            s, p = spec.p1 + spec.p2, spec.p1 * spec.p2
            return np.array([0.0, s, 10 + 2 * p, 9 * s, 20 + 6 * p, 9 * s, 10 + 2 * p, s])
        case _:
            u, v = spec.p1, spec.p2
            uv = u * v
            return np.array([0.0, u + v, 8 + 2 * uv, 9 * u + 6 * v, 10 + 6 * uv, 9 * u + 3 * v, 2 + 2 * uv, u])


def radius_denominator(spec: ClassSpec) -> np.ndarray:
    """Ascending coefficients of the denominator of R(r) without the (1 - r^4) factor."""
    match spec.kind:
        case ClassKind.K1:
            return np.array([1.0, spec.p1, 1.0])
        case ClassKind.K2:
            return P.polymul([1.0, spec.p1, 1.0], [1.0, spec.p2, 1.0])
        case _:
            return P.polymul([1.0, spec.p1], [1.0, spec.p2, 1.0])


def disc_radius(spec: ClassSpec, r: ArrayLike):
    """R(r) for a scalar or an array of radii in [0, 1)."""
    r = np.asarray(r, dtype=float)
    if np.any((r < 0.0) | (r >= 1.0)):
        raise DomainError(f"Disc bounds need 0 <= r < 1, got r={r.min():g}..{r.max():g}")
    R = P.polyval(r, radius_numerator(spec)) / (P.polyval(r, radius_denominator(spec)) * (1 - r**4))
    return float(R) if R.ndim == 0 else R


def disc_bound(spec: ClassSpec, r: float) -> DiscBound:
    return DiscBound(a=center(r), R=disc_radius(spec, r), r=r)


def lemma_bound(b: float, alpha: float, r: ArrayLike):
    """Upper bound on |zp'(z)/p(z)| over |z| = r for p in P_b(alpha)."""
    if not abs(b) <= 1.0:
        raise DomainError(f"|b| must not exceed 1, got b={b:g}")
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha:g}")
    r = np.asarray(r, dtype=float)
    if np.any((r < 0.0) | (r >= 1.0)):
        raise DomainError(f"r must lie in [0, 1), got {r.min():g}..{r.max():g}")
    b = abs(b)
    head = 2 * (1 - alpha) * r / (1 - r**2)
    bound = head * (b * r**2 + 2 * r + b) / ((1 - 2 * alpha) * r**2 + 2 * b * (1 - alpha) * r + 1)
    return float(bound) if bound.ndim == 0 else bound
