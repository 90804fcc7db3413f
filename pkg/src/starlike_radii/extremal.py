"""
Extremal functions of K1 and K2 and the certification that a radius is sharp.

Each extremal is a product of linear and quadratic factors, so zf'(z)/f(z) is
evaluated as 1 plus one simple rational term per factor instead of through a
numerical derivative.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from starlike_radii.classbounds import ClassKind, ClassSpec
from starlike_radii.config import DEFAULT_TOLERANCES
from starlike_radii.errors import DomainError, ParameterError, SingularityError, UnsupportedError
from starlike_radii.regions import RegionKind, RegionTag, boundary_residual

_PARAMETER_SLACK = 1e-12

MOEBIUS_GROUP = frozenset(
    {
        RegionTag.PARABOLIC,
        RegionTag.ORDER,
        RegionTag.EXPONENTIAL,
        RegionTag.CARDIOID,
        RegionTag.LUNE,
        RegionTag.RATIONAL,
    }
)
# the published grouping also sends the K2 nephroid and sigmoid radii to the Moebius extremal at -i rho, where
# zf'/f = a - R lands next to, but not on, their left touch points
PUBLISHED_MOEBIUS_GROUPS = {
    ClassKind.K1: MOEBIUS_GROUP,
    ClassKind.K2: MOEBIUS_GROUP | {RegionTag.NEPHROID, RegionTag.SIGMOID},
}


class ExtremalTag(str, Enum):
    K1_MOEBIUS = "K1_Moebius"
    K1_ALT = "K1_Alt"
    K2_MOEBIUS = "K2_Moebius"
    K2_ALT = "K2_Alt"


@dataclass(frozen=True)
class ExtremalKind:
    tag: ExtremalTag
    b: float
    c: float | None = None

    def __post_init__(self):
        if not abs(self.b) <= 1.0:
            raise ParameterError(f"|b| must not exceed 1, got b={self.b:g}")
        if self.is_k2:
            if self.c is None or not abs(self.c) <= 1.0:
                raise ParameterError(f"{self.tag.value} needs |c| <= 1, got c={self.c}")
            if abs(2 * self.b - self.c) > 1.0 + _PARAMETER_SLACK:
                raise ParameterError(f"{self.tag.value} needs |2b - c| <= 1, got {abs(2 * self.b - self.c):g}")

    @property
    def is_k2(self) -> bool:
        return self.tag in (ExtremalTag.K2_MOEBIUS, ExtremalTag.K2_ALT)

    @property
    def beta(self) -> float:
        return 4 * self.b - 2 * self.c


def _terms(kind: ExtremalKind, z: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    z2 = z * z
    b = kind.b
    match kind.tag:
        case ExtremalTag.K1_MOEBIUS:
            return [(2 * z2, 1 + z2), (2 * z2, 1 - z2), (2j * b * z + 2 * z2, 1 - 2j * b * z - z2)]
        case ExtremalTag.K1_ALT:
            return [(-2 * b * z + 2 * z2, 1 - 2 * b * z + z2), (4 * z2, 1 - z2)]
        case ExtremalTag.K2_MOEBIUS:
            c, beta = kind.c, kind.beta
            return [
                (4 * z2, 1 + z2),
                (2 * z2, 1 - z2),
                (2j * c * z + 2 * z2, 1 - 2j * c * z - z2),
                (1j * beta * z + 2 * z2, 1 - 1j * beta * z - z2),
            ]
        case ExtremalTag.K2_ALT:
            c, beta = kind.c, kind.beta
            return [
                (-2 * c * z + 2 * z2, 1 - 2 * c * z + z2),
                (-beta * z + 2 * z2, 1 - beta * z + z2),
                (6 * z2, 1 - z2),
            ]
    raise ParameterError(f"Extremal {kind.tag} not supported")


def _as_disc_points(z: ArrayLike) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise DomainError("Extremal functions are evaluated on |z| < 1 only")
    return z


def logderiv(kind: ExtremalKind, z: ArrayLike, guard: float = DEFAULT_TOLERANCES.singularity):
    """zf'(z)/f(z) of the extremal; a scalar in gives a complex out."""
    points = _as_disc_points(z)
    total = np.ones_like(points)
    for numerator, denominator in _terms(kind, points):
        if np.any(np.abs(denominator) < guard):
            raise SingularityError(f"{kind.tag.value} has a pole or zero within {guard:g} of the evaluation point")
        total = total + numerator / denominator
    return complex(total) if total.ndim == 0 else total


def evaluate(kind: ExtremalKind, z: ArrayLike):
    """The extremal function f itself."""
    z = _as_disc_points(z)
    z2 = z * z
    b = kind.b
    match kind.tag:
        case ExtremalTag.K1_MOEBIUS:
            value = z * (1 + z2) / ((1 - z2) * (1 - 2j * b * z - z2))
        case ExtremalTag.K1_ALT:
            value = z * (1 - 2 * b * z + z2) / (1 - z2) ** 2
        case ExtremalTag.K2_MOEBIUS:
            value = z * (1 + z2) ** 2 / ((1 - z2) * (1 - 2j * kind.c * z - z2) * (1 - 1j * kind.beta * z - z2))
        case ExtremalTag.K2_ALT:
            value = z * (1 - 2 * kind.c * z + z2) * (1 - kind.beta * z + z2) / (1 - z2) ** 3
        case _:
            raise ParameterError(f"Extremal {kind.tag} not supported")
    return complex(value) if value.ndim == 0 else value


def companion(kind: ExtremalKind, z: ArrayLike):
    """The g paired with a K2 extremal f in the class definition."""
    if not kind.is_k2:
        raise ParameterError(f"{kind.tag.value} has no companion function")
    z = _as_disc_points(z)
    z2 = z * z
    if kind.tag is ExtremalTag.K2_MOEBIUS:
        value = z * (1 + z2) / ((1 - z2) * (1 - 2j * kind.c * z - z2))
    else:
        value = z * (1 - 2 * kind.c * z + z2) / (1 - z2) ** 2
    return complex(value) if value.ndim == 0 else value


class Direction(str, Enum):
    PLUS_I = "+i"
    MINUS_I = "-i"
    PLUS = "+"
    MINUS = "-"

    @property
    def unit(self) -> complex:
        return {"+i": 1j, "-i": -1j, "+": 1.0 + 0j, "-": -1.0 + 0j}[self.value]


@dataclass(frozen=True)
class SharpnessPoint:
    direction: Direction
    rho: float

    @property
    def z(self) -> complex:
        return self.direction.unit * self.rho


def sharpness_point(
    class_kind: ClassKind | str,
    region: RegionKind,
    b: float,
    *,
    rho: float,
    c: float | None = None,
    as_published: bool = False,
) -> tuple[SharpnessPoint, ExtremalKind]:
    """
    The point on |z| = rho where the extremal of the class touches the region boundary, and that extremal.
    Regions binding at the left end of the disc use the Moebius extremal at -i rho (i rho for b > 0); regions
    binding at the right end use the alternate extremal at rho (-rho for b > 0).
    """
    class_kind = ClassKind(class_kind)
    if class_kind is ClassKind.K3:
        raise UnsupportedError("No extremal function is known for K3")
    if b == 0:
        raise UnsupportedError("Sharpness points are only known for b != 0")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"Sharpness points need 0 < rho < 1, got {rho:g}")
    if class_kind is ClassKind.K2:
        if c is None:
            raise ParameterError("K2 sharpness needs c")
        if b * c < 0 or b * (4 * b - 2 * c) < 0:
            raise UnsupportedError(f"K2 extremal does not attain the disc bound for b={b:g}, c={c:g} (mixed signs)")

    moebius_group = PUBLISHED_MOEBIUS_GROUPS[class_kind] if as_published else MOEBIUS_GROUP
    if region.tag in moebius_group:
        direction = Direction.MINUS_I if b < 0 else Direction.PLUS_I
        tag = ExtremalTag.K1_MOEBIUS if class_kind is ClassKind.K1 else ExtremalTag.K2_MOEBIUS
    else:
        direction = Direction.PLUS if b < 0 else Direction.MINUS
        tag = ExtremalTag.K1_ALT if class_kind is ClassKind.K1 else ExtremalTag.K2_ALT
    kind = ExtremalKind(tag, b, c if class_kind is ClassKind.K2 else None)
    return SharpnessPoint(direction, rho), kind


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    residual: float
    tol: float
    w: complex
    point: SharpnessPoint
    kind: ExtremalKind


def certify_sharpness(
    spec: ClassSpec, region: RegionKind, rho: float, tol: float = DEFAULT_TOLERANCES.sharpness
) -> CertificationReport:
    if not spec.has_raw:
        raise UnsupportedError(f"Sharpness needs the raw coefficients of {spec}, not only normalized ones")
    point, kind = sharpness_point(spec.kind, region, spec.b, rho=rho, c=spec.c)
    w = logderiv(kind, point.z)
    residual = boundary_residual(region, w)
    passed = residual <= tol
    if not passed:
        logger.warning(f"Sharpness of {spec} {region} not certified: residual {residual:.3g} > {tol:g}")
    return CertificationReport(passed=passed, residual=residual, tol=tol, w=w, point=point, kind=kind)


def image_curve(kind: ExtremalKind, rho: float, samples: int = 720) -> np.ndarray:
    """Image of the circle |z| = rho under zf'(z)/f(z)."""
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    return logderiv(kind, rho * np.exp(1j * theta))


@dataclass(frozen=True)
class MembershipReport:
    kind: ExtremalKind
    samples: int
    min_real_part: float
    min_ratio_real_part: float | None

    @property
    def passed(self) -> bool:
        ratio_ok = self.min_ratio_real_part is None or self.min_ratio_real_part > 0
        return self.min_real_part > 0 and ratio_ok


def check_membership(
    kind: ExtremalKind, samples: int = 10_000, seed: int = 0, radius: float = 0.999
) -> MembershipReport:
    """
    Sample the defining conditions of the class on |z| <= radius: Re(f(z)(1 - z^2)/z) > 0 for K1, and
    Re(f/g) > 0, Re(g(z)(1 - z^2)/z) > 0 for K2 with its companion g.
    """
    rng = np.random.default_rng(seed)
    z = radius * np.sqrt(rng.uniform(1e-12, 1.0, samples)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, samples))
    if kind.is_k2:
        g = companion(kind, z)
        carath = g * (1 - z * z) / z
        ratio = evaluate(kind, z) / g
        return MembershipReport(kind, samples, float(carath.real.min()), float(ratio.real.min()))
    carath = evaluate(kind, z) * (1 - z * z) / z
    return MembershipReport(kind, samples, float(carath.real.min()), None)
