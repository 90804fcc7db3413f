"""
Radius polynomials for every (class, region) pair and the smallest-root solver.

Each polynomial is the cleared-denominator form of margin(a(r)) = R(r), written
out coefficient by coefficient in ntilde / (m, n) / (u, v) and alpha. The
solver scans a uniform grid on (0, 1) for the first sign change, bisects the
bracket down to 1e-14 and applies one Newton step that is only accepted if it
stays inside the bracket.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as P

from starlike_radii.classbounds import ClassKind, ClassSpec
from starlike_radii.config import DEFAULT_SOLVER, SolverSettings
from starlike_radii.errors import NoRootError, ParameterError
from starlike_radii.regions import E, SIN1, SQRT2, RegionKind, RegionTag


class RootMethod(str, Enum):
    POLYNOMIAL = "polynomial"
    MARGIN_ORACLE = "margin_oracle"


@dataclass(frozen=True)
class RealPolynomial:
    coeffs: tuple[float, ...]

    def __post_init__(self):
        coeffs = np.trim_zeros(np.asarray(self.coeffs, dtype=float), trim="b")
        if coeffs.size == 0:
            raise ParameterError("The zero polynomial has no isolated roots")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return P.polyval(x, self.coeffs)

    def derivative(self, x):
        return P.polyval(x, P.polyder(self.coeffs))

    @property
    def scale(self) -> float:
        return max(abs(c) for c in self.coeffs)


@dataclass(frozen=True)
class RadiusResult:
    rho: float
    residual: float
    bracket_width: float
    method: RootMethod


def _k1(region: RegionKind, n: float) -> list[float]:
    match region.tag:
        case RegionTag.PARABOLIC:
            return [1, -n, -11, -8 * n, -9, n, 3]
        case RegionTag.ORDER:
            al = region.alpha
            return [1 - al, -al * n, -(5 + al), -4 * n, -(5 - al), al * n, 1 + al]
        case RegionTag.LEMNISCATE:
            return [1 - SQRT2, (2 - SQRT2) * n, 6, (2 + SQRT2) * n, 1 + SQRT2]
        case RegionTag.EXPONENTIAL:
            return [1 - E, n, 1 + 5 * E, 4 * E * n, 5 * E - 1, -n, -(1 + E)]
        case RegionTag.CARDIOID:
            return [2, -n, -16, -12 * n, -14, n, 4]
        case RegionTag.SINE:
            return [SIN1, -(1 - SIN1) * n, -(6 - SIN1), -4 * n, -(8 + SIN1), -(3 + SIN1) * n, -(2 + SIN1)]
        case RegionTag.LUNE:
            return [2 - SQRT2, (1 - SQRT2) * n, -(4 + SQRT2), -4 * n, -(6 - SQRT2), -(1 - SQRT2) * n, SQRT2]
        case RegionTag.RATIONAL:
            return [3 - 2 * SQRT2, 2 * (1 - SQRT2) * n, -(3 + 2 * SQRT2), -4 * n, -(7 - 2 * SQRT2),
                    -2 * (1 - SQRT2) * n, -(1 - 2 * SQRT2)]
        case RegionTag.NEPHROID:
            return [2, -n, -16, -12 * n, -26, -11 * n, -8]
        case RegionTag.SIGMOID:
            return [1 - E, 2 * n, 7 + 5 * E, 4 * (1 + E) * n, 7 + 9 * E, 2 * (1 + 2 * E) * n, 1 + 3 * E]
    raise ParameterError(f"Region {region} not supported")


def _k2(region: RegionKind, m: float, n: float) -> list[float]:
    s, p = m + n, m * n
    match region.tag:
        case RegionTag.PARABOLIC:
            return [1, -s, -3 * (6 + p), -17 * s, -12 * (3 + p), -15 * s, -(14 + p), s, 3]
        case RegionTag.ORDER:
            al = region.alpha
            return [1 - al, -al * s, -(p + al * p + 8 + 2 * al), -(8 + al) * s, -(6 * p + 18), -(8 - al) * s,
                    -(p - al * p + 8 - 2 * al), al * s, 1 + al]
        case RegionTag.LEMNISCATE:
            return [1 - SQRT2, (2 - SQRT2) * s, 11 - SQRT2 + (3 - SQRT2) * p, 8 * s, 11 + SQRT2 + (3 + SQRT2) * p,
                    (2 + SQRT2) * s, 1 + SQRT2]
        case RegionTag.EXPONENTIAL:
            return [1 - E, s, 2 + 8 * E + (1 + E) * p, (1 + 8 * E) * s, 18 * E + 6 * E * p, (8 * E - 1) * s,
                    -(2 - 8 * E) - (1 - E) * p, -s, -(1 + E)]
        case RegionTag.CARDIOID:
            return [2, -s, -(26 + 4 * p), -25 * s, -(54 + 18 * p), -23 * s, -(22 + 2 * p), s, 4]
        case RegionTag.SINE:
            return [SIN1, -(1 - SIN1) * s, -(10 + 2 * p - 2 * SIN1 - SIN1 * p), -(9 - SIN1) * s, -(22 + 6 * p),
                    -(11 + SIN1) * s, -(14 + 4 * p + 2 * SIN1 + SIN1 * p), -(3 + SIN1) * s, -(2 + SIN1)]
        case RegionTag.LUNE:
            return [2 - SQRT2, (1 - SQRT2) * s, -6 - 2 * SQRT2 - SQRT2 * p, -(7 + SQRT2) * s, -18 - 6 * p,
                    (SQRT2 - 9) * s, -10 + 2 * SQRT2 + (SQRT2 - 2) * p, (SQRT2 - 1) * s, SQRT2]
        case RegionTag.RATIONAL:
            return [3 - 2 * SQRT2, 2 * (1 - SQRT2) * s, -(4 + 4 * SQRT2 - p + 2 * SQRT2 * p), -(6 + 2 * SQRT2) * s,
                    -(18 + 6 * p), -(10 - 2 * SQRT2) * s, -(12 - 4 * SQRT2 + 3 * p - 2 * SQRT2 * p),
                    -2 * (1 - SQRT2) * s, -(1 - 2 * SQRT2)]
        case RegionTag.NEPHROID:
            return [2, -s, -(26 + 4 * p), -25 * s, -(66 + 18 * p), -35 * s, -(46 + 14 * p), -11 * s, -8]
        case RegionTag.SIGMOID:
            return [1 - E, 2 * s, 12 + 8 * E + (3 + E) * p, (10 + 8 * E) * s, 22 + 22 * E + (6 + 6 * E) * p,
                    (10 + 12 * E) * s, 12 + 16 * E + (3 + 5 * E) * p, (2 + 4 * E) * s, 1 + 3 * E]
    raise ParameterError(f"Region {region} not supported")


def _k3(region: RegionKind, u: float, v: float) -> list[float]:
    uv = u * v
    match region.tag:
        case RegionTag.PARABOLIC:
            return [1, -(u + v), -(15 + 3 * uv), -(17 * u + 12 * v), -(17 + 12 * uv), -(15 * u + 3 * v), -(1 + uv), u]
        case RegionTag.ORDER:
            al = region.alpha
            return [1 - al, -al * (u + v), -(7 + uv + al + al * uv), -(8 * u + 6 * v + al * u), -(9 + 6 * uv - al),
                    -(8 * u + 2 * v - al * u - al * v), -(1 + uv - al - al * uv), al * u]
        case RegionTag.LEMNISCATE:
            return [1 - SQRT2, (2 - SQRT2) * (u + v), 8 + (3 - SQRT2) * uv, 8 * u + (4 + SQRT2) * v,
                    3 + SQRT2 + (3 + SQRT2) * uv, (2 + SQRT2) * u]
        case RegionTag.EXPONENTIAL:
            return [1 - E, u + v, 1 + 7 * E + (1 + E) * uv, (1 + 8 * E) * u + 6 * E * v, 9 * E - 1 + 6 * E * uv,
                    (8 * E - 1) * u + (2 * E - 1) * v, -(1 - E) - (1 - E) * uv, -u]
        case RegionTag.CARDIOID:
            return [2, -(u + v), -(22 + 4 * uv), -(25 * u + 18 * v), -(26 + 18 * uv), -(23 * u + 5 * v),
                    -(2 + 2 * uv), u]
        case RegionTag.SINE:
            return [SIN1, -(1 - SIN1) * (u + v), -(8 + 2 * uv - SIN1 - SIN1 * uv), -(9 * u + 6 * v - SIN1 * u),
                    -(12 + 6 * uv + SIN1), -(11 * u + 5 * v + SIN1 * (u + v)), -(4 + 4 * uv + SIN1 * (1 + uv)),
                    -(3 + SIN1) * u]
        case RegionTag.LUNE:
            return [2 - SQRT2, (1 - SQRT2) * (u + v), -(6 + SQRT2 + SQRT2 * uv), -((7 + SQRT2) * u + 6 * v),
                    -(10 - SQRT2 + 6 * uv), -((9 - SQRT2) * u + (3 - SQRT2) * v), -(2 - SQRT2) * (1 + uv),
                    -(1 - SQRT2) * u]
        case RegionTag.RATIONAL:
            return [3 - 2 * SQRT2, 2 * (1 - SQRT2) * (u + v), -(5 + 2 * SQRT2 - uv + 2 * SQRT2 * uv),
                    -((6 + 2 * SQRT2) * u + 6 * v), -(11 - 2 * SQRT2 + 6 * uv),
                    -((10 - 2 * SQRT2) * u + (4 - 2 * SQRT2) * v), -(3 - 2 * SQRT2) * (1 + uv),
                    -2 * (1 - SQRT2) * u]
        case RegionTag.NEPHROID:
            return [2, -(u + v), -(22 + 4 * uv), -(25 * u + 18 * v), -(38 + 18 * uv), -(35 * u + 17 * v),
                    -(14 + 14 * uv), -11 * u]
        case RegionTag.SIGMOID:
            return [1 - E, 2 * (u + v), 9 + 7 * E + (3 + E) * uv, (10 + 8 * E) * u + (6 + 6 * E) * v,
                    11 + 13 * E + (6 + 6 * E) * uv, (10 + 12 * E) * u + (4 + 6 * E) * v, 3 + 5 * E + (3 + 5 * E) * uv,
                    (2 + 4 * E) * u]
    raise ParameterError(f"Region {region} not supported")


def _k2_lune_as_published(m: float, n: float) -> list[float]:
    # every coefficient is negative, so this form has no root in (0, 1)
    s, p = m + n, m * n
    return [-2 + SQRT2, (-3 + SQRT2) * s, 2 * (-7 + SQRT2) + (-4 + SQRT2) * p, (-11 + SQRT2) * s, -22 - 6 * p,
            -(9 + SQRT2) * s, -2 * (5 + SQRT2) - (2 + SQRT2) * p, -(1 + SQRT2) * s, -SQRT2]


AS_PUBLISHED_ERRATA = {(ClassKind.K2, RegionTag.LUNE): _k2_lune_as_published}


def build_polynomial(spec: ClassSpec, region: RegionKind, as_published: bool = False) -> RealPolynomial:
    """
    Radius polynomial of the (class, region) pair.

    With `as_published=True` the coefficients listed in AS_PUBLISHED_ERRATA are
    returned in their originally printed (defective) form.
    """
    if as_published and (spec.kind, region.tag) in AS_PUBLISHED_ERRATA:
        return RealPolynomial(tuple(AS_PUBLISHED_ERRATA[(spec.kind, region.tag)](*spec.params)))
    match spec.kind:
        case ClassKind.K1:
            coeffs = _k1(region, spec.p1)
        case ClassKind.K2:
            coeffs = _k2(region, spec.p1, spec.p2)
        case ClassKind.K3:
            coeffs = _k3(region, spec.p1, spec.p2)
        case _:
            raise ParameterError(f"Class {spec.kind} not supported")
    return RealPolynomial(tuple(coeffs))


def first_sign_change(fn, lower: float, upper: float, cells: int) -> tuple[float, float, float] | None:
    """First grid cell (x0, x1) of [lower, upper] where fn changes sign, with fn(x0); None if there is none."""
    grid = np.linspace(lower, upper, cells + 1)
    values = np.asarray(fn(grid), dtype=float)
    signs = np.sign(values)
    # an exact zero at a node closes the bracket to that node; a zero at `lower` is skipped
    hits = np.flatnonzero((signs[1:] == 0) | (signs[:-1] * signs[1:] < 0))
    if not hits.size:
        return None
    i = hits[0]
    if signs[i + 1] == 0:
        return grid[i + 1], grid[i + 1], 0.0
    return grid[i], grid[i + 1], values[i]


def bisect_bracket(fn, lo: float, hi: float, f_lo: float, width: float) -> tuple[float, float]:
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        f_mid = float(fn(mid))
        if f_mid == 0.0:
            return mid, mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo, hi


def solve_smallest_root(fn, upper: float, settings: SolverSettings, label: str) -> tuple[float, float, float]:
    """Scan, refine once on failure, then bisect. Returns (rho, lo, hi)."""
    cells = settings.grid_cells
    for attempt in range(settings.refinements + 1):
        bracket = first_sign_change(fn, 0.0, upper, cells)
        if bracket is not None:
            break
        logger.debug(f"No sign change on {cells} cells for {label} (attempt {attempt + 1})")
        cells *= 2
    else:
        raise NoRootError(f"No sign change in (0, {upper:.12g}) for {label}")
    lo, hi, f_lo = bracket
    if lo != hi:
        lo, hi = bisect_bracket(fn, lo, hi, f_lo, settings.bracket_width)
    return 0.5 * (lo + hi), lo, hi


def smallest_root_in_unit(poly: RealPolynomial, settings: SolverSettings = DEFAULT_SOLVER) -> RadiusResult:
    upper = 1.0 - settings.endpoint_guard if poly(1.0) == 0.0 else 1.0
    rho, lo, hi = solve_smallest_root(poly, upper, settings, f"polynomial {list(poly.coeffs)}")
    slope = poly.derivative(rho)
    if slope != 0.0:
        polished = rho - poly(rho) / slope
        if lo <= polished <= hi and abs(poly(polished)) <= abs(poly(rho)):
            rho = polished
    residual = abs(float(poly(rho)))
    return RadiusResult(rho=float(rho), residual=residual, bracket_width=hi - lo, method=RootMethod.POLYNOMIAL)


def polynomial_radius(spec: ClassSpec, region: RegionKind, settings: SolverSettings = DEFAULT_SOLVER) -> RadiusResult:
    result = smallest_root_in_unit(build_polynomial(spec, region), settings)
    logger.debug(f"{spec} {region}: rho={result.rho:.12g} residual={result.residual:.3g}")
    return result
