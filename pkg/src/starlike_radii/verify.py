"""
Independent checks of the transcribed radius polynomials.

The margin oracle re-solves margin(a(r)) = R(r) directly from the disc bound,
the containment check samples the guaranteed disc against the region
predicate, and the lemma check throws random Schwarz-function members of
P_b(alpha) at the derivative bound the discs are built from.
"""
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Any

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as P
from tqdm import tqdm

from starlike_radii.classbounds import (
    ClassKind,
    ClassSpec,
    center,
    center_radius,
    disc_bound,
    disc_radius,
    from_normalized,
    lemma_bound,
    normalize,
    radius_denominator,
    radius_numerator,
)
from starlike_radii.config import (
    DEFAULT_SOLVER,
    DEFAULT_TOLERANCES,
    DEFAULT_WINDING,
    SolverSettings,
    WindingSettings,
    sweep_threads,
)
from starlike_radii.errors import (
    NoRootError,
    ParameterError,
    StarlikeError,
    UnsupportedError,
    ValidityError,
    ViolationError,
)
from starlike_radii.extremal import certify_sharpness
from starlike_radii.radius_poly import (
    RadiusResult,
    RealPolynomial,
    RootMethod,
    build_polynomial,
    smallest_root_in_unit,
    solve_smallest_root,
)
from starlike_radii.regions import RegionKind, RegionTag, all_regions, contains_many, margin, margin_spec

ORACLE_ALPHAS = (0.0, 0.25, 0.5, 0.75)
SHARPNESS_VALUES = (-1.0, -0.5, 0.5, 1.0)
LEMMA_BS = (-1.0, -0.5, 0.0, 0.5, 1.0)
LEMMA_ALPHAS = (0.0, 0.3, 0.6)
CONTAINMENT_INNER = 0.99
CONTAINMENT_OUTER = 1.2
_TAMPER_PATTERN = re.compile(r"^(K[123])-([a-z]+):c(\d+):([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)$")


def _margin_gap(spec: ClassSpec, region: RegionKind):
    rule = margin_spec(region)

    def gap(r):
        return rule(center(r)) - disc_radius(spec, r)

    return gap


def _search_limit(region: RegionKind, settings: SolverSettings) -> float:
    rule = margin_spec(region)
    limit = 1.0 - settings.endpoint_guard
    if math.isinf(rule.upper_a):
        return limit
    upper = center_radius(rule.upper_a)
    if rule.upper_is_strict:
        upper -= settings.endpoint_guard
    return min(upper, limit)


def radius_by_margin(spec: ClassSpec, region: RegionKind, settings: SolverSettings = DEFAULT_SOLVER) -> RadiusResult:
    """
    Smallest r in (0, 1) with margin(a(r)) = R(r), solved without the radius polynomial.

    The scan never leaves the region's validity interval for a(r); when the
    gap is still positive at the interval's end the radius is not covered by
    the containment lemma and ValidityError is raised.
    """
    gap = _margin_gap(spec, region)
    upper = _search_limit(region, settings)
    try:
        rho, lo, hi = solve_smallest_root(gap, upper, settings, f"margin equation of {spec} {region}")
    except NoRootError:
        rule = margin_spec(region)
        if math.isinf(rule.upper_a):
            raise
        raise ValidityError(
            f"Margin equation of {spec} {region} has no root before a(r) leaves {rule.interval} (r={upper:.12g})"
        ) from None
    bound = disc_bound(spec, rho)
    residual = abs(margin(region, bound.a) - bound.R)
    logger.debug(f"{spec} {region}: margin oracle rho={rho:.12g} residual={residual:.3g}")
    return RadiusResult(rho=float(rho), residual=residual, bracket_width=hi - lo, method=RootMethod.MARGIN_ORACLE)


def check_containment(
    spec: ClassSpec,
    region: RegionKind,
    r: float,
    samples: int = 720,
    boundary_tol: float = DEFAULT_TOLERANCES.containment_boundary,
    settings: WindingSettings = DEFAULT_WINDING,
) -> bool:
    """True iff the sampled boundary of the disc |w - a(r)| <= R(r) lies inside the region."""
    if samples < 360:
        raise ParameterError(f"Containment checks need at least 360 samples, got {samples}")
    bound = disc_bound(spec, r)
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    points = bound.a + max(bound.R - boundary_tol, 0.0) * np.exp(1j * theta)
    return bool(np.all(contains_many(region, points, settings)))


def schwarz_logderiv(b: float, alpha: float, t, phase, z):
    """
    zp'(z)/p(z) for p = alpha + (1 - alpha)(1 + w)/(1 - w) with the Schwarz function
    w(z) = z(tze^{i phase} + b)/(1 + btze^{i phase}), so that p'(0) = 2b(1 - alpha).
    """
    e = np.asarray(t) * np.exp(1j * np.asarray(phase))
    z = np.asarray(z, dtype=complex)
    den = 1 + b * e * z
    inner = (e * z + b) / den
    w = z * inner
    dw = inner + z * e * (1 - b * b) / den**2
    p = alpha + (1 - alpha) * (1 + w) / (1 - w)
    dp = 2 * (1 - alpha) * dw / (1 - w) ** 2
    return z * dp / p


@dataclass(frozen=True)
class LemmaReport:
    b: float
    alpha: float
    trials: int
    seed: int
    max_slack: float
    min_slack: float
    violations: int
    witness: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _lemma_report(b: float, alpha: float, trials: int, seed: int, slack: float, radius: float) -> LemmaReport:
    if trials < 1:
        raise ParameterError(f"Lemma checks need at least one trial, got {trials}")
    if not 0.0 < radius < 1.0:
        raise ParameterError(f"Sampling radius must lie in (0, 1), got {radius:g}")
    rng = np.random.default_rng(seed)
    t = rng.uniform(-1.0, 1.0, trials)
    phase = rng.uniform(0.0, 2 * np.pi, trials)
    z = radius * np.sqrt(rng.uniform(0.0, 1.0, trials)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, trials))
    value = np.abs(schwarz_logderiv(b, alpha, t, phase, z))
    gap = lemma_bound(b, alpha, np.abs(z)) - value
    bad = np.flatnonzero(gap < -slack)
    witness = {}
    if bad.size:
        worst = bad[np.argmin(gap[bad])]
        witness = {
            "t": float(t[worst]),
            "phi": float(phase[worst]),
            "z": complex(z[worst]),
            "value": float(value[worst]),
            "bound": float(value[worst] + gap[worst]),
        }
    return LemmaReport(
        b=b,
        alpha=alpha,
        trials=trials,
        seed=seed,
        max_slack=float(gap.max()),
        min_slack=float(gap.min()),
        violations=int(bad.size),
        witness=witness,
    )


def check_lemma_bound(
    b: float,
    alpha: float,
    trials: int = 10_000,
    seed: int = 0,
    slack: float = DEFAULT_TOLERANCES.lemma_slack,
    radius: float = 0.95,
) -> LemmaReport:
    report = _lemma_report(b, alpha, trials, seed, slack, radius)
    if not report.passed:
        raise ViolationError(
            f"Derivative bound violated {report.violations} times for b={b:g}, alpha={alpha:g}", report.witness
        )
    logger.debug(f"Lemma bound b={b:g} alpha={alpha:g}: {trials} samples, tightest slack {report.min_slack:.3g}")
    return report


def lemma_sweep(
    bs: tuple[float, ...] = LEMMA_BS,
    alphas: tuple[float, ...] = LEMMA_ALPHAS,
    trials: int = 10_000,
    seed: int = 0,
    slack: float = DEFAULT_TOLERANCES.lemma_slack,
) -> list[LemmaReport]:
    reports = []
    for index, (b, alpha) in enumerate(product(bs, alphas)):
        report = _lemma_report(b, alpha, trials, seed + index, slack, 0.95)
        if not report.passed:
            logger.warning(f"Derivative bound violated for b={b:g} alpha={alpha:g}: {report.witness}")
        reports.append(report)
    return reports


def derived_polynomial(spec: ClassSpec, region: RegionKind) -> RealPolynomial:
    """Numerator of margin(a(r)) - R(r) over the common denominator D(r)(1 - r^4)."""
    rule = margin_spec(region)
    scaled_center = rule.slope * np.array([1.0, 0, 0, 0, 1.0]) + rule.offset * np.array([1.0, 0, 0, 0, -1.0])
    coeffs = P.polysub(P.polymul(scaled_center, radius_denominator(spec)), radius_numerator(spec))
    return RealPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class TranscriptionReport:
    scale: float
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol


def check_transcription(
    spec: ClassSpec, region: RegionKind, poly: RealPolynomial | None = None, tol: float = 1e-10
) -> TranscriptionReport:
    """
    Compare a radius polynomial with the one derived from the margin equation. The two must be
    proportional; lemniscate polynomials are stored with the common factor (1 + r^2) cancelled.
    """
    poly = poly or build_polynomial(spec, region)
    candidate = np.asarray(poly.coeffs)
    if region.tag is RegionTag.LEMNISCATE:
        candidate = P.polymul(candidate, [1.0, 0.0, 1.0])
    expected = np.asarray(derived_polynomial(spec, region).coeffs)
    size = max(candidate.size, expected.size)
    candidate = np.pad(candidate, (0, size - candidate.size))
    expected = np.pad(expected, (0, size - expected.size))
    scale = float(expected @ candidate / (candidate @ candidate))
    residual = float(np.abs(expected - scale * candidate).max() / np.abs(expected).max())
    return TranscriptionReport(scale=scale, residual=residual, tol=tol)


@dataclass(frozen=True)
class CoefficientTamper:
    """Adds `delta` to coefficient r^index of one (class, region) polynomial, e.g. `K1-parabolic:c2:+0.1`."""

    class_kind: ClassKind
    region: RegionTag
    index: int
    delta: float

    @classmethod
    def parse(cls, text: str) -> "CoefficientTamper":
        found = _TAMPER_PATTERN.match(text.strip())
        if found is None:
            raise ParameterError(f"Tamper {text!r} is not of the form <class>-<region>:c<index>:<delta>")
        kind, region, index, delta = found.groups()
        try:
            tag = RegionTag(region)
        except ValueError:
            raise ParameterError(f"Region {region} not supported") from None
        return cls(ClassKind(kind), tag, int(index), float(delta))

    @property
    def cell_id(self) -> str:
        return f"{self.class_kind.value}-{self.region.value}"

    def __str__(self) -> str:
        return f"{self.cell_id}:c{self.index}:{self.delta:+g}"

    def matches(self, spec: ClassSpec, region: RegionKind) -> bool:
        return spec.kind is self.class_kind and region.tag is self.region

    def apply(self, poly: RealPolynomial) -> RealPolynomial:
        if self.index > poly.degree:
            raise ParameterError(f"Tamper {self} addresses r^{self.index} of a degree {poly.degree} polynomial")
        coeffs = list(poly.coeffs)
        coeffs[self.index] += self.delta
        return RealPolynomial(tuple(coeffs))


@dataclass(frozen=True)
class VerificationReport:
    spec: ClassSpec
    region: RegionKind
    rho_poly: float
    rho_margin: float
    abs_diff: float
    tol: float
    residual: float
    containment_pass: bool
    transcription_pass: bool
    sharpness_pass: bool | None = None
    notes: str = ""

    @property
    def cell_id(self) -> str:
        return f"{self.spec.kind.value}-{self.region.name}"

    @property
    def case_id(self) -> str:
        return f"{self.spec} {self.region}"

    @property
    def passed(self) -> bool:
        return (
            self.abs_diff <= self.tol
            and self.containment_pass
            and self.transcription_pass
            and self.sharpness_pass is not False
        )


def _failed_cell(spec: ClassSpec, region: RegionKind, tol: float, notes: list[str]) -> VerificationReport:
    nan = float("nan")
    return VerificationReport(spec, region, nan, nan, nan, tol, nan, False, False, None, "; ".join(notes))


def verify_cell(
    spec: ClassSpec,
    region: RegionKind,
    tol: float = DEFAULT_TOLERANCES.oracle,
    tamper: CoefficientTamper | None = None,
    settings: SolverSettings = DEFAULT_SOLVER,
) -> VerificationReport:
    notes = []
    try:
        poly = build_polynomial(spec, region)
        if tamper is not None and tamper.matches(spec, region):
            poly = tamper.apply(poly)
            notes.append(f"tampered {tamper}")
        by_poly = smallest_root_in_unit(poly, settings)
        by_margin = radius_by_margin(spec, region, settings)
        rho = by_poly.rho
        transcription = check_transcription(spec, region, poly).passed
        if not transcription:
            notes.append("coefficients are not proportional to the margin equation")
        inside = check_containment(spec, region, CONTAINMENT_INNER * rho)
        outside = not check_containment(spec, region, min(CONTAINMENT_OUTER * rho, 1.0 - settings.endpoint_guard))
        if not inside:
            notes.append(f"disc leaves the region at {CONTAINMENT_INNER:g} rho")
        if not outside:
            notes.append(f"disc still inside the region at {CONTAINMENT_OUTER:g} rho")
        sharp = None
        if spec.has_raw and spec.kind is not ClassKind.K3:
            try:
                sharp = certify_sharpness(spec, region, rho).passed
            except UnsupportedError as error:
                notes.append(str(error))
    except StarlikeError as error:
        logger.warning(f"{spec} {region}: {type(error).__name__}: {error}")
        return _failed_cell(spec, region, tol, notes + [f"{type(error).__name__}: {error}"])

    diff = abs(rho - by_margin.rho)
    if diff > tol:
        notes.append(f"polynomial and margin radii differ by {diff:.3g}")
    return VerificationReport(
        spec=spec,
        region=region,
        rho_poly=rho,
        rho_margin=by_margin.rho,
        abs_diff=diff,
        tol=tol,
        residual=by_poly.residual,
        containment_pass=inside and outside,
        transcription_pass=transcription,
        sharpness_pass=sharp,
        notes="; ".join(notes),
    )


def full_matrix(
    cells: list[ClassSpec],
    regions: list[RegionKind],
    tol: float = DEFAULT_TOLERANCES.oracle,
    tamper: CoefficientTamper | None = None,
    threads: int | None = None,
    progress: bool = False,
) -> list[VerificationReport]:
    """Verify every (cell, region) pair; reports come back in cell-major input order."""
    jobs = [(spec, region) for spec in cells for region in regions]
    threads = threads or sweep_threads()
    logger.info(f"Verifying {len(jobs)} cells on {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        reports = list(
            tqdm(
                pool.map(lambda job: verify_cell(*job, tol=tol, tamper=tamper), jobs),
                total=len(jobs),
                desc="verify",
                disable=None if progress else True,
            )
        )
    failed = sum(not report.passed for report in reports)
    logger.info(f"Verified {len(reports)} cells, {failed} failed")
    return reports


def oracle_grid() -> list[ClassSpec]:
    """Normalized parameter grid: 9 values of ntilde, 5x5 of (m, n) and 5x5 of (u, v)."""
    cells = [from_normalized(ClassKind.K1, n) for n in np.linspace(0.0, 2.0, 9)]
    cells += [from_normalized(ClassKind.K2, m, n) for m, n in product(np.linspace(0.0, 2.0, 5), repeat=2)]
    cells += [from_normalized(ClassKind.K3, u, v) for u, v in product(np.linspace(0.0, 1.0, 5), np.linspace(0, 2, 5))]
    return cells


def sharpness_grid() -> list[ClassSpec]:
    """Raw K1 cells b in SHARPNESS_VALUES and the K2 diagonal b = c."""
    cells = [normalize(ClassKind.K1, b) for b in SHARPNESS_VALUES]
    cells += [normalize(ClassKind.K2, b, b) for b in SHARPNESS_VALUES]
    return cells


def default_matrix() -> tuple[list[ClassSpec], list[RegionKind]]:
    return oracle_grid() + sharpness_grid(), all_regions(ORACLE_ALPHAS)
