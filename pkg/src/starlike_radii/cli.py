"""
Command line for the radius tables.

    starlike radius --class K1 --b -1 --region parabolic
    starlike table --class K2 --b-start -1 --b-stop 1 --b-step 0.5 --c-start -1 --c-stop 1 --c-step 0.5 --skip-invalid
    starlike verify --out report.json
    starlike plot-data --class K1 --b -1 --region lemniscate --out-dir plots

Exit codes: 0 ok, 1 usage, 2 parameter, 3 no root, 4 verification failure.
"""
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from enum import Enum
from itertools import product
from pathlib import Path
from typing import List, Optional

import click
import numpy as np
import typer
from loguru import logger
from tqdm import tqdm
from typing_extensions import Annotated

from starlike_radii.classbounds import ClassKind, ClassSpec, from_normalized, normalize
from starlike_radii.config import sweep_threads
from starlike_radii.errors import ParameterError, StarlikeError, UnsupportedError
from starlike_radii.export import (
    OutputRecord,
    records_table,
    render_records,
    sort_records,
    verification_table,
    write_curve,
    write_records,
    write_touch_point,
    write_verification,
)
from starlike_radii.extremal import certify_sharpness, image_curve
from starlike_radii.radius_poly import RadiusResult, polynomial_radius
from starlike_radii.regions import RegionKind, RegionTag, all_regions, boundary_curve
from starlike_radii.verify import (
    CoefficientTamper,
    check_lemma_bound,
    default_matrix,
    full_matrix,
    lemma_sweep,
    radius_by_margin,
)

app = typer.Typer(add_completion=False, help="Sharp radii of starlikeness for classes with fixed second coefficient.")


class Method(str, Enum):
    POLYNOMIAL = "polynomial"
    MARGIN = "margin"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@contextmanager
def _exit_codes():
    try:
        yield
    except StarlikeError as error:
        logger.error(f"{type(error).__name__}: {error}")
        typer.echo(f"error: {error}", err=True)
        raise typer.Exit(code=error.exit_code) from error


def resolve_spec(
    class_kind: ClassKind,
    b: float | None = None,
    c: float | None = None,
    p1: float | None = None,
    p2: float | None = None,
) -> ClassSpec:
    if b is not None and (p1 is not None or p2 is not None):
        raise ParameterError("Give either raw --b/--c or normalized --p1/--p2, not both")
    if b is not None:
        return normalize(class_kind, b, c)
    if p1 is not None:
        return from_normalized(class_kind, p1, p2)
    raise ParameterError(f"{class_kind.value} needs --b (and --c) or --p1 (and --p2)")


def sharpness_flag(spec: ClassSpec, region: RegionKind, rho: float) -> bool | None:
    """Certified sharpness for the record, or None where no extremal function applies."""
    if spec.kind is ClassKind.K3 or not spec.has_raw or spec.b == 0:
        return None
    try:
        return certify_sharpness(spec, region, rho).passed
    except UnsupportedError as error:
        logger.debug(f"{spec} {region}: {error}")
        return None


def compute_record(spec: ClassSpec, region: RegionKind, method: Method = Method.POLYNOMIAL) -> OutputRecord:
    result: RadiusResult
    match method:
        case Method.POLYNOMIAL:
            result = polynomial_radius(spec, region)
        case Method.MARGIN:
            result = radius_by_margin(spec, region)
    return OutputRecord.from_result(spec, region, result, sharpness_flag(spec, region, result.rho))


def grid_axis(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid start, start + step, ..., stop."""
    if step <= 0:
        raise ParameterError(f"Grid step must be positive, got {step:g}")
    if stop < start:
        raise ParameterError(f"Grid stop {stop:g} lies below start {start:g}")
    count = round((stop - start) / step)
    if abs(start + count * step - stop) > 1e-9 * max(1.0, abs(stop)):
        raise ParameterError(f"Grid step {step:g} does not divide [{start:g}, {stop:g}]")
    return [float(x) for x in np.round(start + step * np.arange(count + 1), 12)]


def parse_regions(names: list[RegionTag] | None, alphas: list[float] | None) -> list[RegionKind]:
    alphas = tuple(alphas) if alphas else (0.0,)
    if not names:
        return all_regions(alphas)
    regions = []
    for tag in dict.fromkeys(names):
        if tag is RegionTag.ORDER:
            regions.extend(RegionKind(tag, alpha) for alpha in alphas)
        else:
            regions.append(RegionKind(tag))
    return regions


@app.callback()
def configure(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging on stderr.")] = False,
    quiet: Annotated[bool, typer.Option("--quiet", "-q", help="Only warnings and errors on stderr.")] = False,
):
    if verbose and quiet:
        raise typer.BadParameter("--verbose and --quiet are mutually exclusive")
    if verbose or quiet:
        logger.remove()
        logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


@app.command()
def radius(
    class_kind: Annotated[ClassKind, typer.Option("--class", help="Function class.")],
    region: Annotated[RegionTag, typer.Option(help="Target region.")],
    b: Annotated[Optional[float], typer.Option("--b", help="Raw coefficient b.")] = None,
    c: Annotated[Optional[float], typer.Option("--c", help="Raw coefficient c (K2, K3).")] = None,
    p1: Annotated[Optional[float], typer.Option("--p1", help="ntilde, m or u.")] = None,
    p2: Annotated[Optional[float], typer.Option("--p2", help="n or v.")] = None,
    alpha: Annotated[Optional[float], typer.Option(help="Order of the half-plane region.")] = None,
    method: Annotated[Method, typer.Option(help="Radius polynomial or margin equation.")] = Method.POLYNOMIAL,
    fmt: Annotated[OutputFormat, typer.Option("--format")] = OutputFormat.CSV,
):
    """Print the radius of one (class, region) pair."""
    with _exit_codes():
        spec = resolve_spec(class_kind, b, c, p1, p2)
        record = compute_record(spec, RegionKind.parse(region.value, alpha), method)
        typer.echo(render_records([record], fmt.value), nl=False)


@app.command()
def table(
    class_kind: Annotated[ClassKind, typer.Option("--class", help="Function class.")],
    b_start: Annotated[float, typer.Option()] = -1.0,
    b_stop: Annotated[float, typer.Option()] = 1.0,
    b_step: Annotated[float, typer.Option()] = 0.25,
    c_start: Annotated[float, typer.Option()] = -1.0,
    c_stop: Annotated[float, typer.Option()] = 1.0,
    c_step: Annotated[float, typer.Option()] = 0.25,
    region: Annotated[Optional[List[RegionTag]], typer.Option(help="Repeatable; all regions by default.")] = None,
    alpha: Annotated[Optional[List[float]], typer.Option(help="Repeatable; orders of the half-plane region.")] = None,
    out: Annotated[Optional[Path], typer.Option(help="Output file; standard output by default.")] = None,
    fmt: Annotated[OutputFormat, typer.Option("--format")] = OutputFormat.CSV,
    method: Annotated[Method, typer.Option()] = Method.POLYNOMIAL,
    skip_invalid: Annotated[bool, typer.Option(help="Skip (b, c) pairs outside the class instead of failing.")] = False,
):
    """Sweep a raw (b, c) grid over the chosen regions."""
    with _exit_codes():
        bs = grid_axis(b_start, b_stop, b_step)
        cs = [None] if class_kind is ClassKind.K1 else grid_axis(c_start, c_stop, c_step)
        regions = parse_regions(region, alpha)

        specs = []
        for b, c in product(bs, cs):
            try:
                specs.append(normalize(class_kind, b, c))
            except ParameterError as error:
                if not skip_invalid:
                    raise
                logger.warning(f"Skipping b={b:g}, c={c}: {error}")

        jobs = [(spec, reg) for spec in specs for reg in regions]
        with ThreadPoolExecutor(max_workers=sweep_threads()) as pool:
            computed = pool.map(lambda job: compute_record(*job, method), jobs)
            records = list(tqdm(computed, total=len(jobs), desc="table", disable=None))
        records = sort_records(records)

        if out is None:
            typer.echo(render_records(records, fmt.value), nl=False)
        else:
            write_records(records, out, fmt.value)
            typer.echo(records_table(records).get_string(), err=True)


@app.command()
def verify(
    out: Annotated[Optional[Path], typer.Option(help="Machine report (.json or .csv).")] = None,
    tamper: Annotated[Optional[str], typer.Option(help="Perturb one coefficient, e.g. K1-parabolic:c2:+0.1.")] = None,
    class_kind: Annotated[Optional[List[ClassKind]], typer.Option("--class", help="Restrict the matrix.")] = None,
    region: Annotated[Optional[List[RegionTag]], typer.Option(help="Restrict the matrix.")] = None,
    lemma: Annotated[bool, typer.Option("--lemma", help="Only run the derivative bound check.")] = False,
    b: Annotated[float, typer.Option("--b")] = 1.0,
    alpha: Annotated[float, typer.Option()] = 0.0,
    trials: Annotated[int, typer.Option(min=1)] = 10_000,
    seed: Annotated[int, typer.Option()] = 0,
):
    """Cross-check every radius against the margin oracle, containment, sharpness and the derivative bound."""
    with _exit_codes():
        if lemma:
            report = check_lemma_bound(b, alpha, trials=trials, seed=seed)
            typer.echo(verification_table([], [report]).get_string())
            typer.echo(f"max slack {report.max_slack:.9g}, tightest slack {report.min_slack:.9g}, no violations")
            if out is not None:
                write_verification([], [report], out)
            return

        parsed_tamper = CoefficientTamper.parse(tamper) if tamper else None
        cells, regions = default_matrix()
        if class_kind:
            cells = [spec for spec in cells if spec.kind in class_kind]
        if region:
            regions = [reg for reg in regions if reg.tag in region]
        reports = full_matrix(cells, regions, tamper=parsed_tamper, progress=True)
        lemmas = lemma_sweep(trials=trials, seed=seed)

        typer.echo(verification_table(reports, lemmas).get_string())
        if out is not None:
            write_verification(reports, lemmas, out)

        failed = [report for report in reports if not report.passed]
        failed_lemmas = [report for report in lemmas if not report.passed]
        for report in failed:
            typer.echo(f"FAILED {report.cell_id} {report.case_id}: {report.notes}")
        for report in failed_lemmas:
            typer.echo(f"FAILED lemma b={report.b:g} alpha={report.alpha:g}: {report.witness}")
        if failed or failed_lemmas:
            logger.error(f"{len(failed)} cells and {len(failed_lemmas)} lemma checks failed")
            raise typer.Exit(code=4)
        typer.echo(f"All {len(reports)} cells and {len(lemmas)} lemma checks passed")


@app.command("plot-data")
def plot_data(
    out_dir: Annotated[Path, typer.Option(help="Directory for the curve files.")],
    class_kind: Annotated[ClassKind, typer.Option("--class")] = ClassKind.K1,
    region: Annotated[RegionTag, typer.Option()] = RegionTag.PARABOLIC,
    b: Annotated[Optional[float], typer.Option("--b")] = None,
    c: Annotated[Optional[float], typer.Option("--c")] = None,
    p1: Annotated[Optional[float], typer.Option("--p1")] = None,
    p2: Annotated[Optional[float], typer.Option("--p2")] = None,
    alpha: Annotated[Optional[float], typer.Option()] = None,
    samples: Annotated[int, typer.Option(min=16)] = 720,
    region_only: Annotated[bool, typer.Option(help="Only write the region boundary.")] = False,
):
    """Write the region boundary, the extremal image of |z| = rho and their touch point as CSV curves."""
    with _exit_codes():
        target = RegionKind.parse(region.value, alpha)
        stem = target.name if region_only else f"{class_kind.value}_{target.name}"
        boundary = boundary_curve(target, samples)
        # theta is the curve parameter rescaled to [0, 2 pi]
        write_curve(out_dir / f"{stem}_boundary.csv", np.linspace(0.0, 2 * np.pi, boundary.size), boundary)
        if region_only:
            return

        spec = resolve_spec(class_kind, b, c, p1, p2)
        rho = polynomial_radius(spec, target).rho
        report = certify_sharpness(spec, target, rho)
        theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        write_curve(out_dir / f"{stem}_image.csv", theta, image_curve(report.kind, rho, samples))
        touch = {
            "class": spec.kind.value,
            "region": target.name,
            "extremal": report.kind.tag.value,
            "direction": report.point.direction.value,
            "rho": rho,
            "u": report.w.real,
            "v": report.w.imag,
            "residual": report.residual,
            "certified": report.passed,
        }
        write_touch_point(out_dir / f"{stem}_touch.csv", touch)
        typer.echo(f"{stem}: rho={rho:.9g} touches at {report.w.real:.9g}{report.w.imag:+.9g}i")


def main(argv: list[str] | None = None) -> int:
    try:
        code = app(args=argv, prog_name="starlike", standalone_mode=False)
    except click.UsageError as error:
        error.show()
        return 1
    except click.Abort:
        return 1
    return code if isinstance(code, int) else 0


def run():
    sys.exit(main())
