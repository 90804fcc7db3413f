"""
Result records and the files written from them.

Numbers are printed with 9 significant digits; files are UTF-8 with LF line
endings and are replaced atomically, so a failed write never leaves a partial
file behind.
"""
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger
from prettytable import PrettyTable

from starlike_radii.classbounds import ClassKind, ClassSpec
from starlike_radii.errors import OutputError, ParameterError
from starlike_radii.radius_poly import RadiusResult
from starlike_radii.regions import RegionKind
from starlike_radii.verify import LemmaReport, VerificationReport

CSV_COLUMNS = ("class", "b", "c", "p1", "p2", "region", "alpha", "rho", "residual", "method", "sharp")
FORMATS = ("csv", "json")


def format_value(value: float | bool | None) -> str:
    """9 significant digits for numbers, true/false for flags, empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return f"{float(value):.9g}"


def _json_value(value: float | bool | None):
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    printed = float(format_value(value))
    return None if not math.isfinite(printed) else printed


def _order(value: float | None) -> float:
    return -math.inf if value is None else value


@dataclass(frozen=True)
class OutputRecord:
    class_name: str
    b: float | None
    c: float | None
    p1: float
    p2: float | None
    region: str
    alpha: float | None
    rho: float
    residual: float
    method: str
    sharp: bool | None = None

    @classmethod
    def from_result(
        cls, spec: ClassSpec, region: RegionKind, result: RadiusResult, sharp: bool | None = None
    ) -> "OutputRecord":
        return cls(
            class_name=spec.kind.value,
            b=spec.b,
            c=spec.c if spec.kind is not ClassKind.K1 else None,
            p1=spec.p1,
            p2=spec.p2,
            region=region.name,
            alpha=region.alpha,
            rho=result.rho,
            residual=result.residual,
            method=result.method.value,
            sharp=sharp,
        )

    @property
    def sort_key(self) -> tuple:
        return (
            self.class_name,
            _order(self.b),
            _order(self.c),
            self.p1,
            _order(self.p2),
            self.region,
            _order(self.alpha),
        )

    def _values(self) -> tuple:
        return (
            self.class_name,
            self.b,
            self.c,
            self.p1,
            self.p2,
            self.region,
            self.alpha,
            self.rho,
            self.residual,
            self.method,
            self.sharp,
        )

    def to_row(self) -> dict[str, str]:
        fields = zip(CSV_COLUMNS, self._values())
        return {column: value if isinstance(value, str) else format_value(value) for column, value in fields}

    def to_json(self) -> dict:
        fields = zip(CSV_COLUMNS, self._values())
        return {column: value if isinstance(value, str) else _json_value(value) for column, value in fields}


def sort_records(records: list[OutputRecord]) -> list[OutputRecord]:
    return sorted(records, key=lambda record: record.sort_key)


def records_frame(records: list[OutputRecord]) -> pd.DataFrame:
    return pd.DataFrame([record.to_row() for record in records], columns=list(CSV_COLUMNS))


def render_records(records: list[OutputRecord], fmt: str = "csv") -> str:
    match fmt:
        case "csv":
            return records_frame(records).to_csv(index=False, lineterminator="\n")
        case "json":
            return json.dumps([record.to_json() for record in records], indent=2) + "\n"
        case _:
            raise ParameterError(f"Format {fmt} not supported, choose one of {', '.join(FORMATS)}")


def atomic_write(path: str | Path, text: str) -> Path:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except OSError as error:
        tmp.unlink(missing_ok=True)
        raise OutputError(f"Could not write {path}: {error}") from error
    return path


def write_records(records: list[OutputRecord], path: str | Path, fmt: str = "csv") -> Path:
    path = atomic_write(path, render_records(records, fmt))
    logger.info(f"Saved {len(records)} records to {path}")
    return path


def curve_frame(theta: np.ndarray, w: np.ndarray) -> pd.DataFrame:
    w = np.asarray(w, dtype=complex)
    return pd.DataFrame({"theta": theta, "u": w.real, "v": w.imag})


def write_curve(path: str | Path, theta: np.ndarray, w: np.ndarray) -> Path:
    """Write a sampled complex curve as theta,u,v rows."""
    text = curve_frame(theta, w).to_csv(index=False, lineterminator="\n", float_format="%.9g")
    path = atomic_write(path, text)
    logger.info(f"Saved {len(theta)} curve points to {path}")
    return path


def write_touch_point(path: str | Path, fields: dict[str, float | str]) -> Path:
    frame = pd.DataFrame([{key: format_value(v) if not isinstance(v, str) else v for key, v in fields.items()}])
    return atomic_write(path, frame.to_csv(index=False, lineterminator="\n"))


def verification_rows(reports: list[VerificationReport]) -> list[dict]:
    rows = []
    for report in reports:
        rows.append(
            {
                "class": report.spec.kind.value,
                "b": format_value(report.spec.b),
                "c": format_value(report.spec.c),
                "p1": format_value(report.spec.p1),
                "p2": format_value(report.spec.p2),
                "region": report.region.name,
                "alpha": format_value(report.region.alpha),
                "rho_poly": format_value(report.rho_poly),
                "rho_margin": format_value(report.rho_margin),
                "abs_diff": f"{report.abs_diff:.3g}",
                "containment": format_value(report.containment_pass),
                "transcription": format_value(report.transcription_pass),
                "sharp": format_value(report.sharpness_pass),
                "passed": format_value(report.passed),
                "notes": report.notes,
            }
        )
    return rows


def write_verification(reports: list[VerificationReport], lemmas: list[LemmaReport], path: str | Path) -> Path:
    """Machine-readable verification report; the format follows the file suffix (.json or .csv)."""
    path = Path(path)
    rows = verification_rows(reports)
    if path.suffix == ".json":
        payload = {
            "cells": rows,
            "lemma": [
                {
                    "b": lemma.b,
                    "alpha": lemma.alpha,
                    "trials": lemma.trials,
                    "seed": lemma.seed,
                    "max_slack": float(format_value(lemma.max_slack)),
                    "min_slack": float(format_value(lemma.min_slack)),
                    "violations": lemma.violations,
                }
                for lemma in lemmas
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = pd.DataFrame(rows).to_csv(index=False, lineterminator="\n")
    path = atomic_write(path, text)
    logger.info(f"Saved verification report for {len(reports)} cells to {path}")
    return path


def records_table(records: list[OutputRecord]) -> PrettyTable:
    table = PrettyTable()
    table.field_names = ["class", "params", "region", "rho", "sharp"]
    for record in records:
        params = ", ".join(format_value(p) for p in (record.p1, record.p2) if p is not None)
        table.add_row([record.class_name, params, record.region, format_value(record.rho), format_value(record.sharp)])
    return table


def verification_table(reports: list[VerificationReport], lemmas: list[LemmaReport]) -> PrettyTable:
    """One row per (class, region) pair with cell counts and the worst oracle gap."""
    table = PrettyTable()
    table.field_names = ["cell", "cells", "failed", "max |diff|", "sharp certified"]
    groups: dict[str, list[VerificationReport]] = {}
    for report in reports:
        groups.setdefault(report.cell_id, []).append(report)
    for cell_id, group in sorted(groups.items()):
        diffs = [report.abs_diff for report in group if math.isfinite(report.abs_diff)]
        certified = [report.sharpness_pass for report in group if report.sharpness_pass is not None]
        table.add_row(
            [
                cell_id,
                len(group),
                sum(not report.passed for report in group),
                f"{max(diffs):.2e}" if diffs else "-",
                f"{sum(certified)}/{len(certified)}" if certified else "-",
            ]
        )
    for lemma in lemmas:
        table.add_row([f"lemma b={lemma.b:g} alpha={lemma.alpha:g}", lemma.trials, lemma.violations, "-", "-"])
    return table
