"""Command line front end: batch bound tables and the geometry self-check.

Input lines look like ``4_1: X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)``;
the optional reference file holds ``name,volume`` records.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bounds import BoundName, BoundReport, NoApplicableBound, analyze, best_bound, evaluate_diagram
from .diagram import DiagramError, iter_batch
from .verify import verify_geometry

log = logging.getLogger("linkvol")

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2

# references are usually quoted to 4 or 5 decimals; a ratio this close to 1
# is rounding in the reference, not an unsound bound
RATIO_SLACK = 1e-4


class UsageError(Exception):
    """Bad flags or unreadable files; maps to exit status 2."""


@dataclass
class BatchConfig:
    input_path: Path
    reference_path: Optional[Path] = None
    bounds_selected: tuple[BoundName, ...] = tuple(BoundName)
    output_format: str = "csv"
    assert_twist_reduced: bool = False
    full_precision: bool = False

    def __post_init__(self):
        if not self.bounds_selected:
            raise UsageError("no bounds selected")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")


@dataclass
class ReportRow:
    name: str
    line: int
    c: int
    components: int
    alternating: bool
    reduced: bool
    twist_number: Optional[int]
    t: dict[int, int]
    g5: Optional[int]
    faces: dict[int, int]
    reports: dict[BoundName, BoundReport]
    best: Optional[BoundReport]
    reference: Optional[float] = None
    warnings: list[str] = field(default_factory=list)

    @property
    def ratio(self) -> Optional[float]:
        if self.reference is None or self.best is None or self.reference <= 0:
            return None
        return self.best.value / self.reference


def parse_bounds(text: str) -> tuple[BoundName, ...]:
    if text.strip() == "all":
        return tuple(BoundName)
    names = []
    for part in text.split(","):
        part = part.strip()
        try:
            names.append(BoundName(part))
        except ValueError:
            raise UsageError(f"unknown bound {part!r}; choose from {', '.join(b.value for b in BoundName)}")
    return tuple(sorted(set(names), key=list(BoundName).index))


def read_reference(path: Path) -> dict[str, float]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read reference file {path}: {exc}")
    out = {}
    first = True
    for k, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if first and [c.strip().lower() for c in row] == ["name", "volume"]:
            first = False
            continue
        first = False
        if len(row) != 2:
            raise UsageError(f"{path}:{k}: expected 'name,volume'")
        try:
            vol = float(row[1])
        except ValueError:
            raise UsageError(f"{path}:{k}: bad volume {row[1]!r}")
        if not math.isfinite(vol) or vol < 0:
            raise UsageError(f"{path}:{k}: bad volume {row[1]!r}")
        out[row[0].strip()] = vol
    return out


def run_batch(config: BatchConfig) -> tuple[list[ReportRow], int]:
    """Rows for every parseable line, plus the exit status."""
    try:
        lines = config.input_path.read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read input file {config.input_path}: {exc}")
    reference = read_reference(config.reference_path) if config.reference_path else {}

    rows, status = [], EXIT_OK
    for lineno, name, d, err in iter_batch(lines):
        if err is None:
            try:
                an = analyze(d)
            except DiagramError as exc:
                err = exc
        if err is not None:
            log.error("%s:%d: %s: %s", config.input_path, lineno, name, err)
            status = EXIT_PARTIAL
            continue
        all_reports = evaluate_diagram(an, twist_reduced=config.assert_twist_reduced)
        reports = {b: all_reports[b] for b in config.bounds_selected}
        try:
            best = best_bound(reports.values())
        except NoApplicableBound:
            best = None
        st = an.stats
        row = ReportRow(
            name=name,
            line=lineno,
            c=d.crossing_count,
            components=d.component_count,
            alternating=an.alternating,
            reduced=an.reduced,
            twist_number=st.twist_number if st else None,
            t={i: st.t_at(i) for i in range(1, 5)} if st else {},
            g5=st.g_at(5) if st else None,
            faces=an.faces.b,
            reports=reports,
            best=best,
            reference=reference.get(name),
        )
        if row.ratio is not None and row.ratio < 1 - RATIO_SLACK:
            msg = f"best bound {best.value:.6g} is below reference volume {row.reference:.6g}"
            row.warnings.append(msg)
            log.warning("%s: %s", name, msg)
        rows.append(row)
    return rows, status


def _num(x: Optional[float], full: bool):
    if x is None:
        return None
    return x if full else float(f"{x:.6g}")


def row_record(row: ReportRow, full: bool = False) -> dict:
    rec = {
        "name": row.name,
        "c": row.c,
        "components": row.components,
        "alternating": row.alternating,
        "reduced": row.reduced,
        "t": row.twist_number,
        **{f"t_{i}": row.t.get(i) for i in range(1, 5)},
        "g_5": row.g5,
        "faces": " ".join(f"{k}:{v}" for k, v in row.faces.items()),
    }
    for b, rep in row.reports.items():
        rec[b.value] = _num(rep.value, full)
    rec["best"] = row.best.name.value if row.best else None
    rec["best_value"] = _num(row.best.value if row.best else None, full)
    rec["reference"] = _num(row.reference, full)
    rec["ratio"] = _num(row.ratio, full)
    return rec


def emit_csv(rows: list[ReportRow], out, full: bool = False) -> None:
    recs = [row_record(r, full) for r in rows]
    if not recs:
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(recs[0]))
    for rec in recs:
        w.writerow(["n/a" if v is None else (f"{v:.6g}" if isinstance(v, float) and not full else v)
                    for v in rec.values()])


def emit_json(rows: list[ReportRow], out, full: bool = False) -> None:
    payload = []
    for r in rows:
        rec = row_record(r, full)
        rec["reasons"] = {b.value: rep.reason for b, rep in r.reports.items() if rep.reason}
        rec["warnings"] = r.warnings
        payload.append(rec)
    json.dump(payload, out, indent=2)
    out.write("\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="linkvol",
        description="Diagrammatic upper bounds on hyperbolic volumes of link complements.",
    )
    p.add_argument("--input", type=Path, help="file of 'name: X(...),...' lines")
    p.add_argument("--reference", type=Path, help="file of 'name,volume' records")
    p.add_argument("--bounds", default="all", help="'all' or a comma list of bound names")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--assert-twist-reduced", action="store_true",
                   help="assert every input diagram is twist reduced")
    p.add_argument("--verify", action="store_true", help="run the geometry self-checks")
    p.add_argument("--full-precision", action="store_true",
                   help="print full floating point precision instead of 6 significant digits")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    status = EXIT_OK
    try:
        if args.verify:
            checks = verify_geometry()
            for chk in checks:
                print(chk.line())
            failed = sum(not c.passed for c in checks)
            print(f"{len(checks) - failed}/{len(checks)} checks passed")
            status = EXIT_PARTIAL if failed else EXIT_OK
        if args.input is None:
            if not args.verify:
                raise UsageError("--input is required unless --verify is given")
            return status
        config = BatchConfig(
            input_path=args.input,
            reference_path=args.reference,
            bounds_selected=parse_bounds(args.bounds),
            output_format=args.format,
            assert_twist_reduced=args.assert_twist_reduced,
            full_precision=args.full_precision,
        )
        rows, batch_status = run_batch(config)
    except UsageError as exc:
        print(f"linkvol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit = emit_json if config.output_format == "json" else emit_csv
    emit(rows, sys.stdout, config.full_precision)
    return max(status, batch_status)


if __name__ == "__main__":
    sys.exit(main())
