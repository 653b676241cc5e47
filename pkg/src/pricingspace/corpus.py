"""Directory-scale analysis: run one operation over every pricing file.

Files are processed by a bounded worker pool but reported in file-name
order; a file that fails to parse (or is unreadable) produces a row-level
error entry instead of being skipped.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from . import analysis, engine, jsonio
from .analysis import PricingStats
from .parser import Severity, parse_pricing

OPERATIONS = ("stats", "lint", "validate")


@dataclass
class FileReport:
    path: str
    stats: PricingStats | None = None
    diagnostics: list[dict] = field(default_factory=list)
    duration_ms: float = 0.0
    error: str | None = None


@dataclass
class CorpusReport:
    files: list[FileReport]
    operation: str

    @property
    def totals(self) -> dict:
        parsed = [f for f in self.files if f.stats is not None]
        return {
            "files": len(self.files),
            "errors": sum(1 for f in self.files if f.error is not None),
            "findings": sum(len(f.diagnostics) for f in self.files),
            "features": sum(f.stats.features for f in parsed),
            "plans": sum(f.stats.plans for f in parsed),
            "addOns": sum(f.stats.add_ons for f in parsed),
            "configurationSpaceSize": sum(f.stats.configuration_space_size for f in parsed),
        }


def run_corpus(
    directory: Path,
    operation: str = "stats",
    *,
    now: date | None = None,
    workers: int = 4,
) -> CorpusReport:
    if operation not in OPERATIONS:
        raise ValueError(f"unknown corpus operation {operation!r}; expected one of {OPERATIONS}")
    paths = sorted(p for p in Path(directory).glob("*.yml")) + sorted(
        p for p in Path(directory).glob("*.yaml"))
    paths.sort(key=lambda p: p.name)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(lambda p: _analyze_file(p, operation, now), paths))
    return CorpusReport(rows, operation)


def _analyze_file(path: Path, operation: str, now: date | None) -> FileReport:
    started = time.perf_counter()
    row = FileReport(path=str(path))
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        row.error = f"unreadable: {exc}"
        row.duration_ms = (time.perf_counter() - started) * 1000
        return row
    result = parse_pricing(text)
    row.diagnostics.extend(
        jsonio.syntax_diagnostic_json(d) for d in result.diagnostics
        if d.severity is Severity.ERROR or operation != "stats"
    )
    if result.pricing is None:
        row.error = "parse failed"
        row.duration_ms = (time.perf_counter() - started) * 1000
        return row
    pricing = result.pricing
    try:
        violations = engine.check_pricing(pricing)
        if operation in ("lint", "validate"):
            row.diagnostics.extend(jsonio.violation_json(v) for v in violations)
        if operation == "lint":
            findings = analysis.lint(pricing, now or date.today())
            row.diagnostics.extend(jsonio.finding_json(f) for f in findings)
        if not violations:
            row.stats = analysis.stats(pricing)
        elif operation == "stats":
            # a pricing that fails its own constraints has no statistics row
            row.error = "invalid pricing"
    except Exception as exc:  # keep the corpus run alive on any per-file failure
        row.error = f"{type(exc).__name__}: {exc}"
    row.duration_ms = (time.perf_counter() - started) * 1000
    return row


def report_json(report: CorpusReport, *, timing: bool = True) -> dict:
    files = []
    for row in report.files:
        entry: dict = {"path": row.path}
        entry["stats"] = jsonio.stats_json(row.stats) if row.stats is not None else None
        entry["diagnostics"] = row.diagnostics
        if row.error is not None:
            entry["error"] = row.error
        if timing:
            entry["durationMs"] = round(row.duration_ms, 3)
        files.append(entry)
    return {"files": files, "totals": report.totals}
