"""Figure and CSV rendering for corpus reports.

The corpus command can drop a small report bundle next to its stdout
output: a CSV of the per-file rows plus two PNG charts (configuration
space sizes, finding counts). Matplotlib runs headless (Agg).
"""

from __future__ import annotations

import csv
from pathlib import Path

from .corpus import CorpusReport


def write_corpus_csv(report: CorpusReport, path: Path) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["path", "features", "plans", "addOns",
                         "configurationSpaceSize", "findings", "error"])
        for row in report.files:
            stats = row.stats
            writer.writerow([
                row.path,
                stats.features if stats else "",
                stats.plans if stats else "",
                stats.add_ons if stats else "",
                stats.configuration_space_size if stats else "",
                len(row.diagnostics),
                row.error or "",
            ])
    return path


def render_corpus_figures(report: CorpusReport, out_dir: Path) -> list[Path]:
    """Write the report bundle into out_dir; returns the created files."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    created = [write_corpus_csv(report, out_dir / "report.csv")]

    names = [Path(row.path).stem for row in report.files]
    sizes = [row.stats.configuration_space_size if row.stats else 0 for row in report.files]
    findings = [len(row.diagnostics) for row in report.files]
    if names:
        fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(names)), 4))
        ax.bar(range(len(names)), sizes, color="#3b6ea5")
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
        ax.set_ylabel("configuration space size")
        if max(sizes) > 50 * max(1, min(s for s in sizes if s > 0) if any(sizes) else 1):
            ax.set_yscale("symlog")
        ax.set_title("Configuration space per pricing")
        fig.tight_layout()
        space_png = out_dir / "configuration_space.png"
        fig.savefig(space_png, dpi=120)
        plt.close(fig)
        created.append(space_png)

        fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(names)), 4))
        ax.bar(range(len(names)), findings, color="#a53b3b")
        ax.set_xticks(range(len(names)))
        ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
        ax.set_ylabel("findings")
        ax.set_title(f"Diagnostics per pricing ({report.operation})")
        fig.tight_layout()
        findings_png = out_dir / "findings.png"
        fig.savefig(findings_png, dpi=120)
        plt.close(fig)
        created.append(findings_png)
    return created
