"""Aligned-table and key=value renderings of a MetricsReport."""

import logging
from pathlib import Path
from typing import Optional, Tuple, Union

from src.metrics.models import METRIC_LABELS, METRIC_NAMES, MetricRow, MetricsReport

logger = logging.getLogger(__name__)

REPORT_HEADER = "#afford3d-report v1"


def protocol_header(report: MetricsReport) -> str:
    thresholds = ",".join(repr(t) for t in report.thresholds)
    return (
        f"{REPORT_HEADER} split={report.split_label} config_hash={report.config_hash} "
        f"bin_threshold={report.bin_threshold!r} thresholds={thresholds} oracle={str(report.oracle).lower()}"
    )


def _cell(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


def format_table(report: MetricsReport) -> str:
    """Human-readable aligned table; '-' marks an undefined metric."""
    header = ["affordance", "samples", *(METRIC_LABELS[m] for m in METRIC_NAMES), "skipped"]
    body = []
    for row in [*report.rows, report.overall]:
        skipped = sum(row.skipped.values())
        body.append([row.name, str(row.samples), *(_cell(row.values[m]) for m in METRIC_NAMES), str(skipped)])

    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]

    def line(cells):
        first = cells[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return "  ".join([first, *rest])

    rule = "-" * len(line(header))
    lines = [protocol_header(report), line(header), rule, *(line(r) for r in body[:-1]), rule, line(body[-1])]
    return "\n".join(lines) + "\n"


def _record(row: MetricRow) -> str:
    fields = [f"row={row.name}", f"samples={row.samples}"]
    for m in METRIC_NAMES:
        value = row.values[m]
        fields.append(f"{m}={'nan' if value is None else repr(value)}")
        fields.append(f"{m}_count={row.counts[m]}")
    return " ".join(fields)


def format_kv(report: MetricsReport) -> str:
    """One key=value record per row, overall last."""
    lines = [protocol_header(report), *(_record(r) for r in report.rows), _record(report.overall)]
    return "\n".join(lines) + "\n"


def write_report(report: MetricsReport, out_dir: Union[str, Path], stem: str = "report") -> Tuple[Path, Path]:
    """
    Write <stem>.txt (table) and <stem>.kv (records).

    Returns:
        (table path, key=value path)
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / f"{stem}.txt"
    kv_path = out_dir / f"{stem}.kv"
    table_path.write_text(format_table(report))
    kv_path.write_text(format_kv(report))
    logger.info(f"Wrote {report.split_label} report to {table_path} and {kv_path}")
    return table_path, kv_path


def parse_kv(text: str) -> dict:
    """Read a .kv report back into {row name: {key: value}} (values as strings)."""
    rows = {}
    for line in text.splitlines()[1:]:
        record = dict(field.split("=", 1) for field in line.split())
        rows[record["row"]] = record
    return rows
