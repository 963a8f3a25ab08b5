"""Report rendering: canonical JSON and a derived text view."""

import json
from typing import Any, Dict, List

from src.core.checks import CheckResult
from src.reports.suite import Report


STATUS_SYMBOLS = {
    "PASSED": "✅",
    "FAILED": "❌",
    "WARNING": "⚠️",
    "SKIPPED": "⏭️",
}

# defects longer than this are cut in the text view only
TEXT_DEFECT_LIMIT = 400


def dumps(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_json(report: Report) -> str:
    return dumps(report.to_json())


def status_line(record: CheckResult) -> str:
    symbol = STATUS_SYMBOLS.get(record.status.value, "❓")
    return f"{symbol} {record.name}: {record.message}"


def render_records_text(records: List[Dict[str, Any]]) -> List[str]:
    lines = []
    for record in records:
        symbol = STATUS_SYMBOLS.get(record["status"], "❓")
        lines.append(f"{symbol} {record['name']}: {record['message']}")
        if record.get("reference"):
            lines.append(f"   {record['reference']}")
        if record.get("first_defect") is not None:
            text = json.dumps(record["first_defect"], sort_keys=True)
            if len(text) > TEXT_DEFECT_LIMIT:
                text = text[:TEXT_DEFECT_LIMIT] + " ..."
            lines.append(f"   First defect: {text}")
        if "wall_time" in record:
            lines.append(f"   Time: {record['wall_time']:.3f}s")
    return lines


def render_text(report: Report) -> str:
    """One status line per record, derived from the JSON form."""
    data = report.to_json()
    config = data["config"]
    lines = [
        f"Suite: {config['algebra']} / {config['star']} "
        f"(degree {config['degree']}, order {config['order']}, seed {config['seed']})",
        "-" * 50,
    ]
    lines += render_records_text(data["records"])
    lines.append("-" * 50)
    counts = data["counts"]
    summary = ", ".join(f"{n} {k.lower()}" for k, n in counts.items() if n)
    if data["passed"]:
        lines.append(f"✅ All identities hold ({summary})")
    else:
        lines.append(f"❌ Identity failures ({summary})")
    return "\n".join(lines) + "\n"


def render(report: Report, output_format: str = "json") -> str:
    """Render in ``json`` or ``text``.

    Raises:
        ValueError: When the format is unknown
    """
    if output_format == "json":
        return render_json(report)
    if output_format == "text":
        return render_text(report)
    raise ValueError(f"Unknown report format {output_format!r}")
