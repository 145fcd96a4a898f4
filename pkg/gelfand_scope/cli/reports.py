"""Report rendering. JSON is the source of truth; pretty and tsv are views."""
from __future__ import annotations

import json
from typing import Any

FORMATS = ("json", "pretty", "tsv")


def render(payload: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, ensure_ascii=False)
    if fmt == "pretty":
        if "values" in payload and "degrees" in payload:
            return render_table(payload)
        return "\n".join(_pretty_lines(payload))
    if fmt == "tsv":
        return render_tsv(payload)
    raise ValueError(f"Unknown format: {fmt}")


def render_table(payload: dict) -> str:
    """Character table as aligned text, residues shown as stored modulo p."""
    values = payload["values"]
    header = ["", *[f"{size}:{order}" for size, order in zip(payload["class_sizes"], payload["element_orders"])]]
    rows = [header]
    for i, row in enumerate(values):
        rows.append([f"X{i + 1}", *[str(v) for v in row]])
    widths = [max(len(row[c]) for row in rows) for c in range(len(header))]
    lines = [f"p = {payload['p']}, |G| = {payload['order']}, степени: {', '.join(map(str, payload['degrees']))}"]
    lines.extend("  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in rows)
    return "\n".join(lines)


def _pretty_lines(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not _is_flat_list(item):
                lines.append(f"{pad}{key}:")
                lines.extend(_pretty_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines.extend(_pretty_lines(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _is_flat_list(value: Any) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value)


def _scalar(value: Any) -> str:
    if isinstance(value, list):
        return " ".join(str(v) for v in value)
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "да" if value else "нет"
    return str(value)


def render_tsv(payload: dict) -> str:
    """First list of objects becomes rows; otherwise key/value pairs."""
    for value in payload.values():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            columns = [k for k, v in value[0].items() if not isinstance(v, (dict, list)) or _is_flat_list(v)]
            lines = ["\t".join(columns)]
            lines.extend("\t".join(_scalar(row.get(c)) for c in columns) for row in value)
            return "\n".join(lines)
    if "values" in payload and "degrees" in payload:
        return "\n".join("\t".join(str(v) for v in row) for row in payload["values"])
    return "\n".join(f"{k}\t{_scalar(v)}" for k, v in payload.items() if not isinstance(v, dict))
