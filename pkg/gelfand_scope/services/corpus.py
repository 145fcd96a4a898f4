from __future__ import annotations

import json
import logging
from pathlib import Path

from ..errors import UsageError
from .groups import DEFAULT_CLOSURE_CAP, Group, group_from_json, group_to_json

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


def corpus_names() -> list[str]:
    return sorted(path.stem for path in CORPUS_DIR.glob("*.json"))


def load_corpus_data(name: str) -> dict:
    path = CORPUS_DIR / f"{name.lower()}.json"
    if not path.is_file():
        raise UsageError(f"No bundled group named {name!r}; known: {', '.join(corpus_names())}")
    return json.loads(path.read_text(encoding="utf-8"))


def load_corpus_group(name: str, cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    data = load_corpus_data(name)
    return group_from_json(data, cap=cap, name=data.get("name", name))


def load_group_input(source: str, cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    """A group from inline JSON, a file path, or a bundled corpus name."""
    text = source.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"Inline group JSON is malformed: {exc.msg} at line {exc.lineno}, column {exc.colno}") from exc
        return group_from_json(data, cap=cap)
    path = Path(source)
    if path.is_file():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: {exc.msg} at line {exc.lineno}, column {exc.colno}") from exc
        logger.debug("Группа прочитана из %s", path)
        return group_from_json(data, cap=cap, name=data.get("name") if isinstance(data, dict) else None)
    if (CORPUS_DIR / f"{source.lower()}.json").is_file():
        return load_corpus_group(source, cap=cap)
    raise UsageError(f"Group input {source!r} is neither JSON, a file, nor a bundled group")


def dump_group(group: Group) -> dict:
    payload = group_to_json(group)
    if group.name:
        payload = {"name": group.name, **payload}
    return payload


def corpus_summary(cap: int = DEFAULT_CLOSURE_CAP) -> list[dict]:
    rows = []
    for name in corpus_names():
        group = load_corpus_group(name, cap=cap)
        rows.append({"name": group.name or name, "file": name, "order": group.order, "classes": group.classes.count})
    return rows
