"""Read input documents and write canonical JSON output."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from specred.algebra.ratmat import RatMatrix
from specred.errors import ParseError
from specred.formats.codec import decode_labeled, decode_ratmatrix
from specred.spectral.labeled import LabeledMatrix


def dumps_canonical(document: Any) -> str:
    """UTF-8 JSON with sorted keys, two-space indent and a trailing newline."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_document(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=str(path)) from exc
    return loads_document(text, str(path))


def loads_document(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {source}: {exc.msg}", path=source, line=exc.lineno, column=exc.colno) from exc


def _edge_label(token: str) -> Any:
    try:
        return int(token)
    except ValueError:
        return token


def parse_edge_list(text: str, source: str = "<string>") -> LabeledMatrix:
    """Lines "u v [weight]"; blank lines and '#' comments are skipped."""
    edges: list[tuple[Any, Any, int | float]] = []
    labels: list[Any] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [weight]' in {source}", path=source, line=lineno, column=1)
        u, v = _edge_label(parts[0]), _edge_label(parts[1])
        weight: int | float = 1
        if len(parts) == 3:
            try:
                weight = int(parts[2])
            except ValueError:
                try:
                    weight = float(parts[2])
                except ValueError as exc:
                    column = raw.index(parts[2]) + 1
                    raise ParseError(f"bad weight {parts[2]!r}", path=source, line=lineno, column=column) from exc
        for x in (u, v):
            if x not in labels:
                labels.append(x)
        edges.append((u, v, weight))
    if not labels:
        raise ParseError(f"no edges in {source}", path=source, line=1, column=1)
    if all(isinstance(x, int) for x in labels):
        labels.sort()
    index = {x: i for i, x in enumerate(labels)}
    dtype = int if all(isinstance(w, int) for _, _, w in edges) else float
    matrix = np.zeros((len(labels), len(labels)), dtype=dtype)
    for u, v, w in edges:
        matrix[index[u], index[v]] = w
        matrix[index[v], index[u]] = w
    return LabeledMatrix.of(matrix, labels)


def parse_matrix(path: str | Path) -> LabeledMatrix | RatMatrix:
    """A LabeledMatrix or RatMatrix document, or an edge list."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=str(path)) from exc
    if path.suffix != ".json" and not text.lstrip().startswith(("{", "[")):
        return parse_edge_list(text, str(path))
    document = loads_document(text, str(path))
    if not isinstance(document, dict):
        raise ParseError(f"{path} is not a JSON object", path=str(path), line=1, column=1)
    if "matrix" in document:
        return decode_labeled(document)
    if "entries" in document:
        return decode_ratmatrix(document)
    raise ParseError(f"{path} holds neither a labeled matrix nor a rational matrix", path=str(path))


def emit(document: Any, path: str | Path | None = None) -> int:
    """Write the canonical form to ``path`` (replacing it) or to stdout; returns bytes written."""
    text = dumps_canonical(document)
    if path is None:
        sys.stdout.write(text)
        return len(text.encode("utf-8"))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # Remove existing output so it is replaced, not appended to
    if path.exists():
        path.unlink()
    data = text.encode("utf-8")
    with open(path, "wb") as handle:
        written = handle.write(data)
    if written == 0:
        sys.stderr.write("warning: document is empty (0 bytes written)\n")
    return written
