"""Deterministic JSON/CSV writers used by the command-line front end.

Floats are rendered with 17 significant digits so binary64 values
round-trip exactly and identical configurations produce byte-identical
files.  Every file starts with a format tag and the fully resolved run
configuration.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

FORMAT_PREFIX = "henonclinic"
FORMAT_VERSION = 1


def format_tag(kind: str) -> str:
    return f"{FORMAT_PREFIX}/{kind}:{FORMAT_VERSION}"


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Render ``obj`` as JSON with fixed float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        rendered = [dumps(v, indent + 1) for v in seq]
        if all(not isinstance(v, (dict, list, tuple)) for v in seq):
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(inner + r for r in rendered) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    return fmt_float(obj)


def write_json(path: Path, kind: str, config: dict, payload: dict) -> None:
    doc = {"format": format_tag(kind), "config": config}
    doc.update(payload)
    Path(path).write_text(dumps(doc) + "\n", encoding="utf-8", newline="\n")


def write_csv(path: Path, kind: str, config: dict, header, rows) -> None:
    """CSV with LF endings, a header row, and config embedded as comments."""
    lines = [
        f"# format: {format_tag(kind)}",
        f"# config: {json.dumps(config, sort_keys=True)}",
        ",".join(header),
    ]
    for row in rows:
        cells = [
            str(v) if isinstance(v, (int, str)) else fmt_float(v) for v in row
        ]
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_mesh(path: Path, config: dict, mesh) -> None:
    """Mesh file: comment preamble, a shape/bounds header, then records.

    Surface meshes store row-major records ``u, v, x1, y1, x2, y2``;
    curve meshes store ``t, x, y``.
    """
    rows, cols = mesh.points.shape[:2]
    dim = mesh.points.shape[2]
    lines = [
        f"# format: {format_tag('mesh')}",
        f"# config: {json.dumps(config, sort_keys=True)}",
    ]
    if dim == 2:
        lo, hi = mesh.bounds
        lines.append("rows,cols,t_min,t_max")
        lines.append(f"{rows},{cols},{fmt_float(lo)},{fmt_float(hi)}")
        lines.append("t,x,y")
    else:
        (ulo, uhi), (vlo, vhi) = mesh.bounds
        lines.append("rows,cols,u_min,u_max,v_min,v_max")
        lines.append(
            f"{rows},{cols},{fmt_float(ulo)},{fmt_float(uhi)},"
            f"{fmt_float(vlo)},{fmt_float(vhi)}"
        )
        lines.append("u,v,x1,y1,x2,y2")
    for r in range(rows):
        for c in range(cols):
            cells = list(mesh.param_values[r, c]) + list(mesh.points[r, c])
            lines.append(",".join(fmt_float(v) for v in cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
