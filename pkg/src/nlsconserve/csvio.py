"""Deterministic CSV output: LF endings, 17 significant digits for floats."""

from __future__ import annotations

import csv
import enum
import io
import math

SCHEMAS = {
    "solve": ("step", "t", "mass_R", "energy_R", "mass_u", "energy_u", "linf_u", "fp_iters"),
    "converge": ("tau", "l2_re", "order_re", "linf_re", "order_linf_re",
                 "l2_im", "order_im", "linf_im", "order_linf_im"),
    "dispersion": ("tau", "omega", "omega_tilde", "error", "order"),
    "blowup": ("scheme", "tau", "n_cells", "t_max", "u_max", "t1_R", "t2_R", "status"),
    "conservation": ("t", "mass_R", "energy_R", "mass_u", "energy_u"),
}


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if hasattr(v, "dtype"):
        return format_value(v.item())
    return str(v)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def emit_csv(header, rows, path) -> None:
    """Write ``rows`` under ``header``; ``path`` of ``None`` or ``-`` means stdout."""
    text = render_csv(header, rows)
    if path in (None, "-"):
        import sys

        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_csv(path) -> tuple:
    """Header and rows of a file written by :func:`emit_csv`, numeric fields parsed."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[_parse(v) for v in row] for row in reader]
    return header, rows


def _parse(v: str):
    if v == "":
        return None
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return float(v)
    except ValueError:
        return v
