"""Report records and their byte-stable JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

__all__ = ["Report", "write_report", "read_report", "dumps_json", "CSV_HEADER"]

CSV_HEADER = [
    "name", "r", "b", "s_re", "s_im", "nu", "delta",
    "computed_re", "computed_im", "expected_re", "expected_im",
    "abs_err", "rel_err", "stderr", "pass", "runtime_ms", "seed",
]


@dataclass
class Report:
    name: str
    statement: str
    r: int
    b: int
    s: complex
    nu: float
    delta: int
    computed: complex
    expected: complex
    provenance: str
    abs_err: float
    rel_err: float
    stderr: float | None
    passed: bool
    seed: int
    version: str
    runtime_ms: float | None = None
    config: dict = field(default_factory=dict)
    details: list = field(default_factory=list)
    message: str = ""

    def to_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d["runtime_ms"] = None
        return _encode(d)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        names = {f.name for f in fields(cls)}
        return cls(**{k: _decode(v) for k, v in d.items() if k in names})


def _encode(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return _encode(x.item())
    return x


def _decode(x):
    if isinstance(x, dict):
        if set(x) == {"re", "im"}:
            return complex(x["re"], x["im"])
        return {k: _decode(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_decode(v) for v in x]
    return x


def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    text = format(v, ".17g")
    # keep floats recognisable as floats (and -0.0 signed) after parsing
    return text if any(c in text for c in ".en") else text + ".0"


def _dump(x, indent, level) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(x[k], indent, level + 1)}" for k in sorted(x)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, list):
        if not x:
            return "[]"
        items = [pad + _dump(v, indent, level + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        return _fmt_float(x)
    if isinstance(x, int):
        return str(x)
    return json.dumps(x)


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    return _dump(_encode(obj), indent, 0) + "\n"


def _csv_row(rep: Report, timing: bool) -> list[str]:
    def f(v):
        return "" if v is None else _fmt_float(float(v))

    s = complex(rep.s)
    return [
        rep.name, str(rep.r), str(rep.b), f(s.real), f(s.imag), f(rep.nu), str(rep.delta),
        f(rep.computed.real), f(rep.computed.imag), f(rep.expected.real), f(rep.expected.imag),
        f(rep.abs_err), f(rep.rel_err), f(rep.stderr), "true" if rep.passed else "false",
        f(rep.runtime_ms) if timing else "", str(rep.seed),
    ]


def write_report(reports, path, fmt: str = "json", timing: bool = False) -> None:
    """Write one report or a list of reports.  Output is byte-stable unless timing=True."""
    if isinstance(reports, Report):
        reports = [reports]
    reports = list(reports)
    if fmt == "json":
        payload = [r.to_dict(timing) for r in reports]
        text = dumps_json(payload[0] if len(payload) == 1 else payload)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for rep in reports:
            w.writerow(_csv_row(rep, timing))
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")


def read_report(path) -> list[Report]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = [data]
    return [Report.from_dict(d) for d in data]
