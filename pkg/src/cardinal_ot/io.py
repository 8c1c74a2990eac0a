"""Reading and writing measures, flows, plans and pivots as CSV or JSON.

CSV bodies use ``repr`` floats (shortest round-trip form); ``#`` starts a
comment and blank lines are skipped.

    measure 2D   x1,x2,weight
    measure 1D   x,weight
    flow         1,x1,x2,y1,mass  and  2,x2,y1,y2,mass
    plan         x1,x2,y1,y2,mass
    pivot        y1,x2,weight
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterator, Union

from .measures import DiscreteMeasure1D, DiscreteMeasure2D, make_measure_1d, make_measure_2d
from .structures import CardinalFlow, PivotMeasure, TransportPlan

PathLike = Union[str, Path]


class FormatError(ValueError):
    """Input file does not follow the documented layout."""


def _rows(text: str, width: int, source: str) -> Iterator[list[float]]:
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != width:
            raise FormatError(f"{source}:{lineno}: expected {width} fields, got {len(row)}")
        try:
            yield [float(v) for v in row]
        except ValueError as exc:
            raise FormatError(f"{source}:{lineno}: {exc}") from None


def _fmt(v: float) -> str:
    return repr(float(v))


def _csv(rows) -> str:
    return "".join(",".join(_fmt(v) if not isinstance(v, int) else str(v) for v in row) + "\n" for row in rows)


def _is_json(path: PathLike) -> bool:
    return str(path).lower().endswith(".json")


# measures

def parse_measure_2d(text: str, fmt: str = "csv", source: str = "<string>") -> DiscreteMeasure2D:
    if fmt == "json":
        try:
            atoms = json.loads(text)["atoms"]
            return make_measure_2d([a["x"] for a in atoms], [a["w"] for a in atoms])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"{source}: bad measure JSON ({exc})") from None
    rows = list(_rows(text, 3, source))
    return make_measure_2d([r[:2] for r in rows], [r[2] for r in rows])


def parse_measure_1d(text: str, fmt: str = "csv", source: str = "<string>") -> DiscreteMeasure1D:
    if fmt == "json":
        try:
            atoms = json.loads(text)["atoms"]
            return make_measure_1d([a["x"] for a in atoms], [a["w"] for a in atoms])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"{source}: bad measure JSON ({exc})") from None
    rows = list(_rows(text, 2, source))
    return make_measure_1d([r[0] for r in rows], [r[1] for r in rows])


def read_measure_2d(path: PathLike) -> DiscreteMeasure2D:
    return parse_measure_2d(Path(path).read_text(), "json" if _is_json(path) else "csv", str(path))


def read_measure_1d(path: PathLike) -> DiscreteMeasure1D:
    return parse_measure_1d(Path(path).read_text(), "json" if _is_json(path) else "csv", str(path))


def format_measure_2d(m: DiscreteMeasure2D, fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps({"atoms": [{"x": list(p), "w": w} for p, w in m.atoms]}) + "\n"
    return _csv([(p[0], p[1], w) for p, w in m.atoms])


# flows, plans, pivots

def format_flow(F: CardinalFlow, fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps({
            "f1": [{"x": list(k), "w": m} for k, m in F.f1],
            "f2": [{"x": list(k), "w": m} for k, m in F.f2],
        }) + "\n"
    return _csv([(1, *k, m) for k, m in F.f1] + [(2, *k, m) for k, m in F.f2])


def parse_flow(text: str, fmt: str = "csv", source: str = "<string>") -> CardinalFlow:
    if fmt == "json":
        try:
            data = json.loads(text)
            return CardinalFlow.from_masses(
                [(tuple(a["x"]), a["w"]) for a in data["f1"]],
                [(tuple(a["x"]), a["w"]) for a in data["f2"]],
            )
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"{source}: bad flow JSON ({exc})") from None
    f1, f2 = [], []
    for row in _rows(text, 5, source):
        tag, key, m = row[0], tuple(row[1:4]), row[4]
        if tag == 1:
            f1.append((key, m))
        elif tag == 2:
            f2.append((key, m))
        else:
            raise FormatError(f"{source}: flow rows must start with 1 or 2, got {tag!r}")
        if m < 0:
            raise FormatError(f"{source}: negative mass {m!r}")
    return CardinalFlow.from_masses(f1, f2)


def read_flow(path: PathLike) -> CardinalFlow:
    return parse_flow(Path(path).read_text(), "json" if _is_json(path) else "csv", str(path))


def format_plan(pi: TransportPlan, fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps({"entries": [{"x": list(k), "w": m} for k, m in pi.entries]}) + "\n"
    return _csv([(*k, m) for k, m in pi.entries])


def parse_plan(text: str, fmt: str = "csv", source: str = "<string>") -> TransportPlan:
    if fmt == "json":
        try:
            return TransportPlan.from_masses([(tuple(a["x"]), a["w"]) for a in json.loads(text)["entries"]])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise FormatError(f"{source}: bad plan JSON ({exc})") from None
    return TransportPlan.from_masses([(tuple(r[:4]), r[4]) for r in _rows(text, 5, source)])


def read_plan(path: PathLike) -> TransportPlan:
    return parse_plan(Path(path).read_text(), "json" if _is_json(path) else "csv", str(path))


def format_pivot(zeta: PivotMeasure, fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps({"atoms": [{"x": list(p), "w": w} for p, w in zeta.atoms]}) + "\n"
    return _csv([(p[0], p[1], w) for p, w in zeta.atoms])


def parse_pivot(text: str, fmt: str = "csv", source: str = "<string>") -> PivotMeasure:
    m = parse_measure_2d(text, fmt, source)
    return PivotMeasure(m.points, m.weights)
