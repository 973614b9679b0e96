"""Instance files, fit serialization and SVG rendering."""
from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import CostModel, InstanceError, PointSet, Segment, StepFunction, WeightedPoint


@dataclass(frozen=True)
class Instance:
    points: PointSet
    k: int | None = None
    model: CostModel = CostModel.LINEAR

    def __post_init__(self):
        if len(self.points) == 0:
            raise InstanceError("instance has no points")
        if self.k is not None and self.k < 1:
            raise InstanceError(f"k must be at least 1, got {self.k}")

    def __len__(self) -> int:
        return len(self.points)

    def point_list(self) -> list[WeightedPoint]:
        return self.points.points()


@dataclass
class FitOutput:
    cost: float
    segments: list            # (x_left, x_right, y) triples
    boundaries: list          # k+1 prefix counts
    engine: str
    model: str = "linear"
    diagnostics: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.segments)

    def step_function(self) -> StepFunction:
        return StepFunction(tuple(Segment(*s) for s in self.segments))

    @classmethod
    def from_report(cls, report, engine: str = "prune", model: str = "linear") -> "FitOutput":
        segs = [[s.x_left, s.x_right, s.y] for s in report.fit.segments]
        return cls(float(report.cost), segs, list(report.boundaries), engine, model,
                   report.diagnostics.as_dict())

    def to_dict(self) -> dict:
        return {
            "cost": self.cost,
            "k": self.k,
            "model": self.model,
            "engine": self.engine,
            "segments": [{"x_left": a, "x_right": b, "y": y} for a, b, y in self.segments],
            "boundaries": list(self.boundaries),
            "diagnostics": self.diagnostics,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FitOutput":
        segs = [[s["x_left"], s["x_right"], s["y"]] for s in d["segments"]]
        return cls(d["cost"], segs, list(d["boundaries"]), d["engine"],
                   d.get("model", "linear"), d.get("diagnostics", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FitOutput":
        return cls.from_dict(json.loads(text))

    def to_tsv(self) -> str:
        lines = [f"# cost={self.cost!r}"]
        lines += [f"{a!r}\t{b!r}\t{y!r}" for a, b, y in self.segments]
        return "\n".join(lines) + "\n"


# -- instances ----------------------------------------------------------------

def _parse_float(text: str, line: int, name: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise InstanceError(f"line {line}: {name} is not a number: {text.strip()!r}") from None
    if not math.isfinite(v):
        raise InstanceError(f"line {line}: {name} is not finite: {text.strip()!r}")
    return v


def parse_csv(text: str) -> PointSet:
    xs, ys, ws = [], [], []
    for line_no, row in enumerate(csv.reader(_io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells) or cells[0].startswith("#"):
            continue
        if line_no == 1 and [c.lower() for c in cells[:2]] == ["x", "y"]:
            continue
        if len(cells) not in (2, 3):
            raise InstanceError(f"line {line_no}: expected 'x,y[,w]', got {len(cells)} fields")
        x = _parse_float(cells[0], line_no, "x")
        y = _parse_float(cells[1], line_no, "y")
        w = _parse_float(cells[2], line_no, "w") if len(cells) == 3 and cells[2] else 1.0
        if w <= 0:
            raise InstanceError(f"line {line_no}: weight must be positive, got {w!r}")
        xs.append(x)
        ys.append(y)
        ws.append(w)
    if not xs:
        raise InstanceError("no points in input")
    return PointSet.from_arrays(xs, ys, ws)


def parse_json(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"line {e.lineno}: invalid JSON ({e.msg})") from None
    if not isinstance(d, dict) or not isinstance(d.get("points"), list):
        raise InstanceError("expected an object with a 'points' list")
    xs, ys, ws = [], [], []
    for i, p in enumerate(d["points"]):
        try:
            x, y, w = float(p["x"]), float(p["y"]), float(p.get("w", 1.0))
        except (KeyError, TypeError, ValueError):
            raise InstanceError(f"point {i}: needs numeric 'x' and 'y'") from None
        for name, v in (("x", x), ("y", y), ("w", w)):
            if not math.isfinite(v):
                raise InstanceError(f"point {i}: {name} is not finite")
        if w <= 0:
            raise InstanceError(f"point {i}: weight must be positive, got {w!r}")
        xs.append(x)
        ys.append(y)
        ws.append(w)
    if not xs:
        raise InstanceError("no points in input")
    k = d.get("k")
    model = CostModel.parse(d.get("model", "linear"))
    return Instance(PointSet.from_arrays(xs, ys, ws), None if k is None else int(k), model)


def load_instance(path, fmt: str | None = None, k: int | None = None,
                  model: CostModel | str | None = None) -> Instance:
    """Read a CSV or JSON instance; ``k`` and ``model`` override the file's values."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    text = path.read_text()
    if not text.strip():
        raise InstanceError(f"{path}: empty file")
    if fmt == "csv":
        inst = Instance(parse_csv(text))
    elif fmt == "json":
        inst = parse_json(text)
    else:
        raise ValueError(f"unknown instance format {fmt!r}")
    return Instance(inst.points,
                    k if k is not None else inst.k,
                    CostModel.parse(model) if model is not None else inst.model)


def format_csv(points: PointSet, header: bool = True) -> str:
    lines = ["x,y,w"] if header else []
    lines += [f"{x!r},{y!r},{w!r}" for x, y, w in
              zip(points.x.tolist(), points.y.tolist(), points.w.tolist())]
    return "\n".join(lines) + "\n"


def format_json(inst: Instance) -> str:
    d = {"points": [{"x": x, "y": y, "w": w} for x, y, w in
                    zip(inst.points.x.tolist(), inst.points.y.tolist(), inst.points.w.tolist())]}
    if inst.k is not None:
        d["k"] = inst.k
    d["model"] = inst.model.value
    return json.dumps(d, indent=1) + "\n"


def save_instance(inst: Instance, path, fmt: str | None = None) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    path.write_text(format_json(inst) if fmt == "json" else format_csv(inst.points))


# -- SVG ------------------------------------------------------------------------

def render_svg(out: FitOutput, inst: Instance, width: int = 640, height: int = 400,
               tol: float = 1e-9) -> str:
    """Points as circles sized by weight, steps as horizontal lines, critical points in red."""
    ps = inst.points
    pad = 24.0
    x0, x1 = float(ps.x.min()), float(ps.x.max())
    heights = [s[2] for s in out.segments]
    y0 = min(float(ps.y.min()), *heights)
    y1 = max(float(ps.y.max()), *heights)
    sx = (width - 2 * pad) / (x1 - x0) if x1 > x0 else 0.0
    sy = (height - 2 * pad) / (y1 - y0) if y1 > y0 else 0.0

    def px(x):
        return pad + (x - x0) * sx if sx else width / 2

    def py(y):
        return height - pad - (y - y0) * sy if sy else height / 2

    F = out.step_function()
    w_eff = CostModel.parse(inst.model).effective_weights(ps.w)
    d = np.abs(ps.y - F(ps.x))
    c = w_eff * (d * d if inst.model is CostModel.SQUARED else d)
    top = float(c.max()) if len(c) else 0.0
    crit = (c >= top - tol * (1.0 + top)) & (top > 0)
    wmax = float(ps.w.max())

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{out.k}-step fit, cost {out.cost!r}</title>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for a, b, y in out.segments:
        parts.append(f'<line class="step" x1="{px(a):.3f}" y1="{py(y):.3f}" x2="{px(b):.3f}" '
                     f'y2="{py(y):.3f}" stroke="#1f4e9c" stroke-width="2"/>')
    for i in ps.order():
        r = 1.5 + 6.0 * float(ps.w[i]) / wmax
        fill = "#d62728" if crit[i] else "#555555"
        cls = "point critical" if crit[i] else "point"
        parts.append(f'<circle class="{cls}" cx="{px(ps.x[i]):.3f}" cy="{py(ps.y[i]):.3f}" '
                     f'r="{r:.3f}" fill="{fill}" fill-opacity="0.7"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(out: FitOutput, inst: Instance, fmt: str) -> str:
    if fmt == "json":
        return out.to_json()
    if fmt == "tsv":
        return out.to_tsv()
    if fmt == "svg":
        return render_svg(out, inst)
    raise ValueError(f"unknown output format {fmt!r}")
