"""File formats: curves, lifted pairs, tangent fields, paths, trajectories.

Curves travel as JSON objects {"topology": "open"|"closed",
"points": [[x, y], ...]} or as two-column CSV with an optional
"# topology=closed" header line; points are samples at uniform parameter.
Floating-point output is rounded to 12 significant digits.
"""

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .curves import CLOSED, OPEN, PlaneCurve
from .lift import LiftPair, ZeroSetReport

SIGNIFICANT_DIGITS = 12


def _round_sig(x: float) -> float:
    if x == 0 or not np.isfinite(x):
        return float(x)
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def jsonable(obj):
    """Recursively convert arrays/floats for JSON with rounded floats."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return _round_sig(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dump_json(obj, path):
    Path(path).write_text(json.dumps(jsonable(obj), indent=1) + "\n")


def curve_to_obj(curve: PlaneCurve) -> dict:
    pts = np.column_stack([curve.points.real, curve.points.imag])
    return {"topology": curve.topology, "points": pts}


def curve_from_obj(obj: dict) -> PlaneCurve:
    topo = obj.get("topology", CLOSED)
    pts = np.asarray(obj["points"], dtype=float)
    return PlaneCurve(pts[:, 0] + 1j * pts[:, 1], topo)


def write_curve(path, curve: PlaneCurve):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, "w", newline="") as fh:
            fh.write(f"# topology={curve.topology}\n")
            writer = csv.writer(fh)
            writer.writerow(["x", "y"])
            for z in curve.points:
                writer.writerow([_round_sig(z.real), _round_sig(z.imag)])
        return
    dump_json(curve_to_obj(curve), path)


def read_curve(path) -> PlaneCurve:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        topo = OPEN
        rows = []
        with open(path) as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    if "topology=closed" in line.replace(" ", ""):
                        topo = CLOSED
                    continue
                parts = line.split(",")
                if parts[0].strip().lower() == "x":
                    continue
                try:
                    rows.append((float(parts[0]), float(parts[1])))
                except (ValueError, IndexError) as ex:
                    raise ValueError(f"{path}:{line_no}: cannot parse '{line}'") from ex
        pts = np.asarray(rows)
        return PlaneCurve(pts[:, 0] + 1j * pts[:, 1], topo)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as ex:
        raise ValueError(f"{path}:{ex.lineno}: invalid JSON ({ex.msg})") from ex
    return curve_from_obj(obj)


def write_lift(path, pair: LiftPair, report: ZeroSetReport | None = None):
    obj = {"parity": pair.parity, "e": pair.e, "f": pair.f}
    if report is not None:
        obj["zero_set"] = {
            "zero_nodes": report.zero_nodes,
            "min_value": report.min_value,
            "crosses_bad_set": report.crosses_bad_set,
        }
    dump_json(obj, path)


def read_lift(path) -> LiftPair:
    obj = json.loads(Path(path).read_text())
    return LiftPair(np.asarray(obj["e"], float), np.asarray(obj["f"], float), obj["parity"])


def write_tangent_field(path, values: np.ndarray):
    vals = np.asarray(values, dtype=complex)
    dump_json({"values": np.column_stack([vals.real, vals.imag])}, path)


def read_tangent_field(path) -> np.ndarray:
    obj = json.loads(Path(path).read_text())
    vals = np.asarray(obj["values"], dtype=float)
    return vals[:, 0] + 1j * vals[:, 1]


def write_path(path, times, curves, extra: dict | None = None):
    obj = {"times": list(times), "curves": [curve_to_obj(c) for c in curves]}
    if extra:
        obj.update(extra)
    dump_json(obj, path)


def write_trajectory(prefix, states, momenta_rows):
    """JSON time series of curves plus a CSV momenta table."""
    prefix = Path(prefix)
    write_path(
        prefix.with_suffix(".json"),
        [s.t for s in states],
        [s.curve for s in states],
    )
    with open(prefix.with_suffix(".csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "energy", "angular", "scaling", "sup_reparam"])
        for t, m in momenta_rows:
            writer.writerow(
                [
                    _round_sig(t),
                    _round_sig(m["energy"]),
                    _round_sig(m["angular"]),
                    _round_sig(m["scaling"]),
                    _round_sig(float(np.max(np.abs(m["reparam_field"])))),
                ]
            )


@dataclass
class RunConfig:
    """Knobs shared by the command-line tools; serialized with every result."""

    n: int = 256
    n_segments: int = 128
    n_offsets: int = 128
    n_rot: int = 64
    frames: int = 9
    eps_speed: float | None = None
    eps_zero: float | None = None
    seed: int = 0

    @classmethod
    def load(cls, path) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)
