"""JSON instance files and machine-readable reports.

Instance schema::

    {"dim": int, "label": str?, "points": [{"x": [...], "duals": [[...], ...]}, ...]}

Floats are written with ``repr`` (shortest round-tripping form), so every
value parses back to the identical double.
"""

import json
import math

import numpy as np

from .errors import MintyError
from .operator_graph import OperatorGraph


class InstanceError(MintyError, ValueError):
    """An instance file is malformed or dimensionally inconsistent."""


def parse_instance(data):
    """Build an OperatorGraph from the decoded instance JSON."""
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    try:
        dim = int(data["dim"])
    except (KeyError, TypeError, ValueError):
        raise InstanceError("instance needs an integer 'dim'") from None
    if dim < 1:
        raise InstanceError("'dim' must be at least 1")
    points = data.get("points")
    if not isinstance(points, list):
        raise InstanceError("instance needs a 'points' list")
    entries = []
    for i, entry in enumerate(points):
        if not isinstance(entry, dict) or "x" not in entry:
            raise InstanceError(f"entry {i}: expected an object with 'x'")
        x = _number_list(entry["x"], f"entry {i}: x")
        if len(x) != dim:
            raise InstanceError(f"entry {i}: x has length {len(x)}, expected {dim}")
        duals = entry.get("duals", [])
        if not isinstance(duals, list):
            raise InstanceError(f"entry {i}: 'duals' must be a list")
        ds = []
        for a, d in enumerate(duals):
            d = _number_list(d, f"entry {i}: dual {a}")
            if len(d) != dim:
                raise InstanceError(
                    f"entry {i}: dual {a} has length {len(d)}, expected {dim}")
            ds.append(d)
        entries.append((x, ds))
    if not entries:
        return OperatorGraph([], dim=dim, label=data.get("label"))
    return OperatorGraph(entries, dim=dim, label=data.get("label"))


def _number_list(v, where):
    if not isinstance(v, list) or not all(
            isinstance(t, (int, float)) and not isinstance(t, bool) for t in v):
        raise InstanceError(f"{where} must be a list of numbers")
    if not all(math.isfinite(t) for t in v):
        raise InstanceError(f"{where} has non-finite entries")
    return [float(t) for t in v]


def load_instance(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from None
    return parse_instance(data)


def instance_to_dict(T):
    out = {"dim": T.dim}
    if T.label is not None:
        out["label"] = T.label
    out["points"] = [{"x": p.tolist(), "duals": ds.tolist()} for p, ds in T]
    return out


def jsonable(obj):
    """Convert numpy containers and scalars into plain JSON values.

    Non-finite floats become None.
    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def render_report(report):
    return json.dumps(jsonable(report), indent=2, allow_nan=False) + "\n"


def parse_report(text):
    return json.loads(text)


def violation_dict(v):
    if v is None:
        return None
    return {"x": v.x, "xstar": v.xstar, "y": v.y, "ystar": v.ystar,
            "value": v.value, "entries": list(v.entries),
            "dual_indices": list(v.dual_indices)}


def feasibility_dict(res):
    return {"status": res.status.value, "witness": res.witness,
            "weights": res.weights, "slack": res.slack,
            "certificate": None if res.certificate is None else
            [list(c) if isinstance(c, tuple) else c for c in res.certificate]}
