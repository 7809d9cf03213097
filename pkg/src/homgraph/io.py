"""JSON file formats for graphs, patterns, graphons, datasets and models.

Vertex indices in files are 1-based; in memory they are 0-based.

Graph::

    {"n": 3, "weights": [[...], [...], [...]], "labels": [1, 3]}

Pattern::

    {"m": 3, "edges": [[1, 2], [2, 3]], "k": 1}

Graphon::

    {"q": 2, "B": [[...], [...]], "mu": [0.5, 0.5]}

Dataset: a JSON array of graph objects, each with a ``"y"`` field holding a
number (invariant task) or ``{"tuples": [[...]], "values": [...]}``
(equivariant task).

Model::

    {"task": "invariant", "k": 0, "shift": 2.0,
     "normalization": {"kind": "none", "mean": [...], "scale": [...]},
     "patterns": [...], "coefficients": [...], "intercept": 0.0}
"""

import json
import math
import numbers

from homgraph.exceptions import FormatError
from homgraph.graph import LabeledGraph, WeightedGraph
from homgraph.graphon import StepGraphon
from homgraph.model import Dataset, HomModel
from homgraph.patterns import LabeledPattern, Pattern, canonical_hex


def load_json(path):
    """Parse a JSON file, turning syntax errors into :class:`FormatError`."""
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                          field=str(path)) from None
    except OSError as exc:
        raise FormatError(str(exc), field=str(path)) from None


def dump_json(obj, path=None):
    text = json.dumps(obj, indent=1)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def _require(obj, key, where):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object", field=where)
    if key not in obj:
        raise FormatError("missing field", field=f"{where}.{key}")
    return obj[key]


def _int(value, field):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise FormatError(f"expected an integer, got {value!r}", field=field)
    return int(value)


def _real(value, field):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not math.isfinite(value):
        raise FormatError(f"expected a finite number, got {value!r}", field=field)
    return float(value)


def _matrix(rows, size, field):
    if not isinstance(rows, list) or len(rows) != size:
        raise FormatError(f"expected {size} rows", field=field)
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            raise FormatError(f"row {i + 1} must have {size} entries (matrix must be square)",
                              field=field)
        out.append([_real(v, f"{field}[{i + 1}]") for v in row])
    return out


def graph_from_json(obj, where="graph"):
    """Build a :class:`WeightedGraph`, or a :class:`LabeledGraph` when labels are present."""
    n = _int(_require(obj, "n", where), f"{where}.n")
    if n < 1:
        raise FormatError("must be positive", field=f"{where}.n")
    W = WeightedGraph(_matrix(_require(obj, "weights", where), n, f"{where}.weights"))
    if "labels" not in obj:
        return W
    raw = obj["labels"]
    if not isinstance(raw, list):
        raise FormatError("expected a list", field=f"{where}.labels")
    labels = [_int(x, f"{where}.labels") for x in raw]
    for x in labels:
        if not 1 <= x <= n:
            raise FormatError(f"label {x} outside 1..{n}", field=f"{where}.labels")
    if len(set(labels)) != len(labels):
        raise FormatError(f"duplicate labels in {labels}", field=f"{where}.labels")
    return LabeledGraph(W, tuple(x - 1 for x in labels))


def graph_to_json(g):
    W = g.graph if isinstance(g, LabeledGraph) else g
    W = W if isinstance(W, WeightedGraph) else WeightedGraph(W)
    obj = {"n": W.n, "weights": W.weights.tolist()}
    if isinstance(g, LabeledGraph):
        obj["labels"] = [x + 1 for x in g.labels]
    return obj


def pattern_from_json(obj, where="pattern"):
    """Build a :class:`Pattern`, or a :class:`LabeledPattern` if ``k`` is given."""
    m = _int(_require(obj, "m", where), f"{where}.m")
    if m < 1:
        raise FormatError("must be positive", field=f"{where}.m")
    raw = obj.get("edges", [])
    if not isinstance(raw, list):
        raise FormatError("expected a list of [i, j] pairs", field=f"{where}.edges")
    edges = set()
    for e in raw:
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"edge {e!r} is not an [i, j] pair", field=f"{where}.edges")
        i, j = (_int(v, f"{where}.edges") for v in e)
        if not (1 <= i <= m and 1 <= j <= m):
            raise FormatError(f"edge [{i}, {j}] outside 1..{m}", field=f"{where}.edges")
        if i == j:
            raise FormatError(f"self-loop [{i}, {j}]", field=f"{where}.edges")
        if (i - 1, j - 1) in edges:
            raise FormatError(f"duplicate edge [{i}, {j}]", field=f"{where}.edges")
        edges.add((i - 1, j - 1))
    pattern = Pattern(m, edges)
    if "k" not in obj:
        return pattern
    k = _int(obj["k"], f"{where}.k")
    if not 0 <= k <= m:
        raise FormatError(f"k={k} outside 0..{m}", field=f"{where}.k")
    return LabeledPattern(pattern, k)


def pattern_to_json(p, canonical=True):
    pattern = p.pattern if isinstance(p, LabeledPattern) else p
    obj = {"m": pattern.m, "edges": [[i + 1, j + 1] for i, j in pattern.edge_list]}
    if isinstance(p, LabeledPattern):
        obj["k"] = p.k
    if canonical:
        obj["canonical"] = canonical_hex(p)
    return obj


def graphon_from_json(obj, where="graphon", signed=False):
    q = _int(_require(obj, "q", where), f"{where}.q")
    if q < 1:
        raise FormatError("must be positive", field=f"{where}.q")
    B = _matrix(_require(obj, "B", where), q, f"{where}.B")
    mu = None
    if obj.get("mu") is not None:
        if not isinstance(obj["mu"], list) or len(obj["mu"]) != q:
            raise FormatError(f"expected {q} block measures", field=f"{where}.mu")
        mu = [_real(v, f"{where}.mu") for v in obj["mu"]]
    try:
        return StepGraphon(B, mu, signed=signed)
    except ValueError as exc:
        raise FormatError(str(exc), field=where) from None


def graphon_to_json(w):
    return {"q": w.q, "B": w.B.tolist(), "mu": w.mu.tolist()}


def dataset_from_json(items):
    """Parse a dataset array. Raises ``ValueError`` (not FormatError) on mixed ``n``."""
    if not isinstance(items, list) or not items:
        raise FormatError("expected a non-empty JSON array", field="dataset")
    graphs, targets, kinds = [], [], set()
    k = None
    for idx, item in enumerate(items):
        where = f"dataset[{idx + 1}]"
        g = graph_from_json(item, where)
        if isinstance(g, LabeledGraph):
            raise FormatError("labels belong in y.tuples for datasets", field=f"{where}.labels")
        y = _require(item, "y", where)
        if isinstance(y, dict):
            kinds.add("equivariant")
            tuples = _require(y, "tuples", f"{where}.y")
            values = _require(y, "values", f"{where}.y")
            if not isinstance(tuples, list) or not isinstance(values, list) \
                    or len(tuples) != len(values):
                raise FormatError("tuples and values must be lists of equal length",
                                  field=f"{where}.y")
            target = {}
            for t, v in zip(tuples, values):
                if not isinstance(t, list):
                    raise FormatError(f"tuple {t!r} is not a list", field=f"{where}.y.tuples")
                xs = tuple(_int(x, f"{where}.y.tuples") for x in t)
                if k is None:
                    k = len(xs)
                if len(xs) != k:
                    raise FormatError(f"tuple {list(xs)} has arity {len(xs)}, expected {k}",
                                      field=f"{where}.y.tuples")
                if len(set(xs)) != len(xs) or any(not 1 <= x <= g.n for x in xs):
                    raise FormatError(f"tuple {list(xs)} must hold distinct indices in 1..{g.n}",
                                      field=f"{where}.y.tuples")
                target[tuple(x - 1 for x in xs)] = _real(v, f"{where}.y.values")
            targets.append(target)
        else:
            kinds.add("invariant")
            targets.append(_real(y, f"{where}.y"))
        graphs.append(g.weights)
    if len(kinds) > 1:
        raise FormatError("mixes invariant and equivariant targets", field="dataset")
    if "equivariant" in kinds and k is None:
        raise FormatError("equivariant dataset has no target tuples", field="dataset")
    return Dataset(graphs, targets, k if "equivariant" in kinds else None)


def dataset_to_json(d):
    out = []
    for W, t in zip(d.graphs, d.targets):
        obj = graph_to_json(WeightedGraph(W))
        if d.k is None:
            obj["y"] = t
        else:
            items = sorted(t.items())
            obj["y"] = {"tuples": [[x + 1 for x in xs] for xs, _ in items],
                        "values": [v for _, v in items]}
        out.append(obj)
    return out


def model_to_json(model):
    return {
        "task": "equivariant" if model.equivariant else "invariant",
        "k": model.k or 0,
        "shift": model.shift,
        "normalization": {
            "kind": model.normalization,
            "mean": list(model.feature_mean) if model.feature_mean is not None else None,
            "scale": list(model.feature_scale) if model.feature_scale is not None else None,
        },
        "patterns": [pattern_to_json(p) for p in model.patterns],
        "coefficients": list(model.coefficients),
        "intercept": model.intercept,
    }


def model_from_json(obj):
    where = "model"
    shift = _real(_require(obj, "shift", where), "model.shift")
    norm = obj.get("normalization") or {}
    if not isinstance(norm, dict):
        raise FormatError("expected an object", field="model.normalization")
    kind = norm.get("kind", "none")
    task = obj.get("task", "invariant")
    if task not in ("invariant", "equivariant"):
        raise FormatError(f"unknown task {task!r}", field="model.task")
    k = _int(obj.get("k", 0), "model.k") if task == "equivariant" else None
    raw_patterns = _require(obj, "patterns", where)
    if not isinstance(raw_patterns, list):
        raise FormatError("expected a list", field="model.patterns")
    patterns = []
    for i, po in enumerate(raw_patterns):
        p = pattern_from_json(po, f"model.patterns[{i + 1}]")
        if task == "equivariant" and not isinstance(p, LabeledPattern):
            p = LabeledPattern(p, 0)
        if task == "invariant" and isinstance(p, LabeledPattern):
            p = p.pattern
        patterns.append(p)
    coefs = _require(obj, "coefficients", where)
    if not isinstance(coefs, list):
        raise FormatError("expected a list", field="model.coefficients")
    coefs = [_real(a, "model.coefficients") for a in coefs]
    intercept = _real(obj.get("intercept", 0.0), "model.intercept")

    def opt(vals, field):
        if vals is None:
            return None
        return tuple(_real(v, field) for v in vals)

    try:
        return HomModel(patterns, coefs, intercept, shift, kind,
                        opt(norm.get("mean"), "model.normalization.mean"),
                        opt(norm.get("scale"), "model.normalization.scale"), k)
    except ValueError as exc:
        raise FormatError(str(exc), field=where) from None
