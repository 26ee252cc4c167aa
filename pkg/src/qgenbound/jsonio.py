"""JSON encodings of matrices and learning instances.

A matrix is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in row-major
order, optionally with ``"space": [{"label": .., "dim": ..}, ...]``.  Nested
lists of rows are also accepted, with entries either numbers or ``[re, im]``.
Every parse error names the JSON path of the offending field.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .divergences import ClassicalDist
from .errors import ConfigurationError
from .framework import LearningInstance, pair_key, sample_key
from .subgaussian import SubGaussianCert

INSTANCE_FIELDS = ("sample_space", "prior", "n", "mode", "spaces", "data_states", "povms",
                   "channels", "losses", "mu", "tau", "hypotheses")
REQUIRED_FIELDS = ("sample_space", "prior", "n", "mode", "spaces", "data_states", "povms", "losses")


def _fail(path: str, msg: str):
    raise ConfigurationError(f"{path}: {msg}")


def _number(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(path, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        _fail(path, "non-finite number")
    return float(x)


def _entry(x, path: str) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            _fail(path, f"complex entries are [re, im], got {len(x)} values")
        return complex(_number(x[0], f"{path}[0]"), _number(x[1], f"{path}[1]"))
    return complex(_number(x, path))


def parse_matrix(obj, path: str = "$") -> np.ndarray:
    """Decode one matrix; raises :class:`ConfigurationError` naming ``path``."""
    if isinstance(obj, dict):
        for k in ("rows", "cols", "data"):
            if k not in obj:
                _fail(path, f"missing field {k!r}")
        rows, cols = obj["rows"], obj["cols"]
        if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
            _fail(path, "rows and cols must be positive integers")
        data = obj["data"]
        if not isinstance(data, list) or len(data) != rows * cols:
            _fail(f"{path}.data", f"expected {rows * cols} entries, got "
                  f"{len(data) if isinstance(data, list) else type(data).__name__}")
        m = np.array([_entry(x, f"{path}.data[{i}]") for i, x in enumerate(data)], dtype=complex)
        m = m.reshape(rows, cols)
        if "space" in obj:
            dims = 1
            for i, f in enumerate(obj["space"]):
                if not isinstance(f, dict) or "dim" not in f or "label" not in f:
                    _fail(f"{path}.space[{i}]", "factors are {\"label\", \"dim\"} objects")
                dims *= int(f["dim"])
            if dims != rows:
                _fail(f"{path}.space", f"factor dimensions multiply to {dims}, matrix has {rows} rows")
        return m
    if isinstance(obj, list) and obj and all(isinstance(r, list) for r in obj):
        width = len(obj[0])
        out = []
        for i, r in enumerate(obj):
            if len(r) != width:
                _fail(f"{path}[{i}]", f"row length {len(r)} differs from {width}")
            out.append([_entry(x, f"{path}[{i}][{k}]") for k, x in enumerate(r)])
        return np.array(out, dtype=complex)
    _fail(path, "expected a matrix object {rows, cols, data} or a list of rows")


def matrix_to_json(m, space=None) -> dict:
    m = np.asarray(m, dtype=complex)
    out = {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
           "data": [[float(x.real), float(x.imag)] for x in m.ravel()]}
    if space is not None:
        out["space"] = [{"label": str(l), "dim": int(d)} for l, d in space]
    return out


def load_json(source) -> object:
    """Read JSON from a path or an inline string; parse errors report line and column."""
    text = source
    where = "<inline>"
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith(("{", "["))):
        p = Path(source)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"cannot read {p}: {e.strerror or e}") from None
        where = str(p)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{where}: malformed JSON at line {e.lineno}, column {e.colno}: "
                                 f"{e.msg}") from None


def _obj(x, path):
    if not isinstance(x, dict):
        _fail(path, f"expected an object, got {type(x).__name__}")
    return x


def parse_instance(obj) -> LearningInstance:
    obj = _obj(obj, "$")
    unknown = sorted(set(obj) - set(INSTANCE_FIELDS))
    if unknown:
        _fail("$", f"unknown fields {unknown}")
    for k in REQUIRED_FIELDS:
        if k not in obj:
            _fail("$", f"missing field {k!r}")
    zs = obj["sample_space"]
    if not isinstance(zs, list) or not zs:
        _fail("$.sample_space", "expected a nonempty list of labels")
    zs = [str(z) for z in zs]
    prior = obj["prior"]
    if isinstance(prior, dict):
        prior = [_number(prior.get(z, 0.0), f"$.prior.{z}") for z in zs]
    elif isinstance(prior, list):
        if len(prior) != len(zs):
            _fail("$.prior", f"{len(prior)} probabilities for {len(zs)} labels")
        prior = [_number(x, f"$.prior[{i}]") for i, x in enumerate(prior)]
    else:
        _fail("$.prior", "expected a list or an object")
    try:
        prior = ClassicalDist(tuple(zs), np.array(prior))
    except ValueError as e:
        _fail("$.prior", str(e))
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        _fail("$.n", "expected an integer")
    spaces = _obj(obj["spaces"], "$.spaces")
    dims = []
    for k in ("te", "tr", "hyp"):
        if k not in spaces:
            _fail("$.spaces", f"missing dimension {k!r}")
        d = spaces[k]
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            _fail(f"$.spaces.{k}", "expected a positive integer")
        dims.append(d)
    states = {str(k): parse_matrix(v, f"$.data_states.{k}")
              for k, v in _obj(obj["data_states"], "$.data_states").items()}
    povms = {}
    for k, v in _obj(obj["povms"], "$.povms").items():
        povms[str(k)] = {str(w): parse_matrix(e, f"$.povms.{k}.{w}")
                         for w, e in _obj(v, f"$.povms.{k}").items()}
    channels = {}
    for k, v in _obj(obj.get("channels", {}), "$.channels").items():
        if not isinstance(v, list) or not v:
            _fail(f"$.channels.{k}", "expected a nonempty list of Kraus matrices")
        channels[str(k)] = [parse_matrix(m, f"$.channels.{k}[{i}]") for i, m in enumerate(v)]
    losses = {str(k): parse_matrix(v, f"$.losses.{k}")
              for k, v in _obj(obj["losses"], "$.losses").items()}
    cert = None
    if "mu" in obj or "tau" in obj:
        if "mu" not in obj or "tau" not in obj:
            _fail("$", "mu and tau must be given together")
        cert = SubGaussianCert(_number(obj["mu"], "$.mu"), _number(obj["tau"], "$.tau"))
    hyps = obj.get("hypotheses", [])
    if not isinstance(hyps, list):
        _fail("$.hypotheses", "expected a list")
    return LearningInstance(tuple(zs), prior, n, obj["mode"], tuple(dims), states, povms, channels,
                            losses, cert, tuple(str(h) for h in hyps))


def load_instance(source) -> LearningInstance:
    return parse_instance(load_json(source))


def instance_to_json(inst: LearningInstance) -> dict:
    local = inst.mode == "iid_local"
    states = {(z if local else sample_key(z)): matrix_to_json(m) for z, m in inst.data_states.items()}
    povms = {sample_key(s): {w: matrix_to_json(e) for w, e in p.items()} for s, p in inst.povms.items()}
    channels = {pair_key(w, z): [matrix_to_json(k) for k in ks] for (w, z), ks in inst.channels.items()}
    losses = {pair_key(w, z): matrix_to_json(m) for (w, z), m in inst.losses.items()}
    out = {
        "sample_space": list(inst.sample_space),
        "prior": [float(x) for x in inst.prior.probs],
        "n": inst.n,
        "mode": inst.mode,
        "spaces": dict(zip(("te", "tr", "hyp"), inst.dims)),
        "data_states": states,
        "povms": povms,
        "channels": channels,
        "losses": losses,
        "hypotheses": list(inst.hypotheses),
    }
    if inst.cert is not None:
        out["mu"], out["tau"] = inst.cert.mu, inst.cert.tau
    return out


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, infinities as strings."""
    def fix(x):
        if isinstance(x, dict):
            return {str(k): fix(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [fix(v) for v in x]
        if isinstance(x, (np.floating, float)):
            x = float(x)
            if math.isinf(x):
                return "+inf" if x > 0 else "-inf"
            if math.isnan(x):
                return "nan"
            return x
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.bool_):
            return bool(x)
        if isinstance(x, np.ndarray):
            return fix(x.tolist())
        return x
    return json.dumps(fix(obj), sort_keys=True, indent=2)
