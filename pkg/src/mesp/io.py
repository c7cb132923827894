"""JSON documents: instances, selections, solutions, decisions.

All rationals travel as strings ``"a"`` or ``"a/b"`` (never JSON floats), and
every document is written as a single canonical line: fixed key order, no
insignificant whitespace, rationals in lowest terms.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import ParseError, ValidationError
from .hardness import GeneratedDecision
from .model import (BinaryInstance, Selection, SubsetInstance, TailDistribution,
                    ValueGrid)

INSTANCE_FORMAT = "mesp-instance-v1"
SOLUTION_FORMAT = "mesp-solution-v1"
SELECTION_FORMAT = "mesp-selection-v1"
DECISION_FORMAT = "mesp-decision-v1"
TRIALS_FORMAT = "mesp-trials-v1"

_RATIONAL = re.compile(r"-?[0-9]+(/[0-9]+)?\Z")


def format_rational(x) -> str:
    return str(Fraction(x))


def parse_rational(s, locus=None) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.match(s):
        raise ParseError(f"expected a rational string 'a' or 'a/b', got {s!r}", locus)
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {s!r}", locus) from None


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=True) + "\n"


def _loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") \
            from None


# instances ----------------------------------------------------------------

def instance_to_obj(instance) -> dict:
    tails = lambda dist: [format_rational(q) for q in dist.tails]  # noqa: E731
    obj = {"format": INSTANCE_FORMAT, "kind": instance.kind,
           "values": [format_rational(v) for v in instance.grid.values]}
    if isinstance(instance, BinaryInstance):
        obj["pairs"] = [[tails(a), tails(b)] for a, b in instance.pairs]
    else:
        obj["k"] = instance.k
        obj["items"] = [tails(x) for x in instance.items]
    return obj


def serialize_instance(instance) -> str:
    return dumps(instance_to_obj(instance))


def _field(obj, name, locus=""):
    if not isinstance(obj, dict) or name not in obj:
        raise ParseError(f"missing field {name!r}", locus or None)
    return obj[name]


def _dist(raw, d, locus):
    if not isinstance(raw, list):
        raise ParseError("expected a list of tail probabilities", locus)
    qs = [parse_rational(q, f"{locus}[{j}]") for j, q in enumerate(raw)]
    if len(qs) != d - 1:
        raise ParseError(f"expected {d - 1} tails, got {len(qs)}", locus, "WRONG_LENGTH")
    try:
        return TailDistribution(tuple(qs))
    except ValidationError as exc:
        raise ParseError(exc.args[0], locus, exc.code) from None


def instance_from_obj(obj):
    if _field(obj, "format") != INSTANCE_FORMAT:
        raise ParseError(f"unknown format {obj['format']!r}", "format")
    kind = _field(obj, "kind")
    raw_values = _field(obj, "values")
    if not isinstance(raw_values, list):
        raise ParseError("expected a list", "values")
    values = [parse_rational(v, f"values[{j}]") for j, v in enumerate(raw_values)]
    try:
        grid = ValueGrid(tuple(values))
    except ValidationError as exc:
        raise ParseError(exc.args[0], "values", exc.code) from None
    d = grid.d
    try:
        if kind == "binary":
            raw = _field(obj, "pairs")
            if not isinstance(raw, list):
                raise ParseError("expected a list of pairs", "pairs")
            pairs = []
            for i, pair in enumerate(raw):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ParseError("expected a pair of distributions", f"pairs[{i}]")
                pairs.append(tuple(_dist(x, d, f"pairs[{i}][{s}]") for s, x in enumerate(pair)))
            return BinaryInstance(grid, tuple(pairs))
        if kind == "subset":
            raw = _field(obj, "items")
            if not isinstance(raw, list):
                raise ParseError("expected a list of distributions", "items")
            k = _field(obj, "k")
            if isinstance(k, bool) or not isinstance(k, int):
                raise ParseError(f"expected an integer, got {k!r}", "k")
            items = tuple(_dist(x, d, f"items[{i}]") for i, x in enumerate(raw))
            return SubsetInstance(grid, items, k)
    except ParseError:
        raise
    except ValidationError as exc:
        raise ParseError(exc.args[0], None, exc.code) from None
    raise ParseError(f"kind must be 'binary' or 'subset', got {kind!r}", "kind")


def parse_instance(text: str):
    return instance_from_obj(_loads(text))


# selections and solutions -------------------------------------------------

def selection_to_obj(sel: Selection) -> dict:
    return {"bits": list(sel.bits)} if sel.is_binary else {"chosen": list(sel.chosen)}


def parse_selection(text: str) -> Selection:
    """Read the selection of a solution or selection document."""
    obj = _loads(text)
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    sel = obj.get("selection", obj)
    try:
        if isinstance(sel, dict) and "bits" in sel:
            return Selection.binary(sel["bits"])
        if isinstance(sel, dict) and "chosen" in sel:
            return Selection.subset(sel["chosen"])
    except (ValidationError, TypeError) as exc:
        raise ParseError(str(exc), "selection") from None
    raise ParseError("no 'bits' or 'chosen' selection found", "selection")


def serialize_selection(sel: Selection) -> str:
    return dumps({"format": SELECTION_FORMAT, **selection_to_obj(sel)})


def solution_to_obj(kind, algorithm, objective, selection, value, **extra) -> dict:
    obj = {"format": SOLUTION_FORMAT, "kind": kind, "algorithm": algorithm,
           "objective": objective, "selection": selection_to_obj(selection),
           "value": format_rational(value)}
    for key, val in extra.items():
        obj[key] = format_rational(val) if isinstance(val, Fraction) else val
    return obj


# decisions ------------------------------------------------------------------

def _plain(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def decision_to_obj(decision, reduction: str) -> dict:
    obj = {"format": DECISION_FORMAT, "reduction": reduction,
           "instance": instance_to_obj(decision.instance)}
    for name in ("theta", "upper_bound", "lower_bound"):
        val = getattr(decision, name)
        if val is not None:
            obj[name] = format_rational(val)
    obj["params"] = _plain(decision.params)
    if decision.certificate is not None:
        obj["certificate"] = _plain(decision.certificate)
    return obj


def serialize_decision(decision, reduction: str) -> str:
    return dumps(decision_to_obj(decision, reduction))


def _revive(v):
    if isinstance(v, str) and _RATIONAL.match(v):
        return Fraction(v)
    if isinstance(v, list):
        return tuple(_revive(x) for x in v)
    if isinstance(v, dict):
        return {k: _revive(x) for k, x in v.items()}
    return v


def parse_decision(text: str):
    """Inverse of :func:`serialize_decision` (returns ``(decision, reduction)``)."""
    obj = _loads(text)
    if not isinstance(obj, dict) or obj.get("format") != DECISION_FORMAT:
        raise ParseError("not a decision document", "format")
    bounds = {name: parse_rational(obj[name], name)
              for name in ("theta", "upper_bound", "lower_bound") if name in obj}
    decision = GeneratedDecision(instance_from_obj(_field(obj, "instance")),
                                 _revive(_field(obj, "params")),
                                 certificate=_revive(obj.get("certificate")), **bounds)
    return decision, obj.get("reduction")
