"""JSON documents for automata, finite languages, uncontrollability maps and reports.

Every NCFD is stored in its ``g/u + ...`` text form.  Loaders report the
file and JSON path of the first offending field.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from bifuzzy.approx import FiniteLang
from bifuzzy.automaton import Bfdes
from bifuzzy.errors import ParseError, ValidationError
from bifuzzy.ncfd import NCFD, format_ncfd, parse_ncfd
from bifuzzy.relations import NcfdMatrix
from bifuzzy.supervisory import ControllabilityReport, UncontrollabilityMap


def _ncfd(value: Any, where: str) -> NCFD:
    if not isinstance(value, str):
        raise ParseError(f"expected an NCFD string, got {type(value).__name__}", where)
    try:
        return parse_ncfd(value)
    except ParseError as exc:
        raise ParseError(str(exc), where) from None
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}", exc.invariant) from None


def _vector(value: Any, where: str) -> tuple[NCFD, ...]:
    if not isinstance(value, list) or not value:
        raise ParseError("expected a non-empty array of NCFD strings", where)
    return tuple(_ncfd(v, f"{where}[{i}]") for i, v in enumerate(value))


def _object(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"expected a JSON object, got {type(value).__name__}", where)
    return value


def _load_json(source: str | Path | dict, label: str | None = None) -> tuple[Any, str]:
    if isinstance(source, dict):
        return source, label or "<document>"
    path = Path(source)
    where = label or str(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", where) from None
    try:
        return json.loads(text), where
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"{where}:{exc.lineno}:{exc.colno}") from None


# ---------------------------------------------------------------------------
# automata


def automaton_from_dict(doc: Any, where: str = "<automaton>") -> Bfdes:
    doc = _object(doc, where)
    for key in ("states", "x0", "events"):
        if key not in doc:
            raise ParseError(f"missing required field {key!r}", where)
    states = doc["states"]
    if not isinstance(states, list) or not states or not all(isinstance(s, str) for s in states):
        raise ParseError("expected a non-empty array of state names", f"{where}.states")
    x0 = _vector(doc["x0"], f"{where}.x0")
    xm = _vector(doc["xm"], f"{where}.xm") if "xm" in doc else None
    events = {}
    for name, rows in _object(doc["events"], f"{where}.events").items():
        w = f"{where}.events.{name}"
        if not isinstance(rows, list) or not rows:
            raise ParseError("expected an array of rows", w)
        events[name] = NcfdMatrix(tuple(_vector(r, f"{w}[{i}]") for i, r in enumerate(rows)))
    try:
        return Bfdes(tuple(states), events, x0, xm)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}", exc.invariant) from None


def automaton_to_dict(g: Bfdes) -> dict:
    return {
        "states": list(g.state_labels),
        "x0": [format_ncfd(v) for v in g.x0],
        "xm": [format_ncfd(v) for v in g.xm],
        "events": {name: [[format_ncfd(v) for v in row] for row in m.rows] for name, m in sorted(g.events.items())},
    }


def parse_automaton(source: str | Path | dict) -> Bfdes:
    doc, where = _load_json(source)
    return automaton_from_dict(doc, where)


# ---------------------------------------------------------------------------
# uncontrollability maps


def ucmap_from_dict(doc: Any, where: str = "<ucmap>") -> UncontrollabilityMap:
    doc = _object(doc, where)
    if not doc:
        raise ParseError("uncontrollability map is empty", where)
    return UncontrollabilityMap({k: _ncfd(v, f"{where}.{k}") for k, v in doc.items()})


def ucmap_to_dict(uc: UncontrollabilityMap) -> dict:
    return {k: format_ncfd(v) for k, v in sorted(uc.degrees.items())}


def parse_ucmap(source: str | Path | dict) -> UncontrollabilityMap:
    doc, where = _load_json(source)
    return ucmap_from_dict(doc, where)


# ---------------------------------------------------------------------------
# finite languages


def _key(s: tuple[str, ...]) -> str:
    return ".".join(s)


def finitelang_from_dict(doc: Any, where: str = "<language>") -> FiniteLang:
    doc = _object(doc, where)
    for key in ("horizon", "alphabet", "degrees"):
        if key not in doc:
            raise ParseError(f"missing required field {key!r}", where)
    h = doc["horizon"]
    if not isinstance(h, int) or isinstance(h, bool) or h < 0:
        raise ParseError("horizon must be a non-negative integer", f"{where}.horizon")
    alpha = doc["alphabet"]
    if not isinstance(alpha, list) or not alpha or not all(isinstance(a, str) and a and "." not in a for a in alpha):
        raise ParseError("alphabet must be a non-empty array of names without dots", f"{where}.alphabet")
    degrees = {}
    for k, v in _object(doc["degrees"], f"{where}.degrees").items():
        s = tuple(p for p in k.split(".")) if k else ()
        if any(not p for p in s):
            raise ParseError(f"malformed string key {k!r}", f"{where}.degrees")
        degrees[s] = _ncfd(v, f"{where}.degrees[{k!r}]")
    try:
        return FiniteLang(h, tuple(alpha), degrees)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}", exc.invariant) from None


def finitelang_to_dict(lang: FiniteLang) -> dict:
    return {
        "horizon": lang.horizon,
        "alphabet": list(lang.alphabet),
        "degrees": {_key(s): format_ncfd(d) for s, d in lang.degrees.items()},
    }


def parse_finitelang(source: str | Path | dict) -> FiniteLang:
    doc, where = _load_json(source)
    return finitelang_from_dict(doc, where)


# ---------------------------------------------------------------------------
# reports


def report_to_dict(rep: ControllabilityReport) -> dict:
    out: dict[str, Any] = {
        "verdict": rep.verdict,
        "pairs": [
            {
                "witness": _key(p.witness),
                "plant_state": [format_ncfd(v) for v in p.plant_state],
                "spec_state": [format_ncfd(v) for v in p.spec_state],
            }
            for p in rep.pairs
        ],
        "violations": [
            {
                "witness": _key(v.witness),
                "event": v.event,
                "plant_next": format_ncfd(v.plant_next),
                "spec_now": format_ncfd(v.spec_now),
                "uc": format_ncfd(v.uc),
                "lhs": format_ncfd(v.lhs),
                "rhs": format_ncfd(v.rhs),
            }
            for v in rep.violations
        ],
    }
    if rep.lm_closure is not None:
        out["lm_closure"] = {
            "holds": rep.lm_closure.holds,
            "mismatches": [
                {"witness": _key(m.witness), "spec_marked": format_ncfd(m.spec_marked), "expected": format_ncfd(m.expected)}
                for m in rep.lm_closure.mismatches
            ],
        }
        out["nonblocking_achievable"] = rep.nonblocking_achievable
    return out


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
