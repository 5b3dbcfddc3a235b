"""JSON documents for monotone functions, integrands and reports.

Numbers are read the way Python reads JSON: a decimal literal is a float,
and that float is taken at its exact binary value.  Strings of the form
``"p/q"`` give exact rationals.  On output, a value that is exactly a float
is written as a JSON number (shortest round-trip repr, at most 17
significant digits); anything else is written as a ``"p/q"`` string, so
documents always re-parse to the identical value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .integrand import PiecewiseFn
from .monotone import FlatLevels, MonotoneFn

__all__ = [
    "DocumentError",
    "dump_number",
    "flats_to_json",
    "load_document",
    "monotone_from_json",
    "monotone_to_json",
    "parse_number",
    "piecewise_from_json",
    "piecewise_to_json",
]


class DocumentError(ValueError):
    """Malformed input document; the message carries the field path."""


def parse_number(v, path: str = "") -> Fraction:
    if isinstance(v, bool) or v is None:
        raise DocumentError(f"{path}: expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        try:
            return Fraction(v)
        except (ValueError, OverflowError):
            raise DocumentError(f"{path}: non-finite number {v!r}") from None
    if isinstance(v, str):
        s = v.strip()
        try:
            return Fraction(s) if "/" in s else Fraction(float(s))
        except (ValueError, ZeroDivisionError, OverflowError):
            raise DocumentError(f"{path}: cannot read {v!r} as a number") from None
    raise DocumentError(f"{path}: expected a number, got {type(v).__name__}")


def dump_number(v: Fraction):
    v = Fraction(v)
    f = float(v)
    if Fraction(f) == v:
        return f
    return f"{v.numerator}/{v.denominator}"


def _field(obj, key, path):
    if not isinstance(obj, dict):
        raise DocumentError(f"{path or '<root>'}: expected an object")
    if key not in obj:
        raise DocumentError(f"{path + '.' if path else ''}{key}: missing")
    return obj[key]


def _list(obj, path):
    if not isinstance(obj, list):
        raise DocumentError(f"{path}: expected a list")
    return obj


def _pair(v, path):
    v = _list(v, path)
    if len(v) != 2:
        raise DocumentError(f"{path}: expected [lo, hi]")
    return parse_number(v[0], f"{path}[0]"), parse_number(v[1], f"{path}[1]")


def load_document(path) -> dict:
    """Read a JSON file, turning syntax errors into line-precise messages."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise DocumentError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


# -- monotone functions ---------------------------------------------------


def monotone_to_json(F: MonotoneFn) -> dict:
    return {
        "domain": [dump_number(F.lo), dump_number(F.hi)],
        "breakpoints": [
            {"x": dump_number(b.x), "left": dump_number(b.left),
             "value": dump_number(b.value), "right": dump_number(b.right)}
            for b in F.breakpoints
        ],
        "segments": [
            {"kind": s.kind, "slope": dump_number(s.slope), "anchor": dump_number(s.anchor)}
            for s in F.segments
        ],
    }


def monotone_from_json(obj) -> MonotoneFn:
    lo, hi = _pair(_field(obj, "domain", ""), "domain")
    bps = []
    for i, b in enumerate(_list(_field(obj, "breakpoints", ""), "breakpoints")):
        p = f"breakpoints[{i}]"
        bps.append(tuple(parse_number(_field(b, k, p), f"{p}.{k}")
                         for k in ("x", "left", "value", "right")))
    if not bps or bps[0][0] != lo or bps[-1][0] != hi:
        raise DocumentError("breakpoints: first and last x must equal the domain ends")
    try:
        if "segments" in obj:
            segs = []
            for i, s in enumerate(_list(obj["segments"], "segments")):
                p = f"segments[{i}]"
                kind = _field(s, "kind", p)
                segs.append((kind, parse_number(_field(s, "slope", p), f"{p}.slope"),
                             parse_number(_field(s, "anchor", p), f"{p}.anchor")))
            return MonotoneFn.from_segments(bps, segs)
        return MonotoneFn(bps)
    except DocumentError:
        raise
    except ValueError as e:
        raise DocumentError(str(e)) from None


# -- integrands -----------------------------------------------------------


def piecewise_to_json(f: PiecewiseFn) -> dict:
    return {
        "domain": [dump_number(f.lo), dump_number(f.hi)],
        "pieces": [
            {"interval": [dump_number(a), dump_number(b)],
             "coeffs": [dump_number(c) for c in p]}
            for a, b, p in zip(f.knots, f.knots[1:], f.polys)
        ],
        "point_values": {str(dump_number(k)): dump_number(v)
                         for k, v in zip(f.knots, f.point_values)},
    }


def piecewise_from_json(obj) -> PiecewiseFn:
    pieces = []
    for i, pc in enumerate(_list(_field(obj, "pieces", ""), "pieces")):
        p = f"pieces[{i}]"
        a, b = _pair(_field(pc, "interval", p), f"{p}.interval")
        coeffs = [parse_number(c, f"{p}.coeffs[{j}]")
                  for j, c in enumerate(_list(_field(pc, "coeffs", p), f"{p}.coeffs"))]
        pieces.append((a, b, coeffs))
    if not pieces:
        raise DocumentError("pieces: need at least one piece")
    raw = _field(obj, "point_values", "")
    pv = {}
    if isinstance(raw, dict):
        for k, v in raw.items():
            pv[parse_number(k, f"point_values[{k!r}] key")] = parse_number(v, f"point_values[{k!r}]")
    else:
        for i, item in enumerate(_list(raw, "point_values")):
            x, v = _pair(item, f"point_values[{i}]")
            pv[x] = v
    try:
        f = PiecewiseFn.from_pieces(pieces, pv)
    except ValueError as e:
        raise DocumentError(str(e)) from None
    if "domain" in obj and _pair(obj["domain"], "domain") != f.domain:
        raise DocumentError("domain: does not match the pieces")
    return f


def flats_to_json(H: FlatLevels) -> list[dict]:
    return [{"y": dump_number(lv.y), "x_left": dump_number(lv.x_left),
             "x_right": dump_number(lv.x_right)} for lv in H]
