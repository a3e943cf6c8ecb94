"""Canonical JSON for every certificate kind.

Documents use sorted keys, compact separators, explicit residue vectors
and a trailing newline, so serialize -> deserialize -> serialize is
byte-identical.  The kind of a document is recognized from its fields:
``phi`` (complete-mapping certificate), ``arrays`` (Kotzig array set),
``entries`` (integer Kotzig array), ``rects`` (magic rectangle set),
``classes`` (zero-sum partition) or ``status`` (verdict).
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ZsmagicError
from .groups import GroupSpec, parse_group_spec
from .kotzig import IntKotzigArray, KotzigArraySet
from .mappings import CmPartitionCertificate, CompleteMapping
from .rectangles import RectangleSet, Verdict
from .zerosum import ZeroSumPartition


class SerializationError(ZsmagicError):
    """Unrecognized or malformed certificate document."""


def _elem(x) -> list[int]:
    return list(x)


def to_document(obj) -> dict:
    """Plain-dict form of a certificate, ready for JSON encoding."""
    if isinstance(obj, ZeroSumPartition):
        return {
            "group": obj.group.render(),
            "m": obj.m,
            "classes": [[_elem(x) for x in cls] for cls in obj.classes],
        }
    if isinstance(obj, CmPartitionCertificate):
        return {
            "group": obj.group.render(),
            "m": obj.m,
            "phi": list(obj.mapping.table),
            "classes": [
                [_elem(x) for x in cls] for cls in obj.partition.classes
            ],
        }
    if isinstance(obj, KotzigArraySet):
        return {
            "group": obj.group.render(),
            "j": obj.j,
            "m": obj.m,
            "arrays": [
                [[_elem(x) for x in row] for row in arr] for arr in obj.arrays
            ],
        }
    if isinstance(obj, IntKotzigArray):
        return {
            "j": obj.j,
            "k": obj.k,
            "centered": obj.centered,
            "entries": [list(row) for row in obj.entries],
        }
    if isinstance(obj, RectangleSet):
        return {
            "group": obj.group.render(),
            "a": obj.a,
            "b": obj.b,
            "c": obj.c,
            "omega": _elem(obj.omega),
            "delta": _elem(obj.delta),
            "rects": [
                [[_elem(x) for x in row] for row in rect]
                for rect in obj.rects
            ],
            "provenance": list(obj.provenance),
        }
    if isinstance(obj, Verdict):
        return {"status": obj.status, "rule": obj.rule}
    raise SerializationError(f"cannot serialize {type(obj).__name__}")


def _tuple_elem(v) -> tuple[int, ...]:
    return tuple(int(r) for r in v)


def from_document(doc: dict):
    """Typed certificate from a plain dict, dispatched on its fields."""
    if not isinstance(doc, dict):
        raise SerializationError("document is not a JSON object")
    try:
        if "phi" in doc:
            g = parse_group_spec(doc["group"])
            partition = ZeroSumPartition(
                g,
                int(doc["m"]),
                tuple(
                    tuple(_tuple_elem(x) for x in cls)
                    for cls in doc["classes"]
                ),
            )
            mapping = CompleteMapping(g, tuple(int(i) for i in doc["phi"]))
            return CmPartitionCertificate(mapping, partition)
        if "arrays" in doc:
            g = parse_group_spec(doc["group"])
            return KotzigArraySet(
                g,
                int(doc["j"]),
                int(doc["m"]),
                tuple(
                    tuple(tuple(_tuple_elem(x) for x in row) for row in arr)
                    for arr in doc["arrays"]
                ),
            )
        if "entries" in doc:
            return IntKotzigArray(
                int(doc["j"]),
                int(doc["k"]),
                bool(doc["centered"]),
                tuple(
                    tuple(int(v) for v in row) for row in doc["entries"]
                ),
            )
        if "rects" in doc:
            g = parse_group_spec(doc["group"])
            return RectangleSet(
                g,
                int(doc["a"]),
                int(doc["b"]),
                int(doc["c"]),
                tuple(
                    tuple(tuple(_tuple_elem(x) for x in row) for row in rect)
                    for rect in doc["rects"]
                ),
                _tuple_elem(doc["omega"]),
                _tuple_elem(doc["delta"]),
                tuple(str(s) for s in doc["provenance"]),
            )
        if "classes" in doc:
            g = parse_group_spec(doc["group"])
            return ZeroSumPartition(
                g,
                int(doc["m"]),
                tuple(
                    tuple(_tuple_elem(x) for x in cls)
                    for cls in doc["classes"]
                ),
            )
        if "status" in doc:
            return Verdict(str(doc["status"]), str(doc["rule"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SerializationError(f"malformed document: {exc}") from exc
    raise SerializationError(
        f"unrecognized document with fields {sorted(doc)}"
    )


def kind_of(obj) -> str:
    """Catalog kind label for a certificate object."""
    if isinstance(obj, CmPartitionCertificate):
        return "cm_partition"
    if isinstance(obj, ZeroSumPartition):
        return "partition"
    if isinstance(obj, (KotzigArraySet, IntKotzigArray)):
        return "kas"
    if isinstance(obj, RectangleSet):
        return "mrs"
    if isinstance(obj, Verdict):
        return "verdict"
    raise SerializationError(f"no kind for {type(obj).__name__}")


def dumps(obj) -> str:
    return (
        json.dumps(to_document(obj), sort_keys=True, separators=(",", ":"))
        + "\n"
    )


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def load(path):
    return loads(Path(path).read_text(encoding="utf-8"))
