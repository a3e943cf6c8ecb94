"""Persistent verified catalog of certificates.

A catalog is a directory tree with one JSON payload per entry and an
``index.json`` summarizing kinds, counts, Unknown verdicts and defects.
Every payload is written atomically (temp file + rename) and recorded
with its SHA-256 digest; loading re-checks digests and re-runs the full
verifier for each certificate, so a loaded catalog is trusted end to
end or not at all.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ZsmagicError
from .groups import GroupSpec, all_groups_up_to, is_in_script_g
from .kotzig import KotzigArraySet, kas, two_group_class_size, verify_kas
from .mappings import (
    CmPartitionCertificate,
    cm_two_group,
    verify_cm_certificate,
)
from .rectangles import (
    RectangleSet,
    Verdict,
    decide_existence,
    mrs_construct,
    verify_mrs,
)
from .search import DEFAULT_BUDGET
from .serialize import dumps, loads

CATALOG_ROOT_ENV = "ZSMAGIC_CATALOG_ROOT"
MAX_CATALOG_ORDER = 64
ALL_KINDS = ("cm_partition", "kas", "mrs", "verdict")


class CatalogError(ZsmagicError):
    """Missing, corrupted or non-verifying catalog content."""


@dataclass(frozen=True)
class CatalogEntry:
    kind: str
    group: str
    parameters: dict
    path: str
    digest: str
    provenance: tuple[str, ...]

    def as_document(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group,
            "parameters": self.parameters,
            "path": self.path,
            "digest": self.digest,
            "provenance": list(self.provenance),
        }

    @staticmethod
    def from_document(doc: dict) -> "CatalogEntry":
        return CatalogEntry(
            doc["kind"],
            doc["group"],
            dict(doc["parameters"]),
            doc["path"],
            doc["digest"],
            tuple(doc["provenance"]),
        )


def catalog_root(explicit: str | None = None) -> Path:
    """Catalog directory: explicit argument, else the environment
    variable, else ./zsmagic-catalog."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(CATALOG_ROOT_ENV)
    return Path(env) if env else Path("zsmagic-catalog")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _entry_name(group: GroupSpec, parameters: dict) -> str:
    parts = [group.render().replace("x", "_")]
    parts += [f"{k}{v}" for k, v in sorted(parameters.items())]
    return "-".join(parts) + ".json"


def _persist(
    root: Path,
    kind: str,
    group: GroupSpec,
    parameters: dict,
    obj,
    provenance: tuple[str, ...],
) -> CatalogEntry:
    rel = f"{kind}/{_entry_name(group, parameters)}"
    text = dumps(obj)
    _atomic_write(root / rel, text)
    return CatalogEntry(
        kind, group.render(), parameters, rel, _digest(text), provenance
    )


def _mrs_grid(order: int):
    """All shapes (a, b, c) with a*b*c = order and a, b >= 2."""
    for a in range(2, order + 1):
        if order % a:
            continue
        for b in range(2, order // a + 1):
            if (order // a) % b:
                continue
            yield a, b, order // (a * b)


def build_catalog(
    root: Path | str | None = None,
    max_order: int = 16,
    kinds: tuple[str, ...] = ALL_KINDS,
    budget: int = DEFAULT_BUDGET,
) -> dict:
    """Construct, verify and persist the full grid up to max_order.

    Grid per kind: cm_partition for every 2-group with more than one
    involution; kas for every eligible group at all admissible (j, m)
    with j in {2, 3}; mrs/verdict for every group and every shape
    (a, b, c) with a, b >= 2 -- Exists shapes are constructed and stored
    as certificates, other verdicts are stored as such.  Returns the
    index document; combinations that fail are listed under defects.
    """
    if max_order > MAX_CATALOG_ORDER:
        raise CatalogError(
            f"max_order {max_order} exceeds the bound {MAX_CATALOG_ORDER}"
        )
    unknown_kinds = set(kinds) - set(ALL_KINDS)
    if unknown_kinds:
        raise CatalogError(f"unknown kinds: {sorted(unknown_kinds)}")
    root = catalog_root(None if root is None else str(root))
    entries: list[CatalogEntry] = []
    defects: list[dict] = []
    unknowns: list[dict] = []

    def attempt(kind: str, group: GroupSpec, parameters: dict, make):
        try:
            obj, provenance = make()
            entries.append(
                _persist(root, kind, group, parameters, obj, provenance)
            )
        except ZsmagicError as exc:
            defects.append(
                {
                    "kind": kind,
                    "group": group.render(),
                    "parameters": parameters,
                    "error": str(exc),
                }
            )

    for g in all_groups_up_to(max_order, min_order=2):
        eligible = is_in_script_g(g)
        if "cm_partition" in kinds and eligible and g.is_two_group:
            attempt(
                "cm_partition",
                g,
                {},
                lambda g=g: (cm_two_group(g, budget), ("cm-two-group",)),
            )
        if "kas" in kinds and eligible:
            sizes = [
                m
                for m in range(3, g.order + 1)
                if g.order % m == 0
            ]
            for m in sizes:
                attempt(
                    "kas",
                    g,
                    {"j": 2, "m": m},
                    lambda g=g, m=m: (kas(g, 2, m, budget), ("kas:j=2",)),
                )
            if g.is_two_group:
                m = two_group_class_size(g)
                attempt(
                    "kas",
                    g,
                    {"j": 3, "m": m},
                    lambda g=g, m=m: (kas(g, 3, m, budget), ("kas:j=3",)),
                )
        if "mrs" in kinds or "verdict" in kinds:
            for a, b, c in _mrs_grid(g.order):
                verdict = decide_existence(g, a, b, c)
                params = {"a": a, "b": b, "c": c}
                if verdict.status == "Exists" and "mrs" in kinds:
                    attempt(
                        "mrs",
                        g,
                        params,
                        lambda g=g, a=a, b=b, c=c: (
                            (r := mrs_construct(g, a, b, c, budget)),
                            r.provenance,
                        ),
                    )
                elif verdict.status != "Exists" and "verdict" in kinds:
                    if verdict.status == "Unknown":
                        unknowns.append(
                            {"group": g.render(), "parameters": params}
                        )
                    attempt(
                        "verdict",
                        g,
                        params,
                        lambda v=verdict: (v, (v.rule,)),
                    )

    counts: dict[str, int] = {}
    for e in entries:
        counts[e.kind] = counts.get(e.kind, 0) + 1
    index = {
        "max_order": max_order,
        "kinds": sorted(set(kinds)),
        "counts": counts,
        "unknown_verdicts": unknowns,
        "defects": defects,
        "entries": [e.as_document() for e in entries],
    }
    _atomic_write(
        root / "index.json",
        json.dumps(index, sort_keys=True, separators=(",", ":")) + "\n",
    )
    return index


def _reverify(entry: CatalogEntry, obj) -> None:
    if entry.kind == "cm_partition":
        if not isinstance(obj, CmPartitionCertificate) or not (
            verify_cm_certificate(obj)
        ):
            raise CatalogError(f"{entry.path}: certificate fails verification")
    elif entry.kind == "kas":
        if not isinstance(obj, KotzigArraySet) or not verify_kas(obj):
            raise CatalogError(f"{entry.path}: array set fails verification")
    elif entry.kind == "mrs":
        if not isinstance(obj, RectangleSet) or not verify_mrs(obj):
            raise CatalogError(f"{entry.path}: rectangle set fails verification")
    elif entry.kind == "verdict":
        if not isinstance(obj, Verdict):
            raise CatalogError(f"{entry.path}: not a verdict")
        from .groups import parse_group_spec

        p = entry.parameters
        fresh = decide_existence(
            parse_group_spec(entry.group), p["a"], p["b"], p["c"]
        )
        if (fresh.status, fresh.rule) != (obj.status, obj.rule):
            raise CatalogError(
                f"{entry.path}: stored verdict {obj.status}/{obj.rule} "
                f"disagrees with {fresh.status}/{fresh.rule}"
            )
    else:
        raise CatalogError(f"{entry.path}: unknown kind {entry.kind!r}")


def load_catalog(root: Path | str | None = None) -> list[tuple[CatalogEntry, object]]:
    """Load and fully re-verify a catalog.

    Raises CatalogError on a missing index, a digest mismatch, or any
    entry whose payload no longer verifies.
    """
    root = catalog_root(None if root is None else str(root))
    index_path = root / "index.json"
    if not index_path.is_file():
        raise CatalogError(f"no catalog index at {index_path}")
    index = json.loads(index_path.read_text(encoding="utf-8"))
    out = []
    for doc in index["entries"]:
        entry = CatalogEntry.from_document(doc)
        payload_path = root / entry.path
        if not payload_path.is_file():
            raise CatalogError(f"missing payload {entry.path}")
        text = payload_path.read_text(encoding="utf-8")
        if _digest(text) != entry.digest:
            raise CatalogError(f"digest mismatch for {entry.path}")
        obj = loads(text)
        _reverify(entry, obj)
        out.append((entry, obj))
    return out
