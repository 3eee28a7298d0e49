"""Immutable relational instances with an endogenous/exogenous partition.

An instance is a finite set of ground atoms ("facts"), each carrying a
stable tuple identifier (tid) and a provenance flag.  Endogenous facts are
the ones hypothetical deletion interventions may remove; exogenous facts
are shielded from intervention.  Instances are immutable after
construction and safe to share across threads or worker processes.

Two on-disk formats are supported and must round-trip to equal instances:

* one JSON document::

      {"schema": {"R": 2, "S": 1},
       "tuples": [{"tid": "t1", "pred": "R", "vals": ["c", "b"], "endo": true}, ...]}

* one CSV file per predicate with header ``tid,endo,c1..ck`` plus a JSON
  manifest ``{"schema": {...}, "relations": {"R": "R.csv", ...}}``.

Tids are mandatory in principle but auto-generated as ``<pred>_<ordinal>``
when an input omits them.  Duplicate value lists within a predicate are an
error rather than being silently deduplicated: degree computations count
tuples, so the caller must decide what a duplicate means.  Constants are
untyped atoms compared as strings.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import InstanceFormatError, UnknownTupleId

__all__ = ["Fact", "Instance", "load_instance", "load_instance_csv"]


@dataclass(frozen=True, order=True)
class Fact:
    """One ground atom: tid, predicate name, constant values, provenance."""

    tid: str
    pred: str
    vals: tuple[str, ...]
    endo: bool = True

    def __str__(self) -> str:
        mark = "" if self.endo else "*"
        return f"{self.tid}{mark}:{self.pred}({','.join(self.vals)})"


@dataclass(frozen=True)
class Instance:
    """A schema plus a set of facts, partitioned by provenance.

    ``facts`` is kept sorted by tid, which fixes the iteration order used
    by every enumeration in the package.
    """

    schema_items: tuple[tuple[str, int], ...]
    facts: tuple[Fact, ...]
    _by_tid: dict[str, Fact] = field(default_factory=dict, compare=False, repr=False)
    _by_pred: dict[str, tuple[Fact, ...]] = field(default_factory=dict, compare=False, repr=False)

    @staticmethod
    def build(schema: Mapping[str, int], facts: Iterable[Fact]) -> "Instance":
        """Validate invariants and construct an instance."""
        schema_items = tuple(sorted((str(p), int(a)) for p, a in schema.items()))
        for pred, arity in schema_items:
            if arity < 0:
                raise InstanceFormatError(f"negative arity for predicate {pred!r}")
        arities = dict(schema_items)
        if len(arities) != len(schema_items):
            raise InstanceFormatError("duplicate predicate in schema")
        ordered = tuple(sorted(facts, key=lambda f: f.tid))
        seen_tids: set[str] = set()
        seen_rows: set[tuple[str, tuple[str, ...]]] = set()
        for f in ordered:
            if f.pred not in arities:
                raise InstanceFormatError(f"fact {f.tid!r} uses undeclared predicate {f.pred!r}")
            if len(f.vals) != arities[f.pred]:
                raise InstanceFormatError(
                    f"fact {f.tid!r}: {f.pred} expects {arities[f.pred]} values, got {len(f.vals)}")
            if not all(isinstance(v, str) for v in f.vals):
                raise InstanceFormatError(f"fact {f.tid!r}: constants must be strings")
            if f.tid in seen_tids:
                raise InstanceFormatError(f"duplicate tid {f.tid!r}")
            seen_tids.add(f.tid)
            row = (f.pred, f.vals)
            if row in seen_rows:
                raise InstanceFormatError(
                    f"duplicate value list {f.vals!r} in predicate {f.pred!r}")
            seen_rows.add(row)
        inst = Instance(schema_items, ordered)
        object.__setattr__(inst, "_by_tid", {f.tid: f for f in ordered})
        by_pred: dict[str, list[Fact]] = {p: [] for p, _ in schema_items}
        for f in ordered:
            by_pred[f.pred].append(f)
        object.__setattr__(inst, "_by_pred", {p: tuple(fs) for p, fs in by_pred.items()})
        return inst

    # -- lookups -----------------------------------------------------------

    @property
    def schema(self) -> dict[str, int]:
        return dict(self.schema_items)

    def arity(self, pred: str) -> int:
        for p, a in self.schema_items:
            if p == pred:
                return a
        raise InstanceFormatError(f"unknown predicate {pred!r}")

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, tid: str) -> bool:
        return tid in self._by_tid

    def fact(self, tid: str) -> Fact:
        try:
            return self._by_tid[tid]
        except KeyError:
            raise UnknownTupleId(f"unknown tid {tid!r}") from None

    def relation(self, pred: str) -> tuple[Fact, ...]:
        """Facts of one predicate, in tid order."""
        return self._by_pred.get(pred, ())

    def tids(self) -> frozenset[str]:
        return frozenset(self._by_tid)

    def endogenous_part(self) -> frozenset[str]:
        return frozenset(f.tid for f in self.facts if f.endo)

    def exogenous_part(self) -> frozenset[str]:
        return frozenset(f.tid for f in self.facts if not f.endo)

    def domain(self) -> frozenset[str]:
        """Active domain: every constant occurring in some fact."""
        return frozenset(v for f in self.facts for v in f.vals)

    # -- derived instances -------------------------------------------------

    def restrict(self, keep: Iterable[str]) -> "Instance":
        """Subinstance with exactly the given tids; provenance preserved."""
        keep = set(keep)
        unknown = keep - set(self._by_tid)
        if unknown:
            raise UnknownTupleId(f"unknown tids {sorted(unknown)!r}")
        return Instance.build(self.schema, (f for f in self.facts if f.tid in keep))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": {p: a for p, a in self.schema_items},
            "tuples": [
                {"tid": f.tid, "pred": f.pred, "vals": list(f.vals), "endo": f.endo}
                for f in self.facts
            ],
        }


def _facts_from_records(records: Iterable[dict]) -> list[Fact]:
    counters: dict[str, int] = {}
    facts = []
    for rec in records:
        if not isinstance(rec, dict):
            raise InstanceFormatError(f"tuple record must be an object, got {rec!r}")
        pred = rec.get("pred")
        if not isinstance(pred, str):
            raise InstanceFormatError(f"tuple record missing predicate name: {rec!r}")
        vals = rec.get("vals")
        if not isinstance(vals, list):
            raise InstanceFormatError(f"tuple record missing value list: {rec!r}")
        tid = rec.get("tid")
        if tid is None:
            counters[pred] = counters.get(pred, 0) + 1
            tid = f"{pred}_{counters[pred]}"
        elif not isinstance(tid, str):
            raise InstanceFormatError(f"tid must be a string: {tid!r}")
        endo = rec.get("endo", True)
        if not isinstance(endo, bool):
            raise InstanceFormatError(f"endo flag must be boolean: {endo!r}")
        facts.append(Fact(tid=tid, pred=pred, vals=tuple(vals), endo=endo))
    return facts


def load_instance(source: str | Path | dict) -> Instance:
    """Load an instance from a JSON document (path or parsed dict)."""
    if isinstance(source, (str, Path)):
        try:
            doc = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InstanceFormatError(f"cannot read instance document: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, dict) or "schema" not in doc or "tuples" not in doc:
        raise InstanceFormatError("instance document needs 'schema' and 'tuples' keys")
    schema = doc["schema"]
    if not isinstance(schema, dict):
        raise InstanceFormatError("'schema' must map predicate names to arities")
    return Instance.build(schema, _facts_from_records(doc["tuples"]))


_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def load_instance_csv(manifest: str | Path) -> Instance:
    """Load an instance from per-relation CSV files listed in a manifest."""
    manifest = Path(manifest)
    try:
        doc = json.loads(manifest.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"cannot read manifest: {exc}") from exc
    if not isinstance(doc, dict) or "schema" not in doc or "relations" not in doc:
        raise InstanceFormatError("manifest needs 'schema' and 'relations' keys")
    schema = doc["schema"]
    records: list[dict] = []
    for pred, rel_path in sorted(doc["relations"].items()):
        if pred not in schema:
            raise InstanceFormatError(f"relation file for undeclared predicate {pred!r}")
        arity = int(schema[pred])
        path = manifest.parent / rel_path
        try:
            with open(path, newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as exc:
            raise InstanceFormatError(f"cannot read relation file {path}: {exc}") from exc
        if not rows:
            raise InstanceFormatError(f"{path}: missing header row")
        expected = ["tid", "endo"] + [f"c{i + 1}" for i in range(arity)]
        if rows[0] != expected:
            raise InstanceFormatError(f"{path}: header must be {','.join(expected)}")
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != len(expected):
                raise InstanceFormatError(f"{path}:{lineno}: expected {len(expected)} fields")
            tid, endo_text = row[0], row[1].strip().lower()
            if endo_text == "":
                endo = True
            elif endo_text in _TRUE:
                endo = True
            elif endo_text in _FALSE:
                endo = False
            else:
                raise InstanceFormatError(f"{path}:{lineno}: bad endo flag {row[1]!r}")
            records.append({
                "tid": tid if tid else None,
                "pred": pred,
                "vals": row[2:],
                "endo": endo,
            })
    return Instance.build(schema, _facts_from_records(records))
