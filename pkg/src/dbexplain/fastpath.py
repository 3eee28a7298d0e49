"""Polynomial-time repair core and chase-style minimal sufficient sets.

The repair core (tuples kept by every subset-repair) is computed without
enumerating repairs: for each atom position i of the conjunctive query,
collect the participating tuples R_i (those that extend to a full
satisfying combination pinned at position i); the core is the instance
minus the participating tuples of the endogenous atom positions.  The scan
costs O(|D|^k) and runs on the compiled kernel when available.

The exactness of this rewriting against the repair-intersection core is
guaranteed for self-join-free queries.  Under self-joins a tuple can
participate in satisfying combinations while participating in no
subset-minimal one; such a tuple is dropped here although every repair
keeps it, so the rewritten core can be a strict subset of the naive core
(see README, "known divergences").  The test suite pins both the agreeing
cases and a minimal diverging one.

From the core, a chase-style construction extends a seed tuple with
join-compatible companions drawn outside the core, one atom position at a
time, and minimizes the result.  For self-join-free queries every minimal
sufficient set carries exactly one tuple per endogenous atom position, so
the chase result is also minimum and yields the sufficiency degree
directly.  Predicates whose whole extension is exogenous are skipped when
minimizing: their tuples sit in every repair, never appear in sufficient
sets, and only serve as join partners.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import kernels
from .errors import (
    CallerMustUseOracle,
    ChaseDefect,
    ChaseSeedError,
    ExplanationInvalid,
    QueryNotSatisfied,
    UnknownTupleId,
    UnsupportedPartition,
    UnsupportedQuery,
)
from .explanations import ExplanationSet, is_sufficient
from .model import Fact, Instance
from .query import (
    BooleanCQ,
    Query,
    _shared_positions,
    evaluate,
    fact_matches_atom,
    join_compatible,
)
from .repairs import CoreResult, Repair

__all__ = [
    "ParticipatingSets", "MinMssResult", "participating_sets", "core_fast",
    "sufficient_set_from", "chase_mss", "min_mss_sjf",
]


@dataclass(frozen=True)
class ParticipatingSets:
    """Per atom position, the tuples occurring in some full satisfying
    combination pinned at that position."""

    per_atom: tuple[frozenset[str], ...]

    def union(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for s in self.per_atom:
            out |= s
        return out


@dataclass(frozen=True)
class MinMssResult:
    """A minimum-size minimal sufficient set plus the sufficiency degree.

    ``mss`` is None when the requested tuple participates in no satisfying
    combination (then sigma is 0).  ``sigma`` is None when the minimum
    sufficient set is empty (the exogenous part alone satisfies the query).
    """

    mss: Optional[ExplanationSet]
    sigma: Optional[Fraction]


def _require_cq(query: Query) -> BooleanCQ:
    if not isinstance(query, BooleanCQ):
        raise UnsupportedQuery(
            "the fast path handles Boolean conjunctive queries only")
    return query


def _check_partition(instance: Instance, query: BooleanCQ) -> dict[str, bool]:
    """Map each query predicate to 'is endogenous'; reject mixed extensions."""
    out: dict[str, bool] = {}
    for atom in query.atoms:
        if atom.pred in out:
            continue
        flags = {f.endo for f in instance.relation(atom.pred)}
        if len(flags) > 1:
            raise UnsupportedPartition(
                f"predicate {atom.pred!r} mixes endogenous and exogenous tuples; "
                "use the exhaustive enumerators instead")
        out[atom.pred] = flags.pop() if flags else True
    return out


def _compile(instance: Instance, query: BooleanCQ):
    """Integer-encode the per-atom candidate rows and join constraints."""
    vid: dict[str, int] = {}

    def enc(v: str) -> int:
        if v not in vid:
            vid[v] = len(vid)
        return vid[v]

    k = query.k
    rows: list[list[tuple[int, ...]]] = []
    tids: list[list[str]] = []
    for atom in query.atoms:
        atom_rows, atom_tids = [], []
        for f in instance.relation(atom.pred):
            if fact_matches_atom(atom, f):
                atom_rows.append(tuple(enc(v) for v in f.vals))
                atom_tids.append(f.tid)
        rows.append(atom_rows)
        tids.append(atom_tids)
    pair_eqs = [[(() if i == j else _shared_positions(query, i, j))
                 for j in range(k)] for i in range(k)]
    return rows, tids, pair_eqs


def participating_sets(instance: Instance, query: Query, *,
                       backend: str | None = None) -> ParticipatingSets:
    """The R_i sets: companions are tried exhaustively, so each tuple costs
    at most |D|^(k-1) checks (early exit on the first success)."""
    cq = _require_cq(query)
    rows, tids, pair_eqs = _compile(instance, cq)
    masks = kernels.participation_masks(rows, pair_eqs, backend=backend)
    per_atom = tuple(
        frozenset(t for t, hit in zip(tids[i], masks[i]) if hit)
        for i in range(cq.k)
    )
    return ParticipatingSets(per_atom=per_atom)


def core_fast(instance: Instance, query: Query, *,
              backend: str | None = None) -> CoreResult:
    """Repair core via the participation rewriting, in O(|D|^k).

    Atom positions over all-exogenous predicates are skipped when
    subtracting: exogenous tuples are kept by every repair.
    """
    cq = _require_cq(query)
    endo_pred = _check_partition(instance, cq)
    psets = participating_sets(instance, cq, backend=backend)
    removed: frozenset[str] = frozenset()
    for atom, r_i in zip(cq.atoms, psets.per_atom):
        if endo_pred[atom.pred]:
            removed |= r_i
    return CoreResult(tuples=instance.tids() - removed, method="lemma1")


def sufficient_set_from(instance: Instance, query: Query, repair: Repair,
                        tid: str, *, backend: str | None = None) -> ExplanationSet:
    """(kept(repair) minus core) plus the removed tuple t is a sufficient
    set; for t in the kept part it provably is not, so that is an error."""
    cq = _require_cq(query)
    if tid not in instance:
        raise UnknownTupleId(f"unknown tid {tid!r}")
    if tid not in repair.removed:
        raise ExplanationInvalid(
            f"{tid!r} is kept by the repair; the construction yields a "
            "sufficient set exactly for removed tuples")
    core = core_fast(instance, cq, backend=backend).tuples
    return ExplanationSet.checked(
        "SS", (repair.kept - core) | {tid}, instance, query)


def _chase_candidates(instance: Instance, cq: BooleanCQ, seed: Fact,
                      base: frozenset[str],
                      endo_pred: dict[str, bool],
                      kept: frozenset[str] | None) -> list[list[Fact]]:
    pools: list[list[Fact]] = []
    for atom in cq.atoms:
        pool = []
        for f in instance.relation(atom.pred):
            if not fact_matches_atom(atom, f):
                continue
            if endo_pred[atom.pred]:
                if f.tid in base or f.tid == seed.tid:
                    pool.append(f)
            else:
                # exogenous predicate: join partners only, drawn from the
                # whole extension (restricted to the repair when given)
                if kept is None or f.tid in kept:
                    pool.append(f)
        pools.append(pool)
    return pools


def chase_mss(instance: Instance, query: Query, tid: str,
              repair: Repair | None = None, *,
              backend: str | None = None) -> ExplanationSet:
    """A minimal sufficient set containing the seed, of size <= k, built by
    binding one atom position at a time to a join-compatible tuple outside
    the core (inside the repair's kept part when one is given).

    Seed atom positions are tried lowest-index first; within a position,
    candidates in tid order; dead ends backtrack.  The raw result is
    minimized (it can be non-minimal under self-joins) and re-verified.
    """
    cq = _require_cq(query)
    endo_pred = _check_partition(instance, cq)
    seed = instance.fact(tid)
    if not seed.endo:
        raise ChaseSeedError(f"seed {tid!r} is exogenous")
    core = core_fast(instance, cq, backend=backend).tuples
    if repair is not None:
        if tid not in repair.removed:
            raise ChaseSeedError(f"seed {tid!r} is not removed by the repair")
        base = repair.kept - core
        kept = repair.kept
    else:
        if tid in core:
            raise ChaseSeedError(
                f"seed {tid!r} lies in the repair core: it participates in no "
                "satisfying combination")
        base = instance.tids() - core
        kept = None
    pools = _chase_candidates(instance, cq, seed, base, endo_pred, kept)
    seed_positions = [i for i, atom in enumerate(cq.atoms)
                      if atom.pred == seed.pred and fact_matches_atom(atom, seed)]
    if not seed_positions:
        raise ChaseSeedError(f"seed {tid!r} matches no atom of the query")

    def completions(bound: dict[int, Fact], order: list[int], depth: int):
        if depth == len(order):
            yield dict(bound)
            return
        j = order[depth]
        for cand in pools[j]:
            if all(join_compatible(cq, j, cand, b, f) for b, f in bound.items()):
                bound[j] = cand
                yield from completions(bound, order, depth + 1)
                del bound[j]

    # Under self-joins a completion can minimize to a set that drops the
    # seed (the seed then supports only a non-minimal combination on this
    # branch), so such completions are dead ends too: keep searching the
    # current and the remaining seed positions.
    for p in seed_positions:
        order = [j for j in range(cq.k) if j != p]
        for complete in completions({p: seed}, order, 0):
            result = {f.tid for f in complete.values() if f.endo}
            for u in sorted(result - {tid}):
                if is_sufficient(instance, query, result - {u}):
                    result.discard(u)
            try:
                return ExplanationSet.checked("MSS", result, instance, query)
            except ExplanationInvalid:
                continue
    raise ChaseDefect(
        f"no minimal sufficient set through seed {tid!r} is reachable: every "
        "combination the seed supports has a sufficient proper subset "
        "avoiding it, or no companions outside the core complete it")


def min_mss_sjf(instance: Instance, query: Query, tid: str | None = None, *,
                backend: str | None = None) -> MinMssResult:
    """Minimum-size minimal sufficient set (optionally through a given
    tuple) for a self-join-free query, plus the sufficiency degree.

    Self-join freedom makes every chase result carry one tuple per
    endogenous atom position, so all minimal sufficient sets share one
    cardinality and any chase result is minimum.
    """
    cq = _require_cq(query)
    if not cq.self_join_free:
        raise CallerMustUseOracle(
            "minimum-size shortcut requires a self-join-free query")
    endo_pred = _check_partition(instance, cq)
    if not evaluate(cq, instance):
        raise QueryNotSatisfied("the query is false in the instance")
    psets = participating_sets(instance, cq, backend=backend)
    participating: set[str] = set()
    for atom, r_i in zip(cq.atoms, psets.per_atom):
        if endo_pred[atom.pred]:
            participating |= r_i
    if tid is not None:
        if tid not in instance:
            raise UnknownTupleId(f"unknown tid {tid!r}")
        if tid not in participating:
            return MinMssResult(mss=None, sigma=Fraction(0))
        mss = chase_mss(instance, cq, tid, backend=backend)
        return MinMssResult(mss=mss, sigma=Fraction(1, len(mss)))
    if not participating:
        empty = ExplanationSet.checked("MSS", frozenset(), instance, query)
        return MinMssResult(mss=empty, sigma=None)
    seed = min(participating)
    mss = chase_mss(instance, cq, seed, backend=backend)
    return MinMssResult(mss=mss, sigma=Fraction(1, len(mss)))
