"""Boolean monotone queries: parsing, evaluation, witness enumeration.

Two query forms are supported:

* Boolean conjunctive queries, written ``q :- S(x), R(x,y), S(y).``
  Variables are lowercase identifiers; a term is a constant when it is
  quoted or when it occurs in the instance's active domain.
* a reachability built-in, written ``q :- path(E, a, b).`` asking whether
  node ``b`` is reachable from node ``a`` over the binary edge predicate
  ``E`` (one or more edges).

Both forms are monotone: adding facts never turns a true answer false.
Witnesses are the subset-minimal fact sets that already satisfy the query;
for conjunctive queries these are the minimized images of satisfying
assignments (under self-joins one fact may serve several atoms), for
reachability queries the edge sets of simple source-to-target paths.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, NamedTuple, Optional, Union

from .errors import (
    PathBoundExceeded,
    QuerySyntaxError,
    UnknownPredicate,
    UnsupportedQuery,
)
from .model import Fact, Instance

__all__ = [
    "Var", "Const", "Atom", "BooleanCQ", "ReachabilityQuery", "Query",
    "Witness", "DenialConstraint", "parse_query", "evaluate",
    "enumerate_witnesses", "denial_constraint_of", "subtuple_restriction",
    "join_compatible", "fact_matches_atom", "DEFAULT_MAX_PATHS",
]

DEFAULT_MAX_PATHS = 100_000


class Var(NamedTuple):
    name: str


class Const(NamedTuple):
    value: str


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...]

    def variables(self) -> tuple[str, ...]:
        out, seen = [], set()
        for t in self.args:
            if isinstance(t, Var) and t.name not in seen:
                seen.add(t.name)
                out.append(t.name)
        return tuple(out)

    def __str__(self) -> str:
        parts = [t.name if isinstance(t, Var) else repr(t.value) for t in self.args]
        return f"{self.pred}({','.join(parts)})"


@dataclass(frozen=True)
class BooleanCQ:
    """A Boolean conjunctive query: every variable is existential."""

    atoms: tuple[Atom, ...]

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def self_join_free(self) -> bool:
        preds = [a.pred for a in self.atoms]
        return len(preds) == len(set(preds))

    def variables(self) -> tuple[str, ...]:
        out, seen = [], set()
        for a in self.atoms:
            for v in a.variables():
                if v not in seen:
                    seen.add(v)
                    out.append(v)
        return tuple(out)

    def __str__(self) -> str:
        return "q :- " + ", ".join(str(a) for a in self.atoms) + "."


@dataclass(frozen=True)
class ReachabilityQuery:
    """Is `target` reachable from `source` via >= 1 edges of `edge_pred`?"""

    edge_pred: str
    source: str
    target: str

    def __str__(self) -> str:
        return f"q :- path({self.edge_pred}, {self.source}, {self.target})."


Query = Union[BooleanCQ, ReachabilityQuery]


@dataclass(frozen=True)
class Witness:
    """A subset-minimal fact set satisfying the query.

    ``assignment`` is a representative satisfying assignment for
    conjunctive queries and None for reachability queries.
    """

    tuples: frozenset[str]
    assignment: Optional[Mapping[str, str]] = None

    def sort_key(self) -> tuple[str, ...]:
        return tuple(sorted(self.tuples))


@dataclass(frozen=True)
class DenialConstraint:
    """The negation of a Boolean CQ; violated exactly when the CQ holds."""

    body: BooleanCQ

    def __str__(self) -> str:
        return "not exists(" + ", ".join(str(a) for a in self.body.atoms) + ")"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<entail>:-)|(?P<punct>[(),.])|"
    r"(?P<quoted>'[^']*'|\"[^\"]*\")|(?P<word>[A-Za-z0-9_]+))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.lastgroup == "entail":
            tokens.append(("entail", ":-", m.start("entail")))
        elif m.lastgroup == "punct":
            tokens.append((m.group("punct"), m.group("punct"), m.start("punct")))
        elif m.lastgroup == "quoted":
            tokens.append(("const", m.group("quoted")[1:-1], m.start("quoted")))
        else:
            tokens.append(("word", m.group("word"), m.start("word")))
        pos = m.end()
    return tokens


_LOWER_IDENT = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], constants: frozenset[str]):
        self.tokens = tokens
        self.constants = constants
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        if self.i >= len(self.tokens):
            return ("eof", "", -1)
        return self.tokens[self.i]

    def expect(self, kind: str) -> str:
        k, text, pos = self.peek()
        if k != kind:
            raise QuerySyntaxError(f"expected {kind!r} but found {text or 'end of input'!r}"
                                   f"{'' if pos < 0 else f' at offset {pos}'}")
        self.i += 1
        return text

    def term(self) -> Term:
        k, text, pos = self.peek()
        if k == "const":
            self.i += 1
            return Const(text)
        if k == "word":
            self.i += 1
            if text in self.constants or not _LOWER_IDENT.match(text):
                return Const(text)
            return Var(text)
        raise QuerySyntaxError(f"expected a term at offset {pos}, found {text!r}")

    def atom(self) -> Atom:
        pred = self.expect("word")
        self.expect("(")
        args = [self.term()]
        while self.peek()[0] == ",":
            self.i += 1
            args.append(self.term())
        self.expect(")")
        return Atom(pred, tuple(args))


def parse_query(
    text: str,
    instance: Instance | None = None,
    *,
    schema: Mapping[str, int] | None = None,
    constants: frozenset[str] | None = None,
) -> Query:
    """Parse query text against an instance (or explicit schema/domain).

    The instance supplies the schema (for arity checking) and the active
    domain (for classifying unquoted tokens as constants).  Unquoted
    lowercase identifiers outside the domain become variables.
    """
    if instance is not None:
        if schema is None:
            schema = instance.schema
        if constants is None:
            constants = instance.domain()
    constants = constants or frozenset()

    tokens = _tokenize(text)
    p = _Parser(tokens, frozenset(constants))
    p.expect("word")  # query head name
    if p.peek()[0] == "(":
        raise QuerySyntaxError("free variables are not allowed: the query head "
                               "must be a bare name (Boolean query)")
    p.expect("entail")
    atoms = [p.atom()]
    while p.peek()[0] == ",":
        p.i += 1
        atoms.append(p.atom())
    p.expect(".")
    if p.peek()[0] != "eof":
        raise QuerySyntaxError(f"trailing input after '.': {p.peek()[1]!r}")

    if len(atoms) == 1 and atoms[0].pred == "path":
        a = atoms[0]
        if len(a.args) != 3:
            raise QuerySyntaxError("path/3 expects (EdgePred, source, target)")
        names = []
        for t in a.args:
            names.append(t.value if isinstance(t, Const) else t.name)
        edge_pred, source, target = names
        if schema is not None:
            if edge_pred not in schema:
                raise UnknownPredicate(f"unknown edge predicate {edge_pred!r}")
            if schema[edge_pred] != 2:
                raise QuerySyntaxError(f"edge predicate {edge_pred!r} must be binary")
        return ReachabilityQuery(edge_pred, source, target)

    if schema is not None:
        for a in atoms:
            if a.pred not in schema:
                raise UnknownPredicate(f"unknown predicate {a.pred!r}")
            if schema[a.pred] != len(a.args):
                raise QuerySyntaxError(
                    f"{a.pred} expects {schema[a.pred]} arguments, got {len(a.args)}")
    return BooleanCQ(tuple(atoms))


# ---------------------------------------------------------------------------
# conjunctive query evaluation (backtracking over atoms in textual order)

def fact_matches_atom(atom: Atom, fact: Fact) -> bool:
    """Check constants and repeated variables of one atom against one fact."""
    if fact.pred != atom.pred or len(fact.vals) != len(atom.args):
        return False
    env: dict[str, str] = {}
    for term, val in zip(atom.args, fact.vals):
        if isinstance(term, Const):
            if term.value != val:
                return False
        else:
            bound = env.get(term.name)
            if bound is None:
                env[term.name] = val
            elif bound != val:
                return False
    return True


def _extend_env(atom: Atom, fact: Fact, env: dict[str, str]) -> dict[str, str] | None:
    new = dict(env)
    for term, val in zip(atom.args, fact.vals):
        if isinstance(term, Const):
            if term.value != val:
                return None
        else:
            bound = new.get(term.name)
            if bound is None:
                new[term.name] = val
            elif bound != val:
                return None
    return new


def _check_preds(query: BooleanCQ, instance: Instance) -> None:
    schema = instance.schema
    for a in query.atoms:
        if a.pred not in schema:
            raise UnknownPredicate(f"unknown predicate {a.pred!r}")


def _assignments(query: BooleanCQ, instance: Instance) -> Iterator[tuple[dict[str, str], tuple[Fact, ...]]]:
    """All satisfying assignments, as (environment, per-atom fact binding)."""

    def rec(idx: int, env: dict[str, str], bound: tuple[Fact, ...]):
        if idx == len(query.atoms):
            yield env, bound
            return
        atom = query.atoms[idx]
        for fact in instance.relation(atom.pred):
            new = _extend_env(atom, fact, env)
            if new is not None:
                yield from rec(idx + 1, new, bound + (fact,))

    yield from rec(0, {}, ())


def _reachable(instance: Instance, query: ReachabilityQuery) -> bool:
    succ: dict[str, list[str]] = {}
    for f in instance.relation(query.edge_pred):
        succ.setdefault(f.vals[0], []).append(f.vals[1])
    # reached via >= 1 edge, matching the least fixpoint of the usual
    # transitive-closure rules (no zero-length paths)
    frontier = list(succ.get(query.source, ()))
    seen = set(frontier)
    while frontier:
        node = frontier.pop()
        for nxt in succ.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return query.target in seen


def evaluate(query: Query, instance: Instance) -> bool:
    """Does the instance satisfy the query?"""
    if isinstance(query, ReachabilityQuery):
        if query.edge_pred not in instance.schema:
            raise UnknownPredicate(f"unknown predicate {query.edge_pred!r}")
        return _reachable(instance, query)
    _check_preds(query, instance)
    return next(_assignments(query, instance), None) is not None


def _simple_paths(instance: Instance, query: ReachabilityQuery,
                  max_paths: int) -> list[frozenset[str]]:
    by_src: dict[str, list[Fact]] = {}
    for f in instance.relation(query.edge_pred):
        by_src.setdefault(f.vals[0], []).append(f)
    paths: list[frozenset[str]] = []

    def rec(node: str, visited: frozenset[str], edges: tuple[str, ...]):
        for f in by_src.get(node, ()):
            nxt = f.vals[1]
            if nxt == query.target:
                paths.append(frozenset(edges + (f.tid,)))
                if len(paths) > max_paths:
                    raise PathBoundExceeded(
                        f"more than {max_paths} simple paths; raise the path bound")
                continue
            if nxt in visited:
                continue
            rec(nxt, visited | {nxt}, edges + (f.tid,))

    rec(query.source, frozenset({query.source}), ())
    return paths


def _antichain(sets: list[frozenset[str]]) -> list[frozenset[str]]:
    """Keep the subset-minimal members (deduplicated)."""
    uniq = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    kept: list[frozenset[str]] = []
    for s in uniq:
        if not any(t <= s for t in kept):
            kept.append(s)
    return kept


def enumerate_witnesses(query: Query, instance: Instance, *,
                        max_paths: int = DEFAULT_MAX_PATHS) -> tuple[Witness, ...]:
    """All subset-minimal witnesses; empty iff the query is false."""
    if isinstance(query, ReachabilityQuery):
        if query.edge_pred not in instance.schema:
            raise UnknownPredicate(f"unknown predicate {query.edge_pred!r}")
        # edge sets of distinct simple paths are never comparable, so the
        # family is already an antichain
        paths = _simple_paths(instance, query, max_paths)
        witnesses = [Witness(tuples=p) for p in sorted(set(paths), key=sorted)]
        return tuple(sorted(witnesses, key=Witness.sort_key))
    _check_preds(query, instance)
    images: dict[frozenset[str], dict[str, str]] = {}
    for env, bound in _assignments(query, instance):
        image = frozenset(f.tid for f in bound)
        images.setdefault(image, env)
    minimal = _antichain(list(images))
    witnesses = [Witness(tuples=s, assignment=dict(images[s])) for s in minimal]
    return tuple(sorted(witnesses, key=Witness.sort_key))


def denial_constraint_of(query: Query) -> DenialConstraint:
    """The denial constraint violated exactly when the CQ is satisfied."""
    if not isinstance(query, BooleanCQ):
        raise UnsupportedQuery("denial constraints are only defined for "
                               "Boolean conjunctive queries")
    return DenialConstraint(body=query)


# ---------------------------------------------------------------------------
# subtuple restriction (join-compatibility test used by the chase)

@lru_cache(maxsize=None)
def _shared_positions(query: BooleanCQ, i: int, j: int) -> tuple[tuple[int, int], ...]:
    """First positions, in atom i and atom j, of their shared variables.

    The variable order is fixed by the lower-indexed atom so that the two
    directions of the restriction are comparable.
    """
    if i == j:
        raise ValueError("atoms must be distinct")
    k = len(query.atoms)
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"atom position out of range (query has {k} atoms)")

    def first_pos(atom: Atom) -> dict[str, int]:
        pos: dict[str, int] = {}
        for p, t in enumerate(atom.args):
            if isinstance(t, Var) and t.name not in pos:
                pos[t.name] = p
        return pos

    pi, pj = first_pos(query.atoms[i]), first_pos(query.atoms[j])
    anchor = query.atoms[min(i, j)]
    shared = [t.name for t in anchor.args
              if isinstance(t, Var) and t.name in pi and t.name in pj]
    ordered, seen = [], set()
    for name in shared:
        if name not in seen:
            seen.add(name)
            ordered.append((pi[name], pj[name]))
    return tuple(ordered)


def subtuple_restriction(query: BooleanCQ, i: int, s: Fact, j: int, t: Fact) -> tuple[str, ...]:
    """Values of `s` (bound to atom i) at the variables atom i shares with
    atom j.  Equality with the opposite restriction is the
    join-compatibility test."""
    return tuple(s.vals[pi] for pi, _ in _shared_positions(query, i, j))


def join_compatible(query: BooleanCQ, i: int, s: Fact, j: int, t: Fact) -> bool:
    """Do s@atom_i and t@atom_j agree on the variables the atoms share?"""
    pairs = _shared_positions(query, i, j)
    return all(s.vals[pi] == t.vals[pj] for pi, pj in pairs)
