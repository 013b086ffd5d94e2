"""Boolean algebras with LFI operators (BALFIs) over powerset algebras.

A BALFI adds two unary tables to a Boolean algebra, a paraconsistent negation
``neg`` and a consistency operator ``circ``, constrained by

    a | neg[a] == top          (excluded middle for neg)
    a & neg[a] & circ[a] == 0  (gentle explosion)

Everything here is pointwise table manipulation: valuations map variables to
carrier elements and extend homomorphically; validity and schema satisfaction
sweep valuation grids; the degree-preserving (local) and truth-preserving
(global) consequence relations are decided over explicit model collections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import syntax
from .algebra import PowersetAlgebra
from .syntax import (
    AND, BOT, CIRC, CNEG, IMP, NEG, OR,
    Binary, Const, Formula, Schema, Unary, Var,
)

Valuation = Mapping[str, int]


class BalfiError(ValueError):
    pass


class ViolatedJoin(BalfiError):
    """a | neg[a] != top for the witness element."""

    def __init__(self, witness: int):
        super().__init__(f"a | neg[a] != top at a={witness}")
        self.witness = witness


class ViolatedGentleExplosion(BalfiError):
    """a & neg[a] & circ[a] != 0 for the witness element."""

    def __init__(self, witness: int):
        super().__init__(f"a & neg[a] & circ[a] != 0 at a={witness}")
        self.witness = witness


class UnboundVariable(ValueError):
    def __init__(self, name: str):
        super().__init__(f"valuation does not cover variable {name!r}")
        self.name = name


class UnsupportedOperator(ValueError):
    pass


@dataclass(frozen=True)
class Balfi:
    alg: PowersetAlgebra
    neg: tuple[int, ...]   # indexed by carrier element (subset rank)
    circ: tuple[int, ...]

    @property
    def top(self) -> int:
        return self.alg.top


def _as_table(alg: PowersetAlgebra, table, what: str) -> tuple[int, ...]:
    if isinstance(table, Mapping):
        missing = [a for a in alg.elements() if a not in table]
        if missing:
            raise BalfiError(f"{what} table is missing entries for {missing}")
        table = [table[a] for a in alg.elements()]
    table = tuple(table)
    if len(table) != alg.size:
        raise BalfiError(f"{what} table has {len(table)} entries, expected {alg.size}")
    for v in table:
        alg.check_element(v)
    return table


def check_balfi(alg: PowersetAlgebra, neg_table, circ_table) -> Balfi:
    """Validate the two BALFI equations; raise the first violation with witness."""
    neg = _as_table(alg, neg_table, "neg")
    circ = _as_table(alg, circ_table, "circ")
    for a in alg.elements():
        if a | neg[a] != alg.top:
            raise ViolatedJoin(a)
    for a in alg.elements():
        if a & neg[a] & circ[a] != 0:
            raise ViolatedGentleExplosion(a)
    return Balfi(alg, neg, circ)


def classical_balfi(n_atoms: int) -> Balfi:
    """Boolean complement for neg, constantly-top circ."""
    alg = PowersetAlgebra(n_atoms)
    return Balfi(alg, tuple(alg.compl(a) for a in alg.elements()),
                 tuple(alg.top for _ in alg.elements()))


# ---------------------------------------------------------------------------
# Valuations

def evaluate(b: Balfi, v: Valuation, f: Formula) -> int:
    """Homomorphic extension of the valuation over the Sigma_e fragment."""
    top = b.alg.top
    def ev(node):
        if isinstance(node, Var):
            try:
                return v[node.name]
            except KeyError:
                raise UnboundVariable(node.name) from None
        if isinstance(node, Const):
            return 0 if node.tag == BOT else top
        if isinstance(node, Unary):
            if node.op == NEG:
                return b.neg[ev(node.child)]
            if node.op == CIRC:
                return b.circ[ev(node.child)]
            if node.op == CNEG:
                return top ^ ev(node.child)
            raise UnsupportedOperator(f"modal operator in algebraic evaluation: {node.op}")
        if isinstance(node, Binary):
            left = ev(node.left)
            right = ev(node.right)
            if node.op == AND:
                return left & right
            if node.op == OR:
                return left | right
            return (top ^ left) | right  # IMP
        raise UnsupportedOperator(f"cannot evaluate {type(node).__name__} node")
    return ev(f)


_VECTOR_THRESHOLD = 64


def _vec_eval(b: Balfi, f: Formula, env: Mapping[str, np.ndarray]) -> np.ndarray:
    top = b.alg.top
    neg = np.asarray(b.neg)
    circ = np.asarray(b.circ)
    def ev(node):
        if isinstance(node, Var):
            return env[node.name]
        if isinstance(node, Const):
            n = len(next(iter(env.values()))) if env else 1
            return np.full(n, 0 if node.tag == BOT else top, dtype=np.int64)
        if isinstance(node, Unary):
            child = ev(node.child)
            if node.op == NEG:
                return neg[child]
            if node.op == CIRC:
                return circ[child]
            if node.op == CNEG:
                return top ^ child
            raise UnsupportedOperator(f"modal operator in algebraic evaluation: {node.op}")
        if isinstance(node, Binary):
            left = ev(node.left)
            right = ev(node.right)
            if node.op == AND:
                return left & right
            if node.op == OR:
                return left | right
            return (top ^ left) | right
        raise UnsupportedOperator(f"cannot evaluate {type(node).__name__} node")
    return ev(f)


def holds_under_all_valuations(b: Balfi, f: Formula, names: Sequence[str]) -> bool:
    """True iff f evaluates to top under every assignment of carrier elements
    to `names`.  Vectorized when the grid is large."""
    names = list(names)
    for name in syntax.variables(f):
        if name not in names:
            raise UnboundVariable(name)
    if not names:
        return evaluate(b, {}, f) == b.top
    size = b.alg.size
    total = size ** len(names)
    if total >= _VECTOR_THRESHOLD:
        grids = np.indices((size,) * len(names)).reshape(len(names), -1)
        env = {name: grids[i] for i, name in enumerate(names)}
        return bool((_vec_eval(b, f, env) == b.top).all())
    for point in itertools.product(range(size), repeat=len(names)):
        if evaluate(b, dict(zip(names, point)), f) != b.top:
            return False
    return True


def is_valid_in(b: Balfi, f: Formula) -> bool:
    """v(f) == top for every valuation of f's variables."""
    return holds_under_all_valuations(b, f, syntax.variables(f))


def models_schema(b: Balfi, s: Schema) -> bool:
    """The ⊩ relation: the schema's term function is constantly top.

    Sound and complete for instance-validity because metavariables can be
    instantiated by fresh variables taking arbitrary carrier values.
    """
    return holds_under_all_valuations(b, s.body, s.metavariables)


# ---------------------------------------------------------------------------
# The section-3 axiom tags and their equational characterizations.

AXIOM_TAG_SCHEMAS: Mapping[str, Schema] = {
    "ciw": syntax.schema("@a | (a & !a)"),
    "ci": syntax.schema("!@a -> (a & !a)"),
    "cl": syntax.schema("!(a & !a) -> @a"),
    "cf": syntax.schema("!!a -> a"),
    "ce": syntax.schema("a -> !!a"),
    "caAnd": syntax.schema("(@a & @b) -> @(a & b)"),
    "caOr": syntax.schema("(@a & @b) -> @(a | b)"),
    "caImp": syntax.schema("(@a & @b) -> @(a -> b)"),
    "dm": syntax.schema("!(a & b) -> (!a | !b)"),
    "negSelfContradiction": syntax.schema("!(a & !a)"),
    "circAll": syntax.schema("@a"),
}

EQUATION_TAGS = ("ciw", "ci", "cl", "cf", "ce", "caAnd", "caOr", "caImp")


def satisfies_equation(b: Balfi, tag: str) -> bool:
    """Pointwise check of the equational characterization of an axiom tag."""
    alg = b.alg
    neg = b.neg
    circ = b.circ
    if tag == "ciw":
        return all(circ[a] == alg.compl(a & neg[a]) for a in alg.elements())
    if tag == "ci":
        return all(neg[circ[a]] == a & neg[a] for a in alg.elements())
    if tag == "cl":
        return all(circ[a] == neg[a & neg[a]] for a in alg.elements())
    if tag == "cf":
        return all(a & neg[neg[a]] == neg[neg[a]] for a in alg.elements())
    if tag == "ce":
        return all(a & neg[neg[a]] == a for a in alg.elements())
    if tag in ("caAnd", "caOr", "caImp"):
        def op(a, bb):
            if tag == "caAnd":
                return a & bb
            if tag == "caOr":
                return a | bb
            return alg.impl(a, bb)
        return all(
            (circ[a] & circ[bb]) & circ[op(a, bb)] == circ[a] & circ[bb]
            for a in alg.elements() for bb in alg.elements()
        )
    raise ValueError(f"no equational characterization for tag {tag!r}")


# ---------------------------------------------------------------------------
# Consequence over explicit model collections.
#
# These decide truth over the *given* models only: a False is a genuine
# countermodel, a True is a failure to refute within the collection.

def local_consequence(models: Iterable[Balfi], gamma: Sequence[Formula], phi: Formula) -> bool:
    """Degree-preserving consequence: phi valid everywhere, or conj(gamma) -> phi
    valid everywhere (testing the full premise set suffices by antitonicity)."""
    models = list(models)
    if all(is_valid_in(b, phi) for b in models):
        return True
    if gamma:
        target = Binary(IMP, syntax.conjoin(gamma), phi)
        return all(is_valid_in(b, target) for b in models)
    return False


def global_consequence(models: Iterable[Balfi], gamma: Sequence[Formula], phi: Formula) -> bool:
    """Truth-preserving consequence: v(phi)=top whenever v(g)=top for all g."""
    gamma = list(gamma)
    names: dict[str, None] = {}
    for f in gamma + [phi]:
        for name in syntax.variables(f):
            names.setdefault(name, None)
    order = list(names)
    for b in models:
        for point in itertools.product(range(b.alg.size), repeat=len(order)):
            v = dict(zip(order, point))
            if all(evaluate(b, v, g) == b.top for g in gamma) and evaluate(b, v, phi) != b.top:
                return False
    return True


def is_paraconsistent(b: Balfi) -> bool:
    """Some a with a & neg[a] != 0 (then v(p)=a, v(q)=0 refutes p, !p |- q)."""
    return any(a & b.neg[a] != 0 for a in b.alg.elements())


def is_lfi(b: Balfi) -> bool:
    """Paraconsistent, with witnesses for conditions (iii.a) and (iii.b):
    some a & circ[a] != 0 and some neg[a] & circ[a] != 0.  Gentle explosion
    holds in every BALFI by the defining equation."""
    return (
        is_paraconsistent(b)
        and any(a & b.circ[a] != 0 for a in b.alg.elements())
        and any(b.neg[a] & b.circ[a] != 0 for a in b.alg.elements())
    )


# ---------------------------------------------------------------------------
# Model files: {"atoms": n, "neg": [...], "circ": [...]} with the carrier in
# subset-rank order and each element as its sorted atom-index array.

def balfi_to_dict(b: Balfi) -> dict:
    alg = b.alg
    return {
        "atoms": alg.n_atoms,
        "neg": [alg.atoms(v) for v in b.neg],
        "circ": [alg.atoms(v) for v in b.circ],
    }


def balfi_from_dict(doc: Mapping) -> Balfi:
    alg = PowersetAlgebra(doc["atoms"])
    neg = [alg.from_atoms(entry) for entry in doc["neg"]]
    circ = [alg.from_atoms(entry) for entry in doc["circ"]]
    return check_balfi(alg, neg, circ)


def valuation_to_dict(b: Balfi, v: Valuation) -> dict:
    return {name: b.alg.atoms(val) for name, val in sorted(v.items())}
