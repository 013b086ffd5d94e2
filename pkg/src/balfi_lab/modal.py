"""Neighborhood semantics and minimal bimodal models.

A neighborhood frame regulates the two non-classical connectives with set maps
``s_neg, s_circ : P(W) -> P(W)`` stored extensionally (one entry per subset,
in subset-rank order, worlds-as-bits like the algebra module).  Frames are the
powerset BALFIs in disguise: ``balfi_from_frame`` / ``frame_from_balfi`` are
mutually inverse on BALFI tables.

Minimal models carry neighborhood functions ``N_i : W -> P(P(W))`` for the two
congruential boxes; ``translate`` rewrites an LFI formula into the bimodal
language so that denotations agree when the N maps come from the S maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import balfi as balfi_mod
from .algebra import PowersetAlgebra
from .balfi import Balfi
from .syntax import (
    AND, BOX1, BOX2, CIRC, CNEG, DIA1, DIA2, IMP, NEG, OR,
    Binary, Formula, Schema, Unary, Var,
)

MAX_WORLDS = 5


class UnsupportedOperator(ValueError):
    pass


class UnboundVariable(ValueError):
    def __init__(self, name: str):
        super().__init__(f"model does not assign variable {name!r}")
        self.name = name


def _check_s_map(n_worlds: int, table, what: str) -> tuple[int, ...]:
    size = 1 << n_worlds
    table = tuple(table)
    if len(table) != size:
        raise ValueError(f"{what} must have {size} entries, got {len(table)}")
    for v in table:
        if not isinstance(v, int) or not 0 <= v < size:
            raise ValueError(f"{what} entry {v!r} is not a subset of the world set")
    return table


@dataclass(frozen=True)
class NeighborhoodFrame:
    n_worlds: int
    s_neg: tuple[int, ...]   # indexed by subset rank
    s_circ: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n_worlds <= MAX_WORLDS:
            raise ValueError(f"n_worlds must be in 1..{MAX_WORLDS}")
        object.__setattr__(self, "s_neg", _check_s_map(self.n_worlds, self.s_neg, "s_neg"))
        object.__setattr__(self, "s_circ", _check_s_map(self.n_worlds, self.s_circ, "s_circ"))

    @property
    def top(self) -> int:
        return (1 << self.n_worlds) - 1


@dataclass(frozen=True)
class NeighborhoodModel:
    frame: NeighborhoodFrame
    d: Mapping[str, int]


@dataclass(frozen=True)
class MinimalModel:
    n_worlds: int
    n1: tuple[frozenset[int], ...]   # per world: the set of neighborhood subsets
    n2: tuple[frozenset[int], ...]
    d: Mapping[str, int]

    @property
    def top(self) -> int:
        return (1 << self.n_worlds) - 1


def denote(m: NeighborhoodModel, f: Formula) -> int:
    """Denotation over the Sigma fragment: classical set clauses plus
    [[!x]] = (W \\ X) | s_neg(X) and [[@x]] = (W \\ (X & s_neg(X))) & s_circ(X)."""
    fr = m.frame
    top = fr.top
    def den(node):
        if isinstance(node, Var):
            try:
                return m.d[node.name]
            except KeyError:
                raise UnboundVariable(node.name) from None
        if isinstance(node, Unary):
            if node.op == NEG:
                x = den(node.child)
                return (top ^ x) | fr.s_neg[x]
            if node.op == CIRC:
                x = den(node.child)
                return (top ^ (x & fr.s_neg[x])) & fr.s_circ[x]
            raise UnsupportedOperator(f"{node.op} is outside the Sigma fragment")
        if isinstance(node, Binary):
            left = den(node.left)
            right = den(node.right)
            if node.op == AND:
                return left & right
            if node.op == OR:
                return left | right
            return (top ^ left) | right
        raise UnsupportedOperator(f"cannot denote {type(node).__name__} node")
    return den(f)


def balfi_from_frame(fr: NeighborhoodFrame) -> Balfi:
    """The frame's induced BALFI over P(W); always passes the two equations."""
    alg = PowersetAlgebra(fr.n_worlds)
    top = fr.top
    neg = [(top ^ x) | fr.s_neg[x] for x in alg.elements()]
    circ = [(top ^ (x & fr.s_neg[x])) & fr.s_circ[x] for x in alg.elements()]
    return balfi_mod.check_balfi(alg, neg, circ)


def frame_from_balfi(b: Balfi) -> NeighborhoodFrame:
    """Read the tables back as S maps; the round trip reproduces them exactly
    because neg[x] >= compl(x) and circ[x] <= compl(x & neg[x]) in any BALFI."""
    return NeighborhoodFrame(b.alg.n_atoms, b.neg, b.circ)


def frame_valid_schema(fr: NeighborhoodFrame, s: Schema) -> bool:
    """Schema validity in the frame: denotations of metavariable instances
    range over all subsets, so this is the induced BALFI's term-function check."""
    return balfi_mod.models_schema(balfi_from_frame(fr), s)


FRAME_CONDITION_TAGS = ("ciw", "ci", "cl", "cf", "ce")


def frame_condition(fr: NeighborhoodFrame, tag: str) -> bool:
    """Direct set-theoretic frame correspondents of the section-3 axioms."""
    top = fr.top
    size = 1 << fr.n_worlds
    s_neg = fr.s_neg
    s_circ = fr.s_circ
    def subset(a, b):
        return a & b == a
    if tag == "ciw":
        return all(subset(top ^ (x & s_neg[x]), s_circ[x]) for x in range(size))
    if tag == "ci":
        for x in range(size):
            k = top ^ (x & s_neg[x])
            if not subset(k, s_circ[x] & ~s_neg[k & s_circ[x]] & top):
                return False
        return True
    if tag == "cl":
        for x in range(size):
            y = x & s_neg[x]
            if not (subset(s_neg[y], top ^ y) and subset(top ^ y, s_circ[x])):
                return False
        return True
    if tag == "cf":
        for x in range(size):
            arrow = (top ^ x) | s_neg[x]  # X -> s_neg(X) as a set
            if not subset((x & ~s_neg[x] & top) | s_neg[arrow], x):
                return False
        return True
    if tag == "ce":
        for x in range(size):
            arrow = (top ^ x) | s_neg[x]
            if not subset(x, (x & ~s_neg[x] & top) | s_neg[arrow]):
                return False
        return True
    raise ValueError(f"no frame condition for tag {tag!r}")


# ---------------------------------------------------------------------------
# Minimal bimodal models

def denote_bimodal(nm: MinimalModel, f: Formula) -> int:
    top = nm.top
    def box(nmap, x):
        out = 0
        for w in range(nm.n_worlds):
            if x in nmap[w]:
                out |= 1 << w
        return out
    def dia(nmap, x):
        comp = top ^ x
        out = 0
        for w in range(nm.n_worlds):
            if comp not in nmap[w]:
                out |= 1 << w
        return out
    def den(node):
        if isinstance(node, Var):
            try:
                return nm.d[node.name]
            except KeyError:
                raise UnboundVariable(node.name) from None
        if isinstance(node, Unary):
            if node.op == CNEG:
                return top ^ den(node.child)
            if node.op == BOX1:
                return box(nm.n1, den(node.child))
            if node.op == BOX2:
                return box(nm.n2, den(node.child))
            if node.op == DIA1:
                return dia(nm.n1, den(node.child))
            if node.op == DIA2:
                return dia(nm.n2, den(node.child))
            raise UnsupportedOperator(f"{node.op} is outside the Sigma_bm fragment")
        if isinstance(node, Binary):
            left = den(node.left)
            right = den(node.right)
            if node.op == AND:
                return left & right
            if node.op == OR:
                return left | right
            return (top ^ left) | right
        raise UnsupportedOperator(f"cannot denote {type(node).__name__} node")
    return den(f)


def translate(f: Formula) -> Formula:
    """The embedding into the bimodal language: !x becomes x -> [1]x and
    @x becomes ~(x & [1]x) & [2]x, homomorphically elsewhere."""
    if isinstance(f, Var):
        return f
    if isinstance(f, Unary):
        child = translate(f.child)
        if f.op == NEG:
            return Binary(IMP, child, Unary(BOX1, child))
        if f.op == CIRC:
            return Binary(
                AND,
                Unary(CNEG, Binary(AND, child, Unary(BOX1, child))),
                Unary(BOX2, child),
            )
        raise UnsupportedOperator(f"{f.op} is outside the Sigma fragment")
    if isinstance(f, Binary):
        return Binary(f.op, translate(f.left), translate(f.right))
    raise UnsupportedOperator(f"cannot translate {type(f).__name__} node")


def s_to_n(n_worlds: int, s_map: Sequence[int]) -> tuple[frozenset[int], ...]:
    """N(w) = {X : w in S(X)}."""
    size = 1 << n_worlds
    return tuple(
        frozenset(x for x in range(size) if s_map[x] >> w & 1)
        for w in range(n_worlds)
    )


def n_to_s(n_worlds: int, n_map: Sequence[frozenset[int]]) -> tuple[int, ...]:
    """S(X) = {w : X in N(w)}."""
    size = 1 << n_worlds
    return tuple(
        sum(1 << w for w in range(n_worlds) if x in n_map[w])
        for x in range(size)
    )


def minimal_from_neighborhood(m: NeighborhoodModel) -> MinimalModel:
    fr = m.frame
    return MinimalModel(
        fr.n_worlds,
        s_to_n(fr.n_worlds, fr.s_neg),
        s_to_n(fr.n_worlds, fr.s_circ),
        m.d,
    )


def neighborhood_from_minimal(nm: MinimalModel) -> NeighborhoodModel:
    frame = NeighborhoodFrame(
        nm.n_worlds,
        n_to_s(nm.n_worlds, nm.n1),
        n_to_s(nm.n_worlds, nm.n2),
    )
    return NeighborhoodModel(frame, nm.d)


# ---------------------------------------------------------------------------
# Frame and minimal-model files

def _subset_to_atoms(n_worlds: int, x: int) -> list[int]:
    return [w for w in range(n_worlds) if x >> w & 1]


def _subset_from_atoms(n_worlds: int, atoms) -> int:
    x = 0
    for w in atoms:
        if not 0 <= w < n_worlds:
            raise ValueError(f"world index {w} out of range")
        x |= 1 << w
    return x


def frame_to_dict(fr: NeighborhoodFrame) -> dict:
    return {
        "worlds": fr.n_worlds,
        "s_neg": [_subset_to_atoms(fr.n_worlds, v) for v in fr.s_neg],
        "s_circ": [_subset_to_atoms(fr.n_worlds, v) for v in fr.s_circ],
    }


def frame_from_dict(doc: Mapping) -> NeighborhoodFrame:
    n = doc["worlds"]
    return NeighborhoodFrame(
        n,
        tuple(_subset_from_atoms(n, entry) for entry in doc["s_neg"]),
        tuple(_subset_from_atoms(n, entry) for entry in doc["s_circ"]),
    )


def minimal_to_dict(nm: MinimalModel) -> dict:
    def nmap(entries):
        return [
            sorted([_subset_to_atoms(nm.n_worlds, x) for x in per_world])
            for per_world in entries
        ]
    return {
        "worlds": nm.n_worlds,
        "n1": nmap(nm.n1),
        "n2": nmap(nm.n2),
        "d": {name: _subset_to_atoms(nm.n_worlds, v) for name, v in sorted(nm.d.items())},
    }


def minimal_from_dict(doc: Mapping) -> MinimalModel:
    n = doc["worlds"]
    def nmap(entries):
        return tuple(
            frozenset(_subset_from_atoms(n, atoms) for atoms in per_world)
            for per_world in entries
        )
    return MinimalModel(
        n,
        nmap(doc["n1"]),
        nmap(doc["n2"]),
        {name: _subset_from_atoms(n, atoms) for name, atoms in doc.get("d", {}).items()},
    )
