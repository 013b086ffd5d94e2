"""Enumeration and search over BALFIs.

Candidate generation uses the two structural prunings forced by the defining
equations: ``neg[z]`` ranges over supersets of the Boolean complement of ``z``,
and given ``neg[z]``, ``circ[z]`` ranges over subsets of ``compl(z & neg[z])``.
Every candidate produced this way already satisfies both equations, so the
per-element option counts multiply to the exact space size
(``2**(n-k) * 3**k`` for an element with k atoms, 6**(n*2**(n-1)) in total).

Searches are deterministic: carrier elements in subset-rank order, neg options
before circ options, each option list in increasing numeric order.
"""

from __future__ import annotations

import itertools
import os
import random as _random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence

from . import balfi as balfi_mod
from . import syntax
from .algebra import PowersetAlgebra, submasks, supersets
from .balfi import AXIOM_TAG_SCHEMAS, Balfi, check_balfi
from .syntax import Formula, Schema

DEFAULT_MAX_SPACE = 10 ** 8
MAX_SPACE_ENV = "BALFI_LAB_MAX_SPACE"

# With either of these tags required, the circ table is a function of the neg
# table: ciw forces circ[z] = compl(z & neg[z]), cl forces circ[z] = neg[z & neg[z]].
_CIRC_DETERMINING_TAGS = ("ciw", "cl")


class SpaceTooLarge(ValueError):
    def __init__(self, estimate: int, cap: int):
        # huge estimates can exceed the int-to-str conversion limit
        shown = str(estimate) if estimate.bit_length() <= 256 else f"about 2^{estimate.bit_length()}"
        super().__init__(
            f"exhaustive search space has {shown} candidates, above the cap of {cap}; "
            f"fix entries, require circ-determining tags, use Random mode, or raise "
            f"{MAX_SPACE_ENV}"
        )
        self.estimate = estimate
        self.cap = cap


class ReconstructionError(RuntimeError):
    """A constrained search backing a paper example found no model.

    Raised loudly: an unsatisfiable reconstruction would falsify the claim the
    example is meant to witness.
    """


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Random:
    """Sample `count` candidate tables (before semantic filters) from `seed`."""

    count: int
    seed: int


SearchMode = object  # Exhaustive | Random


@dataclass(frozen=True)
class SearchSpec:
    n_atoms: int
    require_tags: frozenset[str] = frozenset()
    require_schemas: tuple[Schema, ...] = ()
    require_paraconsistent: bool = False
    require_lfi: bool = False
    fixed_neg: Mapping[int, int] = field(default_factory=dict)
    fixed_circ: Mapping[int, int] = field(default_factory=dict)
    mode: SearchMode = Exhaustive()

    def __post_init__(self):
        for tag in self.require_tags:
            if tag not in AXIOM_TAG_SCHEMAS:
                raise ValueError(f"unknown axiom tag {tag!r}")

    @property
    def circ_determined(self) -> bool:
        return any(tag in self.require_tags for tag in _CIRC_DETERMINING_TAGS)


def max_space() -> int:
    raw = os.environ.get(MAX_SPACE_ENV)
    if raw is None:
        return DEFAULT_MAX_SPACE
    return int(raw)


def _neg_options(alg: PowersetAlgebra, z: int, spec: SearchSpec) -> list[int]:
    fixed = spec.fixed_neg.get(z)
    if fixed is not None:
        alg.check_element(fixed)
        return [fixed] if fixed | alg.compl(z) == fixed else []
    return list(supersets(alg, alg.compl(z)))


def _circ_options(alg: PowersetAlgebra, z: int, negz: int, spec: SearchSpec) -> list[int]:
    bound = alg.compl(z & negz)
    fixed = spec.fixed_circ.get(z)
    if fixed is not None:
        alg.check_element(fixed)
        return [fixed] if fixed & bound == fixed else []
    return list(submasks(bound))


def estimate_space(spec: SearchSpec) -> int:
    """Size of the structural candidate space (tables meeting the two defining
    equations and the fixed entries), before any equation-driven pruning.

    Closed forms per element keep this O(2^n): an unfixed element with k atoms
    contributes 2^k neg options, and summing the circ submask counts over them
    gives 2^(n-k) * 3^k when circ is also free.
    """
    alg = PowersetAlgebra(spec.n_atoms)
    n = alg.n_atoms
    space = 1
    for z in alg.elements():
        k = bin(z).count("1")
        nf = spec.fixed_neg.get(z)
        cf = spec.fixed_circ.get(z)
        if nf is not None:
            alg.check_element(nf)
            if nf | alg.compl(z) != nf:
                return 0
            if spec.circ_determined:
                per_element = 1
            elif cf is not None:
                per_element = 1 if cf & alg.compl(z & nf) == cf else 0
            else:
                per_element = 1 << (n - bin(z & nf).count("1"))
        elif spec.circ_determined:
            per_element = 1 << k
        elif cf is not None:
            alg.check_element(cf)
            # neg options v = compl(z) | t with t <= z; circ fixed admissible
            # iff cf & t == 0, leaving the submasks of z & ~cf
            per_element = 1 << bin(z & ~cf & alg.top).count("1")
        else:
            per_element = (1 << (n - k)) * 3 ** k
        space *= per_element
    return space


def _determined_circ(alg: PowersetAlgebra, neg: Sequence[int], spec: SearchSpec) -> Optional[list[int]]:
    """circ table forced by ciw/cl, or None if it violates a bound or fixing."""
    circ = []
    for z in alg.elements():
        y = z & neg[z]
        value = alg.compl(y) if "ciw" in spec.require_tags else neg[y]
        if value & alg.compl(y) != value:  # gentle explosion would fail
            return None
        fixed = spec.fixed_circ.get(z)
        if fixed is not None and fixed != value:
            return None
        circ.append(value)
    return circ


def _neg_tables_plain(alg: PowersetAlgebra, spec: SearchSpec) -> Iterator[tuple[int, ...]]:
    options = [_neg_options(alg, z, spec) for z in alg.elements()]
    if any(not opts for opts in options):
        return iter(())
    return itertools.product(*options)


def _neg_tables_pruned(alg: PowersetAlgebra, spec: SearchSpec) -> Iterator[tuple[int, ...]]:
    """Neg tables in the same order as the plain product, pruned by necessary
    conditions of the required equations.

    With cl required, gentle explosion forces neg[y] == compl(y) for every
    contradiction degree y = z & neg[z]; with ci required and circ determined,
    ci further forces neg[compl(y)] == y; cf requires neg[neg[z]] <= z.  All
    three are checked as soon as the touched entries are assigned, so no table
    satisfying the required equations is ever skipped.
    """
    size = alg.size
    top = alg.top
    options = [_neg_options(alg, z, spec) for z in alg.elements()]
    if any(not opts for opts in options):
        return
    tags = spec.require_tags
    use_cf = "cf" in tags
    use_eq2 = "cl" in tags
    use_ci = "ci" in tags and spec.circ_determined

    table = [0] * size
    idx = [0] * size
    demands: list[Optional[int]] = [None] * size
    registered: list[Optional[int]] = [None] * size
    rev: list[list[int]] = [[] for _ in range(size)]

    def try_assign(i: int, v: int) -> bool:
        if demands[i] is not None and demands[i] != v:
            return False
        if use_cf:
            if v <= i:
                neg_v = v if v == i else table[v]
                if neg_v & i != neg_v:
                    return False
            for z in rev[i]:
                if v & z != v:
                    return False
        y = i & v
        if use_eq2:
            neg_y = v if y == i else table[y]
            if neg_y != top ^ y:
                return False
        if use_ci:
            w = top ^ y
            if w < i:
                if table[w] != y:
                    return False
            elif w == i:
                if v != y:
                    return False
            elif demands[w] is None:
                demands[w] = y
                registered[i] = w
            elif demands[w] != y:
                return False
        table[i] = v
        rev[v].append(i)
        return True

    def unassign(i: int) -> None:
        rev[table[i]].pop()
        w = registered[i]
        if w is not None:
            demands[w] = None
            registered[i] = None

    i = 0
    while i >= 0:
        placed = False
        while idx[i] < len(options[i]):
            v = options[i][idx[i]]
            idx[i] += 1
            registered[i] = None
            if try_assign(i, v):
                placed = True
                break
        if not placed:
            idx[i] = 0
            i -= 1
            if i >= 0:
                unassign(i)
            continue
        if i == size - 1:
            yield tuple(table)
            unassign(i)
        else:
            i += 1


def _neg_tables(alg: PowersetAlgebra, spec: SearchSpec) -> Iterator[tuple[int, ...]]:
    if spec.require_tags & {"cf", "ci", "cl"}:
        return _neg_tables_pruned(alg, spec)
    return _neg_tables_plain(alg, spec)


def _passes_filters(spec: SearchSpec, b: Balfi) -> bool:
    if any(not balfi_mod.satisfies_equation(b, tag) for tag in sorted(spec.require_tags)):
        return False
    if any(not balfi_mod.models_schema(b, s) for s in spec.require_schemas):
        return False
    if spec.require_paraconsistent and not balfi_mod.is_paraconsistent(b):
        return False
    if spec.require_lfi and not balfi_mod.is_lfi(b):
        return False
    return True


def _exhaustive_candidates(spec: SearchSpec) -> Iterator[Balfi]:
    alg = PowersetAlgebra(spec.n_atoms)
    for neg in _neg_tables(alg, spec):
        if spec.circ_determined:
            circ = _determined_circ(alg, neg, spec)
            if circ is None:
                continue
            yield check_balfi(alg, neg, circ)
        else:
            circ_options = [_circ_options(alg, z, neg[z], spec) for z in alg.elements()]
            if any(not opts for opts in circ_options):
                continue
            for circ in itertools.product(*circ_options):
                yield check_balfi(alg, neg, circ)


def _random_candidates(spec: SearchSpec) -> Iterator[Balfi]:
    alg = PowersetAlgebra(spec.n_atoms)
    rng = _random.Random(spec.mode.seed)
    neg_options = [_neg_options(alg, z, spec) for z in alg.elements()]
    if any(not opts for opts in neg_options):
        return
    for _ in range(spec.mode.count):
        neg = [rng.choice(opts) for opts in neg_options]
        if spec.circ_determined:
            circ = _determined_circ(alg, neg, spec)
            if circ is None:
                continue
        else:
            circ = []
            ok = True
            for z in alg.elements():
                opts = _circ_options(alg, z, neg[z], spec)
                if not opts:
                    ok = False
                    break
                circ.append(rng.choice(opts))
            if not ok:
                continue
        yield check_balfi(alg, neg, circ)


def iter_candidates(spec: SearchSpec, *, candidate_budget: Optional[int] = None) -> Iterator[Balfi]:
    """Candidates in deterministic order, before the spec's semantic filters.

    Exhaustive mode enforces the space cap unless a candidate budget is given;
    a budget silently truncates the stream after that many candidates.
    """
    if isinstance(spec.mode, Random):
        source = _random_candidates(spec)
    else:
        if candidate_budget is None:
            estimate = estimate_space(spec)
            cap = max_space()
            if estimate > cap:
                raise SpaceTooLarge(estimate, cap)
        source = _exhaustive_candidates(spec)
    if candidate_budget is None:
        yield from source
    else:
        for i, b in enumerate(source):
            if i >= candidate_budget:
                return
            yield b


def enumerate_balfis(spec: SearchSpec, *, candidate_budget: Optional[int] = None) -> Iterator[Balfi]:
    """All BALFIs meeting the spec's constraints, in deterministic order."""
    for b in iter_candidates(spec, candidate_budget=candidate_budget):
        if _passes_filters(spec, b):
            yield b


def count_balfis(spec: SearchSpec) -> int:
    return sum(1 for _ in enumerate_balfis(spec))


def partition_specs(spec: SearchSpec) -> list[SearchSpec]:
    """Split the exhaustive space into disjoint sub-spaces along the first
    element with more than one neg option; concatenating the sub-streams in
    option order reproduces the unpartitioned stream."""
    from dataclasses import replace

    alg = PowersetAlgebra(spec.n_atoms)
    for z in alg.elements():
        options = _neg_options(alg, z, spec)
        if len(options) > 1:
            return [
                replace(spec, fixed_neg={**dict(spec.fixed_neg), z: v})
                for v in options
            ]
    return [spec]


# ---------------------------------------------------------------------------
# Countermodel search

def _refutes_locally(b: Balfi, v, gamma, phi) -> bool:
    meet = b.alg.top
    for g in gamma:
        meet &= balfi_mod.evaluate(b, v, g)
    return not b.alg.leq(meet, balfi_mod.evaluate(b, v, phi))


def _refutes_globally(b: Balfi, v, gamma, phi) -> bool:
    return (
        all(balfi_mod.evaluate(b, v, g) == b.top for g in gamma)
        and balfi_mod.evaluate(b, v, phi) != b.top
    )


def find_countermodel(
    spec: SearchSpec,
    gamma: Sequence[Formula],
    phi: Formula,
    mode: str = "local",
) -> Optional[tuple[Balfi, dict[str, int]]]:
    """First (model, valuation) refuting the consequence, or None within bound.

    Local refutation: meet of the premise values not <= value of phi (with the
    empty meet = top, this subsumes refuting validity of phi itself).  Global
    refutation: all premises top, phi not top.
    """
    if mode not in ("local", "global"):
        raise ValueError(f"mode must be 'local' or 'global', got {mode!r}")
    refutes = _refutes_locally if mode == "local" else _refutes_globally
    names: dict[str, None] = {}
    for f in list(gamma) + [phi]:
        for name in syntax.variables(f):
            names.setdefault(name, None)
    order = list(names)
    for b in enumerate_balfis(spec):
        for point in itertools.product(range(b.alg.size), repeat=len(order)):
            v = dict(zip(order, point))
            if refutes(b, v, gamma, phi):
                return b, v
    return None


# ---------------------------------------------------------------------------
# Reconstructions of the paper's example models.  The figures are partly
# unrecoverable; each search encodes the constraints the surrounding text
# fixes and returns the first solution in the deterministic candidate order.

RECONSTRUCTION_BUDGET = 10 ** 7

_CF = AXIOM_TAG_SCHEMAS["cf"]
_CIW = AXIOM_TAG_SCHEMAS["ciw"]
_CL = AXIOM_TAG_SCHEMAS["cl"]

EXAMPLE_NAMES = ("B_remark", "B_prime", "B_rci_16a", "B_rci_16b", "B_triple_prime")


def _first(spec: SearchSpec, extra: Callable[[Balfi], bool], name: str) -> Balfi:
    for b in enumerate_balfis(spec, candidate_budget=RECONSTRUCTION_BUDGET):
        if extra(b):
            return b
    raise ReconstructionError(
        f"no model found for {name} within {RECONSTRUCTION_BUDGET} candidates; "
        f"this would contradict the published example"
    )


def reconstruct_example(name: str) -> Balfi:
    if name == "B_remark":
        # A4 countermodel to (a<->b)->(#a<->#b): neg a=b, neg 1=1, circ a=a, circ 1=0.
        spec = SearchSpec(
            n_atoms=2,
            fixed_neg={1: 2, 3: 3},
            fixed_circ={1: 1, 3: 0},
            require_paraconsistent=True,
        )
        return _first(spec, lambda b: True, name)
    if name == "B_prime":
        # Model of (cf) but not (ciw) (so circ a=0 while compl(a & neg a)=b,
        # forcing neg a=1), paraconsistent, an LFI whose gentle-explosion
        # non-triviality is witnessed by the published valuations
        # v'(p)=1, v'(q)=a and v''(p)=0, v''(q)=b.
        spec = SearchSpec(
            n_atoms=2,
            fixed_neg={1: 3},
            fixed_circ={1: 0},
            require_schemas=(_CF,),
            require_paraconsistent=True,
            require_lfi=True,
        )
        def matches_remark(b: Balfi) -> bool:
            alg = b.alg
            top = alg.top
            return (
                not balfi_mod.models_schema(b, _CIW)
                and not alg.leq(top & b.circ[top], 1)       # v'(p)=1 refutes p, @p |- q at q=a
                and not alg.leq(b.neg[0] & b.circ[0], 2)    # v''(p)=0 refutes !p, @p |- q at q=b
            )
        return _first(spec, matches_remark, name)
    if name == "B_rci_16a":
        # 16-element model of {ci, cf}; circ determined through (cl) by the
        # collapse BI({ci,cf}) = BI({ci,cl,cf}).
        spec = SearchSpec(
            n_atoms=4,
            require_tags=frozenset({"ci", "cl", "cf"}),
            require_paraconsistent=True,
        )
        return _first(spec, lambda b: True, name)
    if name == "B_rci_16b":
        # The paper displays two distinct RCi models; their exact tables are
        # unrecoverable, so this is the next distinct solution after 16a.
        first = reconstruct_example("B_rci_16a")
        spec = SearchSpec(
            n_atoms=4,
            require_tags=frozenset({"ci", "cl", "cf"}),
            require_paraconsistent=True,
        )
        return _first(spec, lambda b: b != first, name)
    if name == "B_triple_prime":
        # Model of (cl) that is not a model of (cf), with neg neg 0 = a.
        spec = SearchSpec(
            n_atoms=2,
            fixed_neg={3: 1},
            require_tags=frozenset({"cl"}),
            require_paraconsistent=True,
        )
        return _first(spec, lambda b: not balfi_mod.satisfies_equation(b, "cf"), name)
    raise ValueError(f"unknown example {name!r}; known: {EXAMPLE_NAMES}")
