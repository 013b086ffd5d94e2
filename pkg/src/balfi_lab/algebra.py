"""Finite powerset Boolean algebras.

Elements of ``PowersetAlgebra(n)`` are subsets of the atom set
``{w_1, ..., w_n}`` encoded as bitmasks: atom ``w_{i+1}`` is bit ``i``.  The
carrier is ``range(2**n)``; 0 is the empty set, ``top`` the full set.  Every
finite Boolean algebra is isomorphic to one of these, so nothing is lost by
restricting the carrier shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_ATOMS = 16

MEET = "Meet"
JOIN = "Join"
IMP = "Imp"
COMPL = "Compl"


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class PowersetAlgebra:
    n_atoms: int

    def __post_init__(self):
        if not 1 <= self.n_atoms <= MAX_ATOMS:
            raise ValueError(f"n_atoms must be in 1..{MAX_ATOMS}, got {self.n_atoms}")

    @property
    def size(self) -> int:
        return 1 << self.n_atoms

    @property
    def top(self) -> int:
        return (1 << self.n_atoms) - 1

    def elements(self) -> range:
        """Carrier in subset-rank (bitmask) order."""
        return range(self.size)

    def check_element(self, x: int) -> int:
        if not isinstance(x, int) or not 0 <= x <= self.top:
            raise ValueError(f"{x!r} is not an element of the {self.size}-element algebra")
        return x

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def impl(self, a: int, b: int) -> int:
        return (self.top ^ a) | b

    def compl(self, a: int) -> int:
        return self.top ^ a

    def leq(self, a: int, b: int) -> bool:
        return a & b == a

    def big_meet(self, xs: Iterable[int]) -> int:
        result = self.top
        for x in xs:
            result &= x
        return result

    def big_join(self, xs: Iterable[int]) -> int:
        result = 0
        for x in xs:
            result |= x
        return result

    def atoms(self, x: int) -> list[int]:
        """Sorted atom indices of an element (its serialized form)."""
        return [i for i in range(self.n_atoms) if x >> i & 1]

    def from_atoms(self, indices: Iterable[int]) -> int:
        x = 0
        for i in indices:
            if not 0 <= i < self.n_atoms:
                raise ValueError(f"atom index {i} out of range for {self.n_atoms} atoms")
            x |= 1 << i
        return x


def boolean_op(alg: PowersetAlgebra, op: str, args: Sequence[int]) -> int:
    """Dispatching form of the lattice operations, with arity checking."""
    args = [alg.check_element(a) for a in args]
    if op == COMPL:
        if len(args) != 1:
            raise ArityError(f"Compl takes 1 argument, got {len(args)}")
        return alg.compl(args[0])
    if op in (MEET, JOIN, IMP):
        if len(args) != 2:
            raise ArityError(f"{op} takes 2 arguments, got {len(args)}")
        fn = {MEET: alg.meet, JOIN: alg.join, IMP: alg.impl}[op]
        return fn(args[0], args[1])
    raise ValueError(f"unknown boolean operation {op!r}")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask` in increasing numeric order (0 first, mask last)."""
    t = 0
    while True:
        yield t
        if t == mask:
            return
        t = (t - mask) & mask


def supersets(alg: PowersetAlgebra, x: int) -> Iterator[int]:
    """All supersets of `x` within the algebra, in increasing numeric order."""
    free = alg.top ^ x
    for t in submasks(free):
        yield x | t
