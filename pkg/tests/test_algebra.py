import itertools

import pytest

from balfi_lab.algebra import (
    COMPL, IMP, JOIN, MEET,
    ArityError, PowersetAlgebra, boolean_op, submasks, supersets,
)

A4 = PowersetAlgebra(2)
ZERO, A, B, ONE = 0, 1, 2, 3


def test_a4_examples():
    assert boolean_op(A4, IMP, [A, ZERO]) == B
    assert boolean_op(A4, MEET, [A, B]) == ZERO
    assert boolean_op(A4, IMP, [ONE, A]) == A


def test_leq_examples():
    assert A4.leq(ZERO, A)
    assert not A4.leq(A, B)
    assert A4.leq(A, ONE)
    # a <= b iff a -> b = top
    for x, y in itertools.product(A4.elements(), repeat=2):
        assert A4.leq(x, y) == (A4.impl(x, y) == A4.top)


def test_big_ops_examples():
    assert A4.big_meet([A, ONE]) == A
    assert A4.big_join([A, B]) == ONE
    assert A4.big_meet([]) == ONE
    assert A4.big_join([]) == ZERO


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lattice_laws_exhaustive(n):
    alg = PowersetAlgebra(n)
    elems = list(alg.elements())
    for a, b in itertools.product(elems, repeat=2):
        assert alg.meet(a, b) == alg.meet(b, a)
        assert alg.join(a, b) == alg.join(b, a)
        assert alg.join(a, alg.meet(a, b)) == a
        assert alg.meet(a, alg.join(a, b)) == a
    for a, b, c in itertools.product(elems, repeat=3):
        assert alg.meet(a, alg.meet(b, c)) == alg.meet(alg.meet(a, b), c)
        assert alg.join(a, alg.join(b, c)) == alg.join(alg.join(a, b), c)
        assert alg.meet(a, alg.join(b, c)) == alg.join(alg.meet(a, b), alg.meet(a, c))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_residuation_exhaustive(n):
    alg = PowersetAlgebra(n)
    for a, b, c in itertools.product(alg.elements(), repeat=3):
        assert alg.leq(alg.meet(a, c), b) == alg.leq(c, alg.impl(a, b))


def test_big_ops_agree_with_folds():
    alg = PowersetAlgebra(3)
    import random
    rng = random.Random(5)
    for _ in range(100):
        xs = [rng.randrange(alg.size) for _ in range(rng.randint(1, 6))]
        m = xs[0]
        j = xs[0]
        for x in xs[1:]:
            m = alg.meet(m, x)
            j = alg.join(j, x)
        assert alg.big_meet(xs) == m
        assert alg.big_join(xs) == j


def test_atom_bounds():
    with pytest.raises(ValueError):
        PowersetAlgebra(0)
    with pytest.raises(ValueError):
        PowersetAlgebra(17)
    PowersetAlgebra(16)


def test_serialization_round_trip():
    alg = PowersetAlgebra(3)
    for x in alg.elements():
        assert alg.from_atoms(alg.atoms(x)) == x
    assert alg.atoms(0b101) == [0, 2]
    with pytest.raises(ValueError):
        alg.from_atoms([3])


def test_boolean_op_arity():
    with pytest.raises(ArityError):
        boolean_op(A4, MEET, [A])
    with pytest.raises(ArityError):
        boolean_op(A4, COMPL, [A, B])
    with pytest.raises(ValueError):
        boolean_op(A4, "Nand", [A, B])
    with pytest.raises(ValueError):
        boolean_op(A4, MEET, [A, 9])


def test_submask_and_superset_order():
    assert list(submasks(0b101)) == [0b000, 0b001, 0b100, 0b101]
    alg = PowersetAlgebra(2)
    assert list(supersets(alg, 0b10)) == [0b10, 0b11]
    assert list(supersets(alg, 0b00)) == [0, 1, 2, 3]
