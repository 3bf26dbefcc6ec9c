"""Orbits, blocks, primitivity, and the decomposability verdict."""

import random

import pytest

from branchcover.groups import (
    GroupError,
    decomposability_verdict,
    is_primitive,
    is_transitive,
    minimal_block,
    orbits,
    primitivity_fast_path,
)
from branchcover.perm import Permutation, identity, parse_cycles


def gens(*texts, d):
    return [parse_cycles(t, d) for t in texts]


def test_orbits_examples():
    assert orbits(gens("(1 2 3)(4 5)", d=5)) == ((1, 2, 3), (4, 5))
    assert orbits([identity(3)]) == ((1,), (2,), (3,))
    line1 = gens("(1 2 3)(4 5)", "(5 4 1)(3 2)", d=5)
    assert orbits(line1) == ((1, 2, 3, 4, 5),)


def test_is_transitive_examples():
    line7 = gens("(1 2 3)(4 5 6)(7 8 9)", "(3 2 4)(6 5 7)(1 8 9)", d=9)
    assert is_transitive(line7)
    assert not is_transitive([identity(2)])
    assert not is_transitive(gens("(1 2)", "(3 4)", d=4))


def test_minimal_block_examples():
    assert minimal_block(gens("(1 2 3 4)", d=4), (1, 3)) == (1, 3)
    sym = gens("(1 2)", "(1 2 3 4)", d=4)
    assert minimal_block(sym, (1, 2)) == (1, 2, 3, 4)
    assert minimal_block(gens("(1 2 3 4 5 6)", d=6), (1, 4)) == (1, 4)
    with pytest.raises(GroupError):
        minimal_block(gens("(1 2)", d=4), (1, 2))
    with pytest.raises(GroupError):
        minimal_block(sym, (2, 2))


def test_minimal_block_closure_invariant():
    rng = random.Random(11)
    for _ in range(100):
        d = rng.randint(3, 8)
        while True:
            gs = [
                Permutation(tuple(rng.sample(range(1, d + 1), d))) for _ in range(2)
            ]
            if is_transitive(gs):
                break
        x = rng.randint(2, d)
        block = set(minimal_block(gs, (1, x)))
        for g in gs:
            image = {g(y) for y in block}
            assert image == block or not (image & block)


def test_is_primitive_examples():
    prim, witness = is_primitive(gens("(1 2 3 4)", d=4))
    assert not prim
    assert witness.block_size == 2
    assert set(witness.blocks) == {(1, 3), (2, 4)}
    prim, witness = is_primitive(gens("(1 2)", "(1 2 3)", d=3))
    assert prim and witness is None
    line13 = gens(
        "(1 2 3)(4 5 6)(7 8 9)(10 11)", "(3 2 4)(6 5 7)(8 9 10)(1 11)", d=11
    )
    assert is_primitive(line13)[0]


def test_is_primitive_preconditions():
    with pytest.raises(GroupError):
        is_primitive(gens("(1 2)", d=4))
    with pytest.raises(GroupError):
        is_primitive([identity(1)])


def test_primitivity_fast_path_examples():
    gens5 = gens("(1 2 3)", "(1 2 3 4 5)", d=5)
    assert primitivity_fast_path(gens5, 3) is True
    gens9 = gens("(1 2 3 4 5 6 7)", "(1 2 3 4 5 6 7 8 9)", d=9)
    assert primitivity_fast_path(gens9, 7) is True
    assert primitivity_fast_path(gens9, 3) is None
    assert primitivity_fast_path(gens9, 9) is None


def test_fast_path_never_contradicts_exact():
    rng = random.Random(13)
    for _ in range(150):
        d = rng.randint(3, 8)
        while True:
            gs = [
                Permutation(tuple(rng.sample(range(1, d + 1), d))) for _ in range(2)
            ]
            if is_transitive(gs):
                break
        for g in gs:
            for cyc in g.nontrivial_cycles():
                fast = primitivity_fast_path(gs, len(cyc))
                if fast is True:
                    assert is_primitive(gs)[0]


def test_decomposability_verdict_examples():
    verdict, witness = decomposability_verdict(gens("(1 2 3 4 5 6 7 8 9)", d=9))
    assert verdict == "decomposable"
    assert witness.block_size in (3,)
    line1 = gens("(1 2 3)(4 5)", "(5 4 1)(3 2)", d=5)
    assert decomposability_verdict(line1) == ("indecomposable", None)
    assert decomposability_verdict(gens("(1 2 3 4 5)", d=5)) == ("indecomposable", None)
    with pytest.raises(GroupError):
        decomposability_verdict(gens("(1 2)", d=4))
