import itertools
from math import factorial

import pytest
from hypothesis import given, strategies as st

from opfree.fincat import StructuralError
from opfree.operad import (CapError, Op, OperadMorphism, OperadSpec, block_perm, block_sum,
                           build_named, builder_assoc, builder_cocartesian, builder_com, builder_e0,
                           builder_triv, check_operad_laws, compose_perm, e0_to_assoc, identity_map,
                           invert_perm, product, projection, terminal_map)
from opfree.refcats import span

perms = st.integers(1, 6).flatmap(lambda n: st.permutations(range(n)))


@given(perms)
def test_inverse_permutation(s):
    assert compose_perm(s, invert_perm(s)) == tuple(range(len(s)))
    assert compose_perm(invert_perm(s), s) == tuple(range(len(s)))


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4).flatmap(
    lambda sizes: st.tuples(st.just(sizes), st.permutations(range(len(sizes))))))
def test_block_perm_moves_blocks(case):
    sizes, sigma = case
    tags = [(i, r) for i, n in enumerate(sizes) for r in range(n)]
    moved = [None] * len(tags)
    for k, j in enumerate(block_perm(sigma, sizes)):
        moved[j] = tags[k]
    # oracle: list the blocks in the order sigma^-1 and flatten
    order = sorted(range(len(sizes)), key=lambda i: sigma[i])
    assert moved == [(i, r) for i in order for r in range(sizes[i])]


def test_block_sum_offsets():
    assert block_sum([(1, 0), (0,), (2, 0, 1)]) == (1, 0, 2, 5, 3, 4)


def test_arity_counts(small_ops):
    assoc, com, e0, triv = (small_ops[k] for k in ("assoc", "com", "e0", "triv"))
    for n in range(4):
        assert len(assoc.mul(("*",) * n, "*")) == factorial(n)
        assert len(com.mul(("*",) * n, "*")) == 1
    assert [len(e0.mul(("*",) * n, "*")) for n in range(4)] == [1, 1, 0, 0]
    assert [len(triv.mul(("*",) * n, "*")) for n in range(4)] == [0, 1, 0, 0]


def test_cocartesian_span_operations():
    K = span()
    O = builder_cocartesian(K, 2)
    assert len(O.mul(("a",), "b")) == 1
    assert O.mul(("b",), "c") == ()
    assert len(O.mul(("a", "a"), "b")) == 1
    assert O.mul(("b", "c"), "a") == ()


@pytest.mark.parametrize("builder", [builder_com, builder_e0, builder_triv, builder_assoc])
def test_builders_satisfy_laws(builder):
    assert check_operad_laws(builder(3)) == []


def test_cocartesian_and_product_satisfy_laws():
    K = span()
    assert check_operad_laws(builder_cocartesian(K, 3)) == []
    assert check_operad_laws(product(builder_com(3), builder_triv(3))) == []


def test_assoc_without_action_fails_equivariance():
    good = builder_assoc(3)
    bad = OperadSpec("e1-bad", ("*",), 3, good.mul, good.unit, good._gamma_fn,
                     lambda op, s: Op(tuple(op.inputs[i] for i in s), op.output, op.label))
    report = check_operad_laws(bad)
    assert report and all("equivariance" in line or "action" in line for line in report[:3])


def test_corrupted_unit_is_localized():
    good = builder_assoc(3)
    bad = OperadSpec("e1-unit", ("*",), 3, good.mul, good.unit,
                     lambda op, ops: Op(good.gamma(op, ops).inputs, op.output,
                                        tuple(reversed(good.gamma(op, ops).label))),
                     good.act)
    report = check_operad_laws(bad)
    assert any("unit" in line for line in report)


def test_gamma_errors():
    assoc = builder_assoc(2)
    two = assoc.mul(("*", "*"), "*")[0]
    with pytest.raises(CapError):
        assoc.gamma(two, (two, two))
    with pytest.raises(StructuralError):
        assoc.gamma(two, (two,))


def test_maps_satisfy_laws():
    e0, assoc, com = builder_e0(3), builder_assoc(3), builder_com(3)
    for p in (e0_to_assoc(e0, assoc), terminal_map(assoc, com), terminal_map(e0, com), identity_map(assoc)):
        assert p.check_laws() == [], p.name
    P = product(com, builder_triv(3))
    assert projection(P, 0, com).check_laws() == []


def test_map_forgetting_order_into_assoc_fails():
    com, assoc = builder_com(3), builder_assoc(3)
    bad = OperadMorphism(com, assoc, {"*": "*"}, lambda op: Op(op.inputs, op.output, tuple(range(op.arity))))
    assert any("action" in line for line in bad.check_laws())


def test_build_named():
    assert build_named("e1", 2).name == "e1"
    assert len(build_named("product:com,triv", 2).colors) == 1
    with pytest.raises(KeyError):
        build_named("lie", 2)


def test_assoc_composition_is_order_substitution():
    A = builder_assoc(4)
    # (x1 x0) with x0 := (y1 y0), x1 := (y2): y2 y1 y0 in flat slots 2, 1, 0
    phi = Op(("*", "*"), "*", (1, 0))
    psi0 = Op(("*", "*"), "*", (1, 0))
    psi1 = Op(("*",), "*", (0,))
    assert A.gamma(phi, (psi0, psi1)).label == (2, 1, 0)
    for n in range(4):
        for order in itertools.permutations(range(n)):
            op = Op(("*",) * n, "*", order)
            assert A.gamma(A.unit("*"), (op,)) == op
