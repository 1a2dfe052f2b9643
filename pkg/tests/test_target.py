import itertools

import pytest
from hypothesis import given, settings, strategies as st

from opfree.fincat import SetDiagram, StructuralError
from opfree.refcats import arrow, discrete, point, reflexive_pair, span
from opfree.target import (AlgebraMap, AlgebraTable, FinSet, algebra_check, all_monoids, cyclic_group,
                           finset_cartesian, idempotent_monoid, max_monoid, monoid_algebra,
                           monoid_from_function, monoid_homs, pointed_set_algebra,
                           ptdfinset_cartesian, restrict_algebra, set_algebra, shape_certificate,
                           slice_monoidal, symmetric_group3)
from opfree.operad import e0_to_assoc


def test_monoid_counts_up_to_isomorphism():
    # published counts of monoids of order 1..4, all and commutative
    assert [len(all_monoids(n)) for n in range(1, 5)] == [1, 2, 7, 35]
    assert [len(all_monoids(n, True)) for n in range(1, 5)] == [1, 2, 5, 19]


def test_catalog_monoids_are_monoids():
    for n in range(1, 4):
        for M in all_monoids(n):
            assert M.is_associative() and M.is_unital()


def _brute_homs(M, N):
    out = []
    for images in itertools.product(N.elements, repeat=len(M.elements)):
        f = dict(zip(M.elements, images))
        if f[M.one] == N.one and all(f[M.mul(a, b)] == N.mul(f[a], f[b])
                                     for a in M.elements for b in M.elements):
            out.append(f)
    return out


@pytest.mark.parametrize("pair", [(cyclic_group(2), cyclic_group(4)), (max_monoid(2), cyclic_group(2)),
                                  (symmetric_group3(), cyclic_group(2)), (cyclic_group(3), symmetric_group3())])
def test_monoid_homs_match_brute_force(pair):
    M, N = pair
    got = sorted(sorted(f.items()) for f in monoid_homs(M, N))
    assert got == sorted(sorted(f.items()) for f in _brute_homs(M, N))


def test_small_monoids():
    assert cyclic_group(3).is_commutative()
    assert not symmetric_group3().is_commutative()
    I = idempotent_monoid()
    assert all(I.mul(x, x) == x for x in I.elements)
    bad = monoid_from_function((0, 1, 2), lambda a, b: (a + 2 * b) % 3, 0)
    assert not bad.is_associative()


def test_compatibility_with_shapes():
    S, P = finset_cartesian(), ptdfinset_cartesian()
    for shape in (point(), span(), arrow(), reflexive_pair()):
        assert S.compatible_with(shape).ok
        assert P.compatible_with(shape).ok
    res = P.compatible_with(discrete(2))
    assert not res.ok and "7" in res.detail and "6" in res.detail
    assert S.compatible_with(discrete(2)).ok


def test_pointed_certificate_carries_verdict():
    res, verdict = shape_certificate(ptdfinset_cartesian(), discrete(2))
    assert not res.ok and verdict.status == "disconnected"
    res, verdict = shape_certificate(ptdfinset_cartesian(), span())
    assert res.ok and verdict.status == "certified_contractible"


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_product_commutes_with_coequalizer_probe(f):
    # sets: X x - preserves the colimit of a single map into a three-element set
    K = arrow()
    D = SetDiagram(K, {"0": (0, 1, 2), "1": (0, 1, 2)},
                   lambda m: dict(enumerate(f)) if m[2] else {e: e for e in range(3)})
    assert finset_cartesian().compatible_with(K, probes=[D]).ok


def test_monoid_algebras_pass_laws(small_ops):
    for M in all_monoids(3):
        assert algebra_check(monoid_algebra(small_ops["assoc"], M)) == []
    for M in all_monoids(3, True):
        assert algebra_check(monoid_algebra(small_ops["com"], M)) == []


def test_noncommutative_monoid_is_not_a_com_algebra(small_ops):
    with pytest.raises(StructuralError):
        monoid_algebra(small_ops["com"], symmetric_group3())


def test_nonassociative_table_fails_composition(small_ops):
    bad = monoid_from_function((0, 1, 2), lambda a, b: (a + 2 * b) % 3, 0)
    report = algebra_check(monoid_algebra(small_ops["assoc"], bad))
    assert report and any("composition" in r or "unit" in r for r in report)


def test_pointed_algebra_must_preserve_basepoint(small_ops):
    P = ptdfinset_cartesian()
    A = monoid_algebra(small_ops["com"], max_monoid(2), P)
    assert algebra_check(A) == []
    B = AlgebraTable(small_ops["com"], P, {"*": P.obj((0, 1), 1)}, lambda op, xs: max(xs, default=0))
    assert any("basepoint" in r for r in algebra_check(B))


def test_e0_algebras(small_ops):
    X = pointed_set_algebra(small_ops["e0"], ("*", "a"), "*")
    assert algebra_check(X) == []
    assert X.act(small_ops["e0"].ops_with_output("*", 0)[0], ()) == "*"
    T = set_algebra(small_ops["triv"], (0, 1))
    assert algebra_check(T) == []


def test_restriction_and_maps(small_ops):
    p = e0_to_assoc(small_ops["e0"], small_ops["assoc"])
    B = monoid_algebra(small_ops["assoc"], cyclic_group(2))
    R = restrict_algebra(B, p)
    assert algebra_check(R) == []
    ident = AlgebraMap(B, B, {"*": {0: 0, 1: 1}})
    assert ident.check(3) == []
    const = AlgebraMap(B, B, {"*": {0: 1, 1: 1}})
    assert const.check(3)


def test_slice_is_conservative(small_ops):
    S = slice_monoidal(finset_cartesian(), monoid_algebra(small_ops["com"], max_monoid(2)))
    objs = S.fiber(FinSet((0, 1))) + [S.unit()]
    assert S.check_conservative(objs)
    X, Y = objs[1], objs[2]
    assert len(S.tensor(X, Y).carrier) == 4
    assert S.project(S.unit()) == finset_cartesian().unit()
