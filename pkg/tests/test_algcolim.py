import itertools
import random

import pytest

from opfree.algcolim import (AlgebraDiagram, algebra_tables_equal, algebra_to_diagram, bar_coequalizer,
                             cocartesian_operad, colim_algebras, commutative_spans,
                             congruence_presentation, contractible_compat_check, diagram_to_algebra,
                             pushout_commutative, pushout_finality, reflexive_pairs, span_diagram,
                             sifted_preservation_check)
from opfree.fincat import StructuralError
from opfree.refcats import discrete, point
from opfree.target import (algebra_check, all_monoids, cyclic_group, max_monoid, monoid_algebra,
                           monoid_homs, ptdfinset_cartesian)


def _identity(M):
    return {x: x for x in M.elements}


def _const(M, N):
    return {x: N.one for x in M.elements}


def _pushout_oracle(A, B, C, f, g):
    """Smallest congruence on B x C containing (f(a) b, c) ~ (b, g(a) c).

    Blocks are relabelled by merging until each block is closed under
    multiplication by every element.
    """
    elems = list(itertools.product(B.elements, C.elements))
    mul = lambda x, y: (B.mul(x[0], y[0]), C.mul(x[1], y[1]))
    label = {x: i for i, x in enumerate(elems)}

    def merge(x, y):
        a, b = label[x], label[y]
        if a == b:
            return False
        for z in elems:
            if label[z] == b:
                label[z] = a
        return True

    for a in A.elements:
        for b in B.elements:
            for c in C.elements:
                merge((B.mul(f[a], b), c), (b, C.mul(g[a], c)))
    changed = True
    while changed:
        changed = False
        first = {}
        for x in elems:
            y = first.setdefault(label[x], x)
            for w in elems:
                changed |= merge(mul(x, w), mul(y, w))
    blocks = {}
    for x in elems:
        blocks.setdefault(label[x], []).append(x)
    return sorted(sorted(v) for v in blocks.values())


def test_point_shape_round_trip(ops):
    M = monoid_algebra(ops["com"], max_monoid(2))
    G = AlgebraDiagram.from_generators(point(), ops["com"], {"*": M}, {})
    A = diagram_to_algebra(G)
    back = algebra_to_diagram(A, G.K, ops["com"])
    assert algebra_tables_equal(back.algebras["*"], M)


def test_span_round_trip_and_laws(small_ops):
    com = small_ops["com"]
    Z2, mx = cyclic_group(2), max_monoid(2)
    G = span_diagram(Z2, Z2, mx, _identity(Z2), _const(Z2, mx), com)
    assert G.check() == []
    OK = cocartesian_operad(G.K, com)
    A = diagram_to_algebra(G, OK)
    assert algebra_check(A, cap=2) == []
    G2 = algebra_to_diagram(A, G.K, com)
    assert G2.maps == G.maps
    assert all(algebra_tables_equal(G.algebras[k], G2.algebras[k]) for k in G.K.objects)


def test_non_homomorphism_is_reported(small_ops):
    com = small_ops["com"]
    Z2, mx = cyclic_group(2), max_monoid(2)
    G = span_diagram(Z2, Z2, mx, _identity(Z2), {0: 0, 1: 1}, com)
    assert G.check()


def test_colimit_over_a_point_stabilizes(ops):
    M = monoid_algebra(ops["com"], max_monoid(2))
    G = AlgebraDiagram.from_generators(point(), ops["com"], {"*": M}, {})
    res = colim_algebras(G, 3)
    assert len(res.algebra) == 2 and res.algebra.stabilized
    assert res.leg_report(G) == []


def test_pushout_of_max_monoids(ops):
    one, mx = cyclic_group(1), max_monoid(2)
    res = pushout_commutative(one, mx, mx, _const(one, mx), _const(one, mx), ops["com"], L=4, stabilize=True)
    assert res.agree and len(res.bar) == 4
    assert res.envelope.algebra.stabilized
    assert res.envelope.leg_report(res.envelope.legs and span_diagram(one, mx, mx, _const(one, mx),
                                                                       _const(one, mx), ops["com"])) == []


def test_pushout_along_identity_and_trivial_map(ops):
    Z2, mx = cyclic_group(2), max_monoid(2)
    res = pushout_commutative(Z2, Z2, mx, _identity(Z2), _const(Z2, mx), ops["com"])
    assert res.agree and len(res.bar) == 2


def test_bar_and_presentation_against_congruence_closure():
    rng = random.Random(7)
    spans = list(commutative_spans(3))
    for A, B, C, f, g in rng.sample(spans, 60):
        oracle = _pushout_oracle(A, B, C, f, g)
        assert bar_coequalizer(A, B, C, f, g).partition() == oracle
        assert congruence_presentation(A, B, C, f, g).partition() == oracle


def test_envelope_pushouts_on_a_sample(ops):
    rng = random.Random(11)
    spans = list(commutative_spans(3))
    for A, B, C, f, g in rng.sample(spans, 25):
        assert pushout_commutative(A, B, C, f, g, ops["com"]).agree


def test_bar_cut_is_final(ops):
    one, mx = cyclic_group(1), max_monoid(2)
    fin, laws = pushout_finality(one, mx, mx, _const(one, mx), _const(one, mx), ops["com"])
    assert laws == [] and fin.is_iso and len(fin.target_colimit) == 4


def test_noncommutative_pushout_is_refused(ops):
    from opfree.target import symmetric_group3
    S3 = symmetric_group3()
    one = cyclic_group(1)
    with pytest.raises(StructuralError):
        pushout_commutative(one, S3, S3, _const(one, S3), _const(one, S3), ops["com"])


def test_reflexive_pair_sample(ops):
    cases = list(reflexive_pairs(3, 2, commutative=True))
    for case in cases:
        r = sifted_preservation_check(*case, ops["com"], slice_levels=2, slice_points=())
        assert r.agree, r.detail


def test_reflexive_coequalizer_for_assoc(small_ops):
    # cap 3 keeps the cocartesian product operad small
    case = next(c for c in reflexive_pairs(4, 3) if c[2] != c[3])
    r = sifted_preservation_check(*case, small_ops["assoc"])
    assert r.agree
    assert all(v.status == "certified_contractible" for _, _, v in r.slices)


def test_reflexive_pair_needs_section(ops):
    Z2 = cyclic_group(2)
    one = cyclic_group(1)
    with pytest.raises(StructuralError):
        sifted_preservation_check(Z2, Z2, _identity(Z2), _identity(Z2), {0: 0, 1: 0}, ops["com"])
    assert monoid_homs(one, Z2)


def test_contractible_compatibility_and_control(small_ops):
    from opfree.operad import builder_com
    com = builder_com(4)
    P = ptdfinset_cartesian()
    Z2, mx = cyclic_group(2), max_monoid(2)
    A = monoid_algebra(com, mx, P)
    G = span_diagram(Z2, Z2, mx, _identity(Z2), _const(Z2, mx), com, P)
    good = contractible_compat_check(G, A)
    assert good.bijective and good.verdict.status == "certified_contractible"
    D = AlgebraDiagram.from_generators(discrete(2), com, {"x0": monoid_algebra(com, Z2, P),
                                                         "x1": monoid_algebra(com, mx, P)}, {})
    bad = contractible_compat_check(D, A)
    assert not bad.bijective and (bad.left, bad.right) == (8, 16)
    assert bad.verdict.status == "disconnected"


def test_catalogue_sizes():
    assert sum(1 for _ in commutative_spans(2)) == sum(
        len(monoid_homs(A, B)) * len(monoid_homs(A, C))
        for n in (1, 2) for A in all_monoids(n, True)
        for m in (1, 2) for B in all_monoids(m, True)
        for k in (1, 2) for C in all_monoids(k, True))
