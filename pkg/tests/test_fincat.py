import itertools

import pytest

from hypothesis import given, settings, strategies as st

from opfree.catiso import find_isomorphism
from opfree.fincat import (FiniteCategory, StructuralError, Functor, SetDiagram, UnionFind, category_from_table,
                           check_category_laws,
                           colimit_set, connected_components, diagonal_slice, finality_check,
                           product_category, slice_category, truncated_colimit,
                           weak_contractibility_heuristic)
from opfree.refcats import (arrow, delta_op, discrete, fin_inj, point, reflexive_pair, span)


def _components(nodes, edges):
    # independent oracle: depth-first search on an undirected graph
    adj = {n: set() for n in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, comps = set(), []
    for n in nodes:
        if n in seen:
            continue
        stack, comp = [n], set()
        while stack:
            m = stack.pop()
            if m in comp:
                continue
            comp.add(m)
            stack.extend(adj[m] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return set(comps)


def test_union_find_least_representative():
    uf = UnionFind(range(6))
    uf.union(5, 3)
    uf.union(3, 4)
    uf.union(1, 2)
    assert uf.find(5) == 3
    assert uf.classes() == {0: [0], 1: [1, 2], 3: [3, 4, 5]}


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=20))
def test_union_find_matches_search(pairs):
    uf = UnionFind(range(10))
    for a, b in pairs:
        uf.union(a, b)
    got = {frozenset(ms) for ms in uf.classes().values()}
    assert got == _components(range(10), pairs)


def test_reference_categories_satisfy_laws():
    for C in (fin_inj(3), delta_op(2), reflexive_pair(), span(), arrow(), point(), discrete(2)):
        assert check_category_laws(C) == [], C.name


def test_corrupted_composition_is_reported():
    table = {("e", x): x for x in "eab"} | {(x, "e"): x for x in "eab"}
    table |= {("a", "a"): "b", ("a", "b"): "e", ("b", "a"): "b", ("b", "b"): "a"}
    C = FiniteCategory(["*"], lambda x, y: [("*", "*", m) for m in "eab"], lambda x: ("*", "*", "e"),
                       lambda g, f: ("*", "*", table[(g[2], f[2])]), name="bad")
    report = check_category_laws(C)
    assert report and any("'a'" in line for line in report)


def test_composite_outside_hom_is_structural():
    good = arrow()

    def bad_compose(g, f):
        return ("0", "1", ("h",)) if f[0] == f[1] == g[1] == "0" else good.compose(g, f)

    C = FiniteCategory(good.objects, good.hom, good.identity, bad_compose, name="bad")
    with pytest.raises(StructuralError, match="not in hom"):
        check_category_laws(C)


def test_coequalizer_of_two_maps():
    # 0 => 1 with images {a: x, b: y} and {a: y, b: z}: x ~ y ~ z, w alone
    C = FiniteCategory(["s", "t"], lambda a, b: {("s", "t"): [("s", "t", "u"), ("s", "t", "v")]}.get(
        (a, b), [(a, a, "id")] if a == b else []), lambda x: (x, x, "id"),
        lambda g, f: f if g[2] == "id" else g, name="pair")
    D = SetDiagram(C, {"s": ("a", "b"), "t": ("w", "x", "y", "z")},
                   lambda f: {"u": {"a": "x", "b": "y"}, "v": {"a": "y", "b": "z"}}.get(
                       f[2], {e: e for e in "abwxyz"}))
    col = colimit_set(D)
    assert len(col) == 2
    assert col.leg("t", "x") == col.leg("t", "z") != col.leg("t", "w")


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_coequalizer_matches_graph_components(f, g):
    C = FiniteCategory(["s", "t"], lambda a, b: {("s", "t"): [("s", "t", "u"), ("s", "t", "v")]}.get(
        (a, b), [(a, a, "id")] if a == b else []), lambda x: (x, x, "id"),
        lambda g_, f_: f_ if g_[2] == "id" else g_, name="pair")
    D = SetDiagram(C, {"s": (0, 1, 2), "t": (0, 1, 2, 3)},
                   lambda m: {"u": dict(enumerate(f)), "v": dict(enumerate(g))}.get(m[2], lambda e: e))
    col = colimit_set(D)
    expected = _components(range(4), [(f[i], g[i]) for i in range(3)])
    got = {frozenset(D.obj("t")[t[1]] for t in col.members[c] if t[0] == 1) for c in col.classes}
    assert got == expected


def test_pointed_colimit_identifies_basepoints():
    K = discrete(2)
    D = SetDiagram(K, {"x0": ("*", 1), "x1": ("*", 2)}, lambda f: (lambda e: e), basepoint=lambda x: "*")
    assert len(colimit_set(D)) == 3
    D0 = SetDiagram(K, {"x0": ("*", 1), "x1": ("*", 2)}, lambda f: (lambda e: e))
    assert len(colimit_set(D0)) == 4


def test_generators_only_colimit_agrees_with_all_morphisms():
    C = fin_inj(3)
    D = SetDiagram(C, lambda n: tuple(itertools.product((0, 1), repeat=n)),
                   lambda f: (lambda xs: tuple(xs[f[2].index(j)] if j in f[2] else 0 for j in range(f[1]))))
    a, b = colimit_set(D, True), colimit_set(D, False)
    assert len(a) == len(b)


def test_truncated_colimit_stabilizes_on_a_constant_diagram():
    G = fin_inj()
    D = SetDiagram(G, lambda n: ("p", "q"), lambda f: (lambda e: e))
    T = truncated_colimit(D, 2)
    assert T.stabilized and len(T.classes) == 2


def test_finality_of_terminal_inclusion():
    S = span()
    D = SetDiagram(S, {"a": (0,), "b": (0, 1), "c": (0, 2)},
                   lambda f: (lambda e: e) if len(f[2]) != 1 else (lambda e: 0))
    u = Functor(point(), S, lambda _: "b", lambda f: S.identity("b"), name="b")
    assert not finality_check(u, D).is_iso
    v = Functor(S, S, lambda x: x, lambda f: f, name="id")
    assert finality_check(v, D).is_iso


def test_slice_of_initial_object_is_the_category():
    S = span()
    sl = slice_category(S, "a")
    assert len(sl.objects) == 3
    assert check_category_laws(sl) == []


def test_diagonal_slices_of_delta_op_are_certified():
    S = delta_op(3)
    for xs in ((0, 0), (1, 1), (0, 2)):
        v = weak_contractibility_heuristic(diagonal_slice(S, xs))
        assert v.status == "certified_contractible", xs


def test_reflexive_pair_slice_is_only_connected():
    # the (1, 1) slice of the two-level truncation has a non-trivial cycle
    v = weak_contractibility_heuristic(diagonal_slice(delta_op(1), (1, 1)))
    assert v.status == "connected_only"


def test_contractibility_verdicts():
    assert weak_contractibility_heuristic(span()).status == "certified_contractible"
    assert weak_contractibility_heuristic(discrete(2)).status == "disconnected"
    assert weak_contractibility_heuristic(arrow()).certificate


def test_product_category_and_components():
    P = product_category(arrow(), discrete(2))
    assert check_category_laws(P) == []
    assert len(connected_components(P)) == 2


def test_dot_output_is_stable():
    assert span().to_dot() == span().to_dot()
    assert span().to_dot().startswith('digraph "')


@pytest.mark.parametrize("C", [fin_inj(3), delta_op(2), span()], ids=lambda C: C.name)
def test_category_table_round_trip(C):
    D = category_from_table(C.to_table())
    assert check_category_laws(D) == []
    assert D.hom_profile() == {(f"o{C.index(a)}", f"o{C.index(b)}"): n for (a, b), n in C.hom_profile().items()}
    assert find_isomorphism(C, D).ok


def test_corrupted_table_is_reported():
    # two injections 1 -> 2; precomposing either with the identity now gives the first
    t = fin_inj(2).to_table()
    first, second = (m for m, ends in t["morphisms"].items() if ends == ["o1", "o2"])
    t["compose"] = [[g, f, first if h == second else h] for g, f, h in t["compose"]]
    report = check_category_laws(category_from_table(t))
    assert report and any(second in line for line in report)
