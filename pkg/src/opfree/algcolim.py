"""Colimits of algebras as relative free algebras along O_K -> O.

A K-shaped diagram of O-algebras is the same thing as an algebra over
O_K = K^cocart x O; its colimit is the free O-algebra along the projection.
Pushouts of commutative monoids are checked against a bar coequalizer and a
congruence-closure presentation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .envelope import EnvMorphism, EnvObject, build_envelope, extend_algebra
from .fincat import (FiniteCategory, Functor, StructuralError, UnionFind,
                     diagonal_slice, finality_check, weak_contractibility_heuristic)
from .freealg import TruncatedAlgebra, free_algebra
from .operad import Op, OperadSpec, builder_cocartesian, product, projection
from .refcats import delta_op, span
from .target import AlgebraMap, AlgebraTable, Monoid, monoid_algebra, monoid_homs


class AlgebraDiagram:
    """A functor K -> O-algebras for single-colored O.

    ``maps`` sends every morphism of K to a dict on carriers; use
    ``from_generators`` to extend maps on generating arrows by composition.
    """

    def __init__(self, K: FiniteCategory, O: OperadSpec, algebras, maps, name="G"):
        if len(O.colors) != 1:
            raise StructuralError("diagrams are supported for single-colored operads")
        self.K, self.O = K, O
        self.color = O.colors[0]
        self.algebras = dict(algebras)
        self.maps = dict(maps)
        self.name = name

    @classmethod
    def from_generators(cls, K, O, algebras, gen_maps, name="G"):
        maps = {}
        for a, b, f in K.morphisms():
            if f == K.identity(a):
                maps[f] = {x: x for x in algebras[a].carrier(O.colors[0]).elements}
                continue
            if f in gen_maps:
                maps[f] = dict(gen_maps[f])
                continue
            # paths in a free shape: compose generator maps along the path
            m = {x: x for x in algebras[a].carrier(O.colors[0]).elements}
            for step in f[2]:
                g = next(h for h in gen_maps if h[2] == (step,))
                m = {x: gen_maps[g][y] for x, y in m.items()}
            maps[f] = m
        return cls(K, O, algebras, maps, name)

    def check(self):
        report = []
        K, c = self.K, self.color
        for a, b, f in K.morphisms():
            m = AlgebraMap(self.algebras[a], self.algebras[b], {c: self.maps[f]})
            report.extend(f"{f}: {r}" for r in m.check(2))
        for a in K.objects:
            if any(self.maps[K.identity(a)][x] != x for x in self.algebras[a].carrier(c).elements):
                report.append(f"identity of {a} does not act trivially")
        for a, b, f in K.morphisms():
            for c2 in K.objects:
                for g in K.hom(b, c2):
                    gf = K.compose(g, f)
                    if any(self.maps[g][self.maps[f][x]] != self.maps[gf][x]
                           for x in self.algebras[a].carrier(c).elements):
                        report.append(f"functoriality fails at {g} . {f}")
        return report


_OK = {}


def cocartesian_operad(K: FiniteCategory, O: OperadSpec) -> OperadSpec:
    """O_K, built once per (K, O) pair."""
    hit = _OK.get((id(K), id(O)))
    if hit is not None and hit[0] is K and hit[1] is O:
        return hit[2]
    OK = product(builder_cocartesian(K, O.cap), O, name=f"product:cocartesian:{K.name},{O.name}")
    _OK[(id(K), id(O))] = (K, O, OK)
    return OK


def diagram_to_algebra(G: AlgebraDiagram, OK: OperadSpec | None = None) -> AlgebraTable:
    """The O_K-algebra with carrier G(k) at color (k, c)."""
    OK = OK or cocartesian_operad(G.K, G.O)
    target = next(iter(G.algebras.values())).target
    carriers = {(k, c): G.algebras[k].carrier(c) for k, c in OK.colors}

    def action(op, xs):
        kop, oop = op.label
        y = op.output[0]
        return G.algebras[y].act(oop, tuple(G.maps[f][x] for f, x in zip(kop.label, xs)))

    return AlgebraTable(OK, target, carriers, action, name=f"{G.name}^K")


def algebra_to_diagram(A: AlgebraTable, K: FiniteCategory, O: OperadSpec, name="G") -> AlgebraDiagram:
    """Inverse translation: restrict to identity K-components and read maps
    off the unary operations."""
    c = O.colors[0]
    algebras = {}
    for k in K.objects:
        def action(oop, xs, k=k):
            kop = Op((k,) * oop.arity, k, (K.identity(k),) * oop.arity)
            return A.act(Op(tuple((k, ci) for ci in oop.inputs), (k, oop.output), (kop, oop)), xs)
        algebras[k] = AlgebraTable(O, A.target, {c: A.carrier((k, c))}, action, name=f"{name}({k})")
    maps = {}
    for a, b, f in K.morphisms():
        op = Op(((a, c),), (b, c), (Op((a,), b, (f,)), O.unit(c)))
        maps[f] = {x: A.act(op, (x,)) for x in A.carrier((a, c)).elements}
    return AlgebraDiagram(K, O, algebras, maps, name)


def algebra_tables_equal(A: AlgebraTable, B: AlgebraTable, cap=2):
    if A.operad.colors != B.operad.colors:
        return False
    for c in A.operad.colors:
        if A.carrier(c) != B.carrier(c):
            return False
    for op in A.operad.operations():
        if op.arity <= cap and any(A.act(op, xs) != B.act(op, xs) for xs in A.inputs(op)):
            return False
    return True


@dataclass
class AlgebraColimit:
    algebra: TruncatedAlgebra
    legs: dict  # K-object -> {element: class}
    operad: OperadSpec

    def leg_report(self, G: AlgebraDiagram):
        """Legs are algebra maps on defined products; classes are generated by leg images."""
        T = self.algebra
        O, c = G.O, G.color
        report = []
        for k, leg in self.legs.items():
            A = G.algebras[k]
            for phi in O.operations():
                if phi.arity > 2:
                    continue
                for xs in A.inputs(phi):
                    img = T.op(phi, tuple(leg[x] for x in xs))
                    if img is not None and img != leg[A.act(phi, xs)]:
                        report.append(f"leg at {k} does not commute with {phi.label} on {xs!r}")
                        break
        reached = {cls for leg in self.legs.values() for cls in leg.values()}
        frontier = True
        while frontier:
            frontier = False
            for phi, args in T.defined_instances(2):
                if all(a in reached for a in args):
                    r = T.op(phi, args)
                    if r not in reached:
                        reached.add(r)
                        frontier = True
        if reached != set(T.classes):
            report.append(f"{len(set(T.classes) - reached)} classes not generated by the legs")
        for a, b, f in G.K.morphisms():
            for x in G.algebras[a].carrier(c).elements:
                if self.legs[b][G.maps[f][x]] != self.legs[a][x]:
                    report.append(f"legs do not form a cocone along {f}")
                    break
        return report


def colim_algebras(G: AlgebraDiagram, L: int, stabilize=True, OK=None) -> AlgebraColimit:
    OK = OK or cocartesian_operad(G.K, G.O)
    p = projection(OK, 1, G.O)
    p = _projection_cache(OK, G.O, p)
    A = diagram_to_algebra(G, OK)
    T = free_algebra(p, A, L, stabilize=stabilize)
    c = G.color
    legs = {k: {x: T.class_of(EnvObject(((k, c),), G.O.unit(c)), (x,))
                for x in G.algebras[k].carrier(c).elements} for k in G.K.objects}
    return AlgebraColimit(T, legs, OK)


_PROJ = {}


def _projection_cache(OK, O, p):
    """Reuse one projection per (O_K, O) so envelopes are shared across calls."""
    key = (id(OK), id(O))
    hit = _PROJ.get(key)
    if hit is not None and hit[0] is OK and hit[1] is O:
        return hit[2]
    _PROJ[key] = (OK, O, p)
    return p


# -- pushouts of commutative monoids -------------------------------------

@dataclass
class Quotient:
    """A partition of a finite monoid's elements with the induced product."""
    blocks: dict  # element -> block id (least element index)
    product: dict  # (block, block) -> block

    def __len__(self):
        return len(set(self.blocks.values()))

    def partition(self):
        out = {}
        for x, b in self.blocks.items():
            out.setdefault(b, []).append(x)
        return sorted(sorted(v) for v in out.values())


def _product_monoid(B: Monoid, C: Monoid):
    elems = tuple(itertools.product(B.elements, C.elements))
    return elems, (lambda x, y: (B.mul(x[0], y[0]), C.mul(x[1], y[1])))


def _quotient(elems, mul, uf):
    blocks = {x: uf.find(x) for x in elems}
    prod = {}
    for x in elems:
        for y in elems:
            key = (blocks[x], blocks[y])
            v = blocks[mul(x, y)]
            if prod.setdefault(key, v) != v:
                raise StructuralError("relation is not a congruence")
    return Quotient(blocks, prod)


def bar_coequalizer(A: Monoid, B: Monoid, C: Monoid, f, g) -> Quotient:
    """Coequalizer of B x A x C => B x C, (b f(a), c) ~ (b, g(a) c).

    This is the 1-truncation of the bar construction: levels 0 and 1 of the
    simplicial object B x A^n x C with its two face maps.
    """
    elems, mul = _product_monoid(B, C)
    uf = UnionFind(elems)
    for b in B.elements:
        for a in A.elements:
            for c in C.elements:
                uf.union((B.mul(b, f[a]), c), (b, C.mul(g[a], c)))
    return _quotient(elems, mul, uf)


def congruence_presentation(A: Monoid, B: Monoid, C: Monoid, f, g) -> Quotient:
    """Smallest congruence on B x C containing (f(a), 1) ~ (1, g(a)).

    Closure by fixpoint: keep multiplying related pairs by every element
    until nothing new is identified.
    """
    elems, mul = _product_monoid(B, C)
    pairs = {((f[a], C.one), (B.one, g[a])) for a in A.elements}
    uf = UnionFind(elems)
    for x, y in pairs:
        uf.union(x, y)
    changed = True
    while changed:
        changed = False
        classes = {}
        for x in elems:
            classes.setdefault(uf.find(x), []).append(x)
        for members in classes.values():
            for x, y in zip(members, members[1:]):
                for z in elems:
                    if uf.find(mul(z, x)) != uf.find(mul(z, y)):
                        uf.union(mul(z, x), mul(z, y))
                        changed = True
    return _quotient(elems, mul, uf)


def span_diagram(A: Monoid, B: Monoid, C: Monoid, f, g, O: OperadSpec, target=None) -> AlgebraDiagram:
    K = span_shape()
    algebras = {"a": monoid_algebra(O, A, target), "b": monoid_algebra(O, B, target),
                "c": monoid_algebra(O, C, target)}
    gens = {m: (f if m[2] == ("f",) else g) for _, _, m in K.morphisms() if len(m[2]) == 1}
    return AlgebraDiagram.from_generators(K, O, algebras, gens, name="span")


_SPAN = []


def span_shape():
    """One shared span category, so cocartesian operads and envelopes are reused."""
    if not _SPAN:
        _SPAN.append(span())
    return _SPAN[0]


@dataclass
class PushoutReport:
    bar: Quotient
    presentation: Quotient
    envelope: AlgebraColimit
    agree: bool
    detail: str = ""
    finality: object = None

    def __bool__(self):
        return self.agree


def pushout_commutative(A: Monoid, B: Monoid, C: Monoid, f, g, O: OperadSpec,
                        L=4, stabilize=False, OK=None) -> PushoutReport:
    """Three routes to B (x)_A C: bar coequalizer, envelope colimit, and
    congruence presentation, compared as quotients of B x C."""
    for M in (A, B, C):
        if not M.is_commutative():
            raise StructuralError(f"{M.name} is not commutative")
    bar = bar_coequalizer(A, B, C, f, g)
    pres = congruence_presentation(A, B, C, f, g)
    G = span_diagram(A, B, C, f, g, O)
    env = colim_algebras(G, L, stabilize=stabilize, OK=OK)
    T = env.algebra
    c = O.colors[0]
    com2 = O.ops_with_output(c, 2)[0]
    cls = {}
    for b, cc in itertools.product(B.elements, C.elements):
        x = EnvObject((("b", c), ("c", c)), com2)
        cls[(b, cc)] = T.class_of(x, (b, cc))
    detail = ""
    if bar.partition() != pres.partition():
        detail = "bar coequalizer and presentation give different partitions"
    else:
        env_part = {}
        for x, k in cls.items():
            env_part.setdefault(k, []).append(x)
        if sorted(sorted(v) for v in env_part.values()) != bar.partition():
            detail = "envelope classes induce a different partition of B x C"
        elif set(cls.values()) != set(T.classes):
            detail = "some envelope classes are not hit by B x C"
        else:
            elems, mul = _product_monoid(B, C)
            for x in elems:
                for y in elems:
                    if T.op(com2, (cls[x], cls[y])) != cls[mul(x, y)]:
                        detail = f"products disagree at {x} * {y}"
                        break
                if detail:
                    break
            unit = T.unit_class()
            if not detail and unit != cls[(B.one, C.one)]:
                detail = "unit classes disagree"
    return PushoutReport(bar, pres, env, not detail, detail)


def commutative_spans(max_size=3):
    """Every span B <- A -> C of commutative monoids up to the given size
    (monoids up to isomorphism, maps exhaustively)."""
    from .target import all_monoids
    monoids = [M for n in range(1, max_size + 1) for M in all_monoids(n, True)]
    for A in monoids:
        for B in monoids:
            fs = monoid_homs(A, B)
            if not fs:
                continue
            for C in monoids:
                for f in fs:
                    for g in monoid_homs(A, C):
                        yield A, B, C, f, g


# -- the Delta^op cut ------------------------------------------------------

def bar_cut(E, color, n_max=1):
    """The functor Delta^op (levels <= n_max) -> Env sending [n] to b a^n c.

    Letter j of b a^n c (0 is b, n+1 is c) goes along theta: [m] -> [n] to
    the least i with theta(i) >= j, or to c when there is none.
    """
    S = delta_op(n_max)
    P, O = E.P, E.O

    def word(n):
        cols = (("b", color),) + (("a", color),) * n + (("c", color),)
        ops = O.mul((color,) * (n + 2), color)
        return EnvObject(cols, ops[0])

    def mor(t):
        src_n, tgt_n, theta = t
        x, y = word(src_n), word(tgt_n)
        alpha = []
        for j in range(src_n + 2):
            hits = [i for i in range(tgt_n + 1) if theta[i] >= j]
            alpha.append(hits[0] if hits else tgt_n + 1)
        alpha = tuple(alpha)
        fib = [[i for i in range(len(alpha)) if alpha[i] == k] for k in range(tgt_n + 2)]
        psis = []
        for k in range(tgt_n + 2):
            ops = P.mul(tuple(x.colors[i] for i in fib[k]), y.colors[k])
            if len(ops) != 1:
                raise StructuralError(f"fibre {k} of {t} has {len(ops)} operations")
            psis.append(ops[0])
        f = EnvMorphism(x, y, alpha, tuple(psis), O.unit(color))
        if not E.is_valid(f):
            raise StructuralError(f"{t} does not give a valid envelope morphism")
        return f

    return S, word, mor


def pushout_finality(A: Monoid, B: Monoid, C: Monoid, f, g, O: OperadSpec, OK=None, L=3):
    """finality_check of the Delta^op cut against the envelope colimit at grade L."""
    OK = OK or cocartesian_operad(span_shape(), O)
    p = _projection_cache(OK, O, projection(OK, 1, O))
    E = build_envelope(p, L)
    G = span_diagram(A, B, C, f, g, O)
    F = extend_algebra(E, diagram_to_algebra(G, OK))
    J = E.category(L)
    S, word, mor = bar_cut(E, O.colors[0])
    u = Functor(S, J, word, mor, name="bar")
    laws = u.check_laws()
    res = finality_check(u, F.set_diagram(J))
    return res, laws


# -- sifted colimits -------------------------------------------------------

@dataclass
class SiftedReport:
    underlying: Quotient
    envelope: AlgebraColimit
    agree: bool
    slices: list
    detail: str = ""


_REFLEXIVE = []


def reflexive_pair_shape():
    if not _REFLEXIVE:
        _REFLEXIVE.append(delta_op(1))
    return _REFLEXIVE[0]


def reflexive_diagram(M1: Monoid, M0: Monoid, d0, d1, s, O, target=None) -> AlgebraDiagram:
    """M1 => M0 with common section s, as a diagram on Delta^op <= 1."""
    K = reflexive_pair_shape()
    for x in M0.elements:
        if d0[s[x]] != x or d1[s[x]] != x:
            raise StructuralError("not a reflexive pair: s is not a common section")
    algebras = {0: monoid_algebra(O, M0, target), 1: monoid_algebra(O, M1, target)}
    maps = {}
    for a, b, f in K.morphisms():
        t = f[2]
        if a == b == 0:
            maps[f] = {x: x for x in M0.elements}
        elif a == b == 1:
            # endomorphisms of [1] in Delta^op: monotone [1] -> [1]
            maps[f] = {x: x for x in M1.elements} if t == (0, 1) else \
                {x: s[(d1 if t == (0, 0) else d0)[x]] for x in M1.elements}
        elif a == 1:
            # theta: [0] -> [1] picks which face
            maps[f] = dict(d1 if t == (0,) else d0)
        else:
            maps[f] = dict(s)
    return AlgebraDiagram(K, O, algebras, maps, name="reflexive")


def coequalizer_of_carriers(M1: Monoid, M0: Monoid, d0, d1) -> Quotient:
    uf = UnionFind(M0.elements)
    for x in M1.elements:
        uf.union(d0[x], d1[x])
    return _quotient(M0.elements, M0.mul, uf)


def sifted_preservation_check(M1: Monoid, M0: Monoid, d0, d1, s, O: OperadSpec,
                              L=2, slice_levels=3, slice_points=((1, 1), (0, 2), (0, 1))) -> SiftedReport:
    """Coequalizer on underlying sets against the envelope colimit, plus the
    contractibility certificates of the diagonal slices of Delta^op."""
    if len(set(s.values())) != len(M0.elements):
        raise StructuralError("not a reflexive pair")
    G = reflexive_diagram(M1, M0, d0, d1, s, O)
    bad = G.check()
    if bad:
        raise StructuralError(f"reflexive pair is not a diagram of algebras: {bad[0]}")
    Q = coequalizer_of_carriers(M1, M0, d0, d1)
    env = colim_algebras(G, L)
    T = env.algebra
    leg0 = env.legs[0]
    detail = ""
    part = {}
    for x in M0.elements:
        part.setdefault(leg0[x], []).append(x)
    if sorted(sorted(v) for v in part.values()) != Q.partition():
        detail = "envelope classes induce a different partition of the carrier"
    elif set(leg0.values()) != set(T.classes):
        detail = "envelope has classes outside the image of M0"
    else:
        for phi in O.operations(2):
            for x, y in itertools.product(M0.elements, repeat=2):
                if T.op(phi, (leg0[x], leg0[y])) != leg0[M0.prod(_ordered(phi, (x, y)))]:
                    detail = f"products disagree at {x}, {y}"
                    break
    S = delta_op(slice_levels)
    slices = []
    for xs in slice_points:
        V = diagonal_slice(S, xs)
        slices.append((xs, len(V.objects), weak_contractibility_heuristic(V)))
    return SiftedReport(Q, env, not detail, slices, detail)


def _ordered(phi, xs):
    if phi.label and isinstance(phi.label, tuple) and all(isinstance(i, int) for i in phi.label):
        return tuple(xs[i] for i in phi.label)
    return xs


def reflexive_pairs(max_m1=4, max_m0=3, commutative=False, limit=None):
    """Reflexive pairs M1 => M0 of monoids with common section."""
    from .target import all_monoids
    count = 0
    for n1 in range(1, max_m1 + 1):
        for M1 in all_monoids(n1, commutative):
            for n0 in range(1, min(n1, max_m0) + 1):
                for M0 in all_monoids(n0, commutative):
                    homs10 = monoid_homs(M1, M0)
                    for s in monoid_homs(M0, M1):
                        ds = [d for d in homs10 if all(d[s[x]] == x for x in M0.elements)]
                        for d0, d1 in itertools.product(ds, repeat=2):
                            yield M1, M0, d0, d1, s
                            count += 1
                            if limit and count >= limit:
                                return


# -- weakly contractible shapes ---------------------------------------------

@dataclass
class ContractibleReport:
    shape: str
    verdict: object
    left: int
    right: int
    bijective: bool
    detail: str = ""


def _product_algebra(X: AlgebraTable, Y: AlgebraTable, O, name):
    c = O.colors[0]
    target = X.target
    carrier = target.tensor([X.carrier(c), Y.carrier(c)])

    def action(op, xs):
        return (X.act(op, tuple(x[0] for x in xs)), Y.act(op, tuple(x[1] for x in xs)))

    return AlgebraTable(O, target, {c: carrier}, action, name)


def tensor_diagram(G: AlgebraDiagram, A: AlgebraTable) -> AlgebraDiagram:
    """Objectwise G(k) (x) A with the constant diagram at A."""
    c = G.color
    algebras = {k: _product_algebra(G.algebras[k], A, G.O, f"{G.algebras[k].name}x{A.name}")
                for k in G.K.objects}
    maps = {}
    for a_, b_, f in G.K.morphisms():
        m = G.maps[f]
        maps[f] = {(x, a): (m[x], a) for x in G.algebras[a_].carrier(c).elements
                   for a in A.carrier(c).elements}
    return AlgebraDiagram(G.K, G.O, algebras, maps, name=f"{G.name}x{A.name}")


def contractible_compat_check(G: AlgebraDiagram, A: AlgebraTable, L=4) -> ContractibleReport:
    """Compare colim(G) (x) A with colim(G (x) A), both via the envelope route.

    For commutative algebras the tensor is the product of carriers, so the
    left side has |colim G| * |A| elements.
    """
    verdict = weak_contractibility_heuristic(G.K)
    left = colim_algebras(G, L, stabilize=False)
    right = colim_algebras(tensor_diagram(G, A), L, stabilize=False)
    c = G.color
    n_left = len(left.algebra) * len(A.carrier(c))
    n_right = len(right.algebra)
    bij, detail = False, ""
    if n_left != n_right:
        detail = f"|colim G x A| = {n_left} but |colim(G x A)| = {n_right}"
    else:
        # canonical comparison: (class of x at k, a) <- class of (x, a) at k
        mapping = {}
        for k in G.K.objects:
            for x in G.algebras[k].carrier(c).elements:
                for a in A.carrier(c).elements:
                    src = right.legs[k][(x, a)]
                    img = (left.legs[k][x], a)
                    if mapping.setdefault(src, img) != img:
                        detail = "comparison map is not well defined"
        bij = not detail and len(set(mapping.values())) == n_left == len(mapping)
        if not bij and not detail:
            detail = "comparison map is not bijective"
    return ContractibleReport(G.K.name, verdict, n_left, n_right, bij, detail)
