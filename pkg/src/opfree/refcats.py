"""Hand-coded reference categories.

None of these are derived from the envelope construction; they serve as
independent oracles for it. Morphisms are ``(source, target, data)``.
"""

from __future__ import annotations

import itertools
from math import perm

from .fincat import FiniteCategory, GradedCategory


def _compose_functions(g, f):
    return (f[0], g[1], tuple(g[2][i] for i in f[2]))


def _identity_function(n):
    return (n, n, tuple(range(n)))


def _graded(name, hom, compose, identity, L=None):
    G = GradedCategory(lambda n: (n,), hom, identity, compose, name=name)
    return G.truncate(L) if L is not None else G


def fin_inj(L=None):
    """Finite sets {0..n-1} and injections."""
    def hom(a, b):
        return [(a, b, t) for t in itertools.permutations(range(b), a)]
    return _graded("FinInj", hom, _compose_functions, _identity_function, L)


def delta_plus_inj(L=None):
    """Augmented semi-simplex category: ordinals and strictly increasing maps."""
    def hom(a, b):
        return [(a, b, t) for t in itertools.combinations(range(b), a)]
    return _graded("DeltaPlusInj", hom, _compose_functions, _identity_function, L)


def fin_iso(L=None):
    """Finite sets and bijections: the disjoint union of the groups Sigma_n."""
    def hom(a, b):
        return [(a, b, t) for t in itertools.permutations(range(b))] if a == b else []
    return _graded("FinIso", hom, _compose_functions, _identity_function, L)


def fin(L=None):
    """Finite sets and all functions."""
    def hom(a, b):
        return [(a, b, t) for t in itertools.product(range(b), repeat=a)]
    return _graded("Fin", hom, _compose_functions, _identity_function, L)


def fin_ordered_fibers(L=None):
    """Functions equipped with a linear order on each fibre.

    A morphism n -> m is stored as a tuple of m tuples: entry j lists the
    preimage of j in its chosen order.
    """
    def hom(a, b):
        out = []
        for f in itertools.product(range(b), repeat=a):
            fibres = [[i for i in range(a) if f[i] == j] for j in range(b)]
            for orders in itertools.product(*(itertools.permutations(fb) for fb in fibres)):
                out.append((a, b, tuple(orders)))
        return out

    def compose(g, f):
        fibres = tuple(tuple(i for j in g[2][k] for i in f[2][j]) for k in range(g[1]))
        return (f[0], g[1], fibres)

    def identity(n):
        return (n, n, tuple((i,) for i in range(n)))

    return _graded("FinOrd", hom, compose, identity, L)


def rising(m, n):
    """|hom(n, m)| in fin_ordered_fibers: m (m+1) ... (m+n-1)."""
    r = 1
    for i in range(n):
        r *= m + i
    return r


def injection_count(n, m):
    return perm(m, n) if n <= m else 0


def delta_op(n_max):
    """The opposite of the simplex category on [0..n_max].

    A morphism a -> b is a monotone map [b] -> [a] of ordinals, recorded as
    its tuple of values.
    """
    def hom(a, b):
        return [(a, b, t) for t in itertools.combinations_with_replacement(range(a + 1), b + 1)]

    def compose(g, f):
        # f: a -> b is theta_f: [b] -> [a]; g: b -> c is theta_g: [c] -> [b]
        return (f[0], g[1], tuple(f[2][j] for j in g[2]))

    def identity(n):
        return (n, n, tuple(range(n + 1)))

    return FiniteCategory(range(n_max + 1), hom, identity, compose,
                          name=f"DeltaOp<={n_max}", grade=lambda n: n)


def reflexive_pair():
    """Objects 0, 1; d0, d1: 1 -> 0 with common section s: 0 -> 1.

    Identical to the truncation of Delta^op at [1].
    """
    return delta_op(1)


def finite_category(objects, generators, relations=(), name="K"):
    """Free category on a graph modulo nothing: only for acyclic shapes.

    ``generators`` maps a name to (source, target); all composable paths are
    morphisms. Suitable for posets-like shapes such as spans.
    """
    objects = tuple(objects)
    paths = {(x, x): [(x, x, ())] for x in objects}
    frontier = [(x, x, ()) for x in objects]
    while frontier:
        new = []
        for (a, b, p) in frontier:
            for name_, (s, t) in generators.items():
                if s == b:
                    q = (a, t, p + (name_,))
                    paths.setdefault((a, t), []).append(q)
                    new.append(q)
        frontier = new
        if sum(len(v) for v in paths.values()) > 10_000:
            raise ValueError("shape is not acyclic")

    def compose(g, f):
        return (f[0], g[1], f[2] + g[2])

    return FiniteCategory(objects, lambda a, b: paths.get((a, b), []),
                          lambda x: (x, x, ()), compose, name=name)


def span():
    """b <- a -> c."""
    return finite_category(("a", "b", "c"), {"f": ("a", "b"), "g": ("a", "c")}, name="span")


def point():
    return finite_category(("*",), {}, name="point")


def discrete(n=2):
    return finite_category(tuple(f"x{i}" for i in range(n)), {}, name=f"disc{n}")


def arrow():
    return finite_category(("0", "1"), {"h": ("0", "1")}, name="arrow")


def span_words(L=None):
    """Words b^k a^l c^m and letter maps keeping b-letters on b, c-letters on c.

    Letters are numbered 0..k+l+m-1 in the order b..., a..., c...; a map sends
    each letter to a letter of the target, b-letters to b-letters and
    c-letters to c-letters, a-letters anywhere.
    """
    def objs(n):
        return [(k, l, n - k - l) for k in range(n + 1) for l in range(n - k + 1)]

    def hom(x, y):
        k, l, m = x
        X, Y, Z = y
        allowed = ([range(X)] * k + [range(X + Y + Z)] * l
                   + [range(X + Y, X + Y + Z)] * m)
        return [(x, y, t) for t in itertools.product(*allowed)]

    def identity(x):
        return (x, x, tuple(range(sum(x))))

    G = GradedCategory(objs, hom, identity, _compose_functions, name="SpanWords")
    return G.truncate(L) if L is not None else G
