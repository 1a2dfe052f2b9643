"""Finite-set targets, algebra tables, monoids, and the slice monoidal category."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .fincat import FiniteCategory, SetDiagram, StructuralError, colimit_set, weak_contractibility_heuristic
from .operad import Op, OperadSpec, composable_instances


@dataclass(frozen=True)
class FinSet:
    elements: tuple
    base: object = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass
class CompatResult:
    ok: bool
    shape: str
    detail: str = ""

    def __bool__(self):
        return self.ok


class FinSetTarget:
    """Finite sets (optionally pointed) under cartesian product.

    Pointed colimits identify all basepoints before quotienting, so coproducts
    are wedges and the cartesian product no longer distributes over them.
    """

    def __init__(self, pointed: bool):
        self.pointed = pointed
        self.name = "ptdfinset" if pointed else "finset"
        self._compat = {}

    def __repr__(self):
        return f"<target {self.name}>"

    def obj(self, elements, base=None):
        elements = tuple(elements)
        if self.pointed:
            if base is None:
                raise StructuralError("pointed set needs a basepoint")
            if base not in elements:
                raise StructuralError(f"basepoint {base!r} not among elements")
        return FinSet(elements, base if self.pointed else None)

    def unit(self):
        return FinSet(((),), () if self.pointed else None)

    def tensor(self, objs):
        objs = list(objs)
        elems = tuple(itertools.product(*(o.elements for o in objs)))
        base = tuple(o.base for o in objs) if self.pointed else None
        return FinSet(elems, base)

    def colimit(self, D: SetDiagram):
        return colimit_set(D)

    def compatible_with(self, shape: FiniteCategory, probes=None) -> CompatResult:
        """Does X x - commute with colimits of this shape?

        Checked extensionally on constant diagrams and on probe diagrams: the
        canonical map colim(X x D) -> X x colim(D) must be a bijection.
        Results without extra probes are cached per shape.
        """
        if probes is None and shape in self._compat:
            return self._compat[shape]
        res = self._compatible(shape, probes)
        if probes is None:
            self._compat[shape] = res
        return res

    def _compatible(self, shape, probes):
        test_sets = [self.obj(("*", "x"), "*"), self.obj(("*", "x", "y"), "*")] if self.pointed \
            else [self.obj(("x",)), self.obj(("x", "y"))]
        diagrams = [SetDiagram(shape, lambda _, S=S: S.elements, lambda f: (lambda e: e),
                               basepoint=(lambda _, S=S: S.base) if self.pointed else None)
                    for S in test_sets]
        diagrams.extend(probes or [])
        for D in diagrams:
            for X in test_sets:
                ok, detail = self._compare(shape, D, X)
                if not ok:
                    return CompatResult(False, shape.name, detail)
        return CompatResult(True, shape.name, "canonical comparison bijective on all probes")

    def _compare(self, shape, D, X):
        XD = SetDiagram(shape, lambda s: tuple(itertools.product(X.elements, D.obj(s))),
                        lambda f: (lambda e, g=D.mor(f): (e[0], g(e[1]))),
                        basepoint=(lambda s: (X.base, D.basepoint(s))) if self.pointed else None)
        # the comparison map is surjective, so equal sizes mean bijective
        left = colimit_set(XD)
        right = colimit_set(D)
        n_right = len(X) * len(right)
        if len(left) != n_right:
            return False, f"|colim(X x D)| = {len(left)} but |X x colim D| = {n_right}"
        return True, ""


_TARGETS = {}


def finset_cartesian():
    if False not in _TARGETS:
        _TARGETS[False] = FinSetTarget(pointed=False)
    return _TARGETS[False]


def ptdfinset_cartesian():
    if True not in _TARGETS:
        _TARGETS[True] = FinSetTarget(pointed=True)
    return _TARGETS[True]


def shape_certificate(target: FinSetTarget, shape: FiniteCategory):
    """Compatibility of the target with a colimit shape, with a contractibility
    verdict attached for pointed targets."""
    res = target.compatible_with(shape)
    if target.pointed:
        verdict = weak_contractibility_heuristic(shape)
        return res, verdict
    return res, None


# -- algebras ---------------------------------------------------------------

class AlgebraTable:
    """A P-algebra in a finite-set target.

    ``carriers`` maps each color to a FinSet; ``action(op, xs)`` evaluates the
    operation ``op`` on a tuple of inputs, one per input slot.
    """

    def __init__(self, operad: OperadSpec, target: FinSetTarget, carriers, action, name="A"):
        self.operad = operad
        self.target = target
        self.carriers = dict(carriers)
        self._action = action
        self._memo = {}
        self.name = name
        missing = [c for c in operad.colors if c not in self.carriers]
        if missing:
            raise StructuralError(f"{name}: no carrier for colors {missing}")

    def __repr__(self):
        return f"AlgebraTable({self.name!r} over {self.operad.name})"

    def carrier(self, color) -> FinSet:
        return self.carriers[color]

    def act(self, op: Op, xs):
        key = (op, tuple(xs))
        r = self._memo.get(key)
        if r is None:
            r = self._memo[key] = self._action(op, key[1])
        return r

    def inputs(self, op: Op):
        return itertools.product(*(self.carriers[c].elements for c in op.inputs))


def algebra_check(A: AlgebraTable, cap=None, max_violations=50):
    """Closure, unit, equivariance and composition equations, exhaustively."""
    P = A.operad
    cap = min(P.cap, 3) if cap is None else cap
    report = []

    def add(msg):
        report.append(msg)
        return len(report) >= max_violations

    for c in P.colors:
        u = P.unit(c)
        for x in A.carrier(c):
            if A.act(u, (x,)) != x:
                if add(f"{A.name}: unit of {c} moves {x!r}"):
                    return report
    if A.target.pointed:
        for op in P.operations():
            if op.arity <= cap:
                base = tuple(A.carrier(c).base for c in op.inputs)
                if A.act(op, base) != A.carrier(op.output).base:
                    if add(f"{A.name}: {op} does not preserve basepoints"):
                        return report
    for op in P.operations():
        if op.arity > cap:
            continue
        out = set(A.carrier(op.output).elements)
        for xs in A.inputs(op):
            y = A.act(op, xs)
            if y not in out:
                if add(f"{A.name}: {op} sends {xs!r} outside its carrier"):
                    return report
        for sigma in itertools.permutations(range(op.arity)):
            moved = P.act(op, sigma)
            for ys in A.inputs(moved):
                zs = [None] * op.arity
                for i, s in enumerate(sigma):
                    zs[s] = ys[i]
                if A.act(moved, ys) != A.act(op, zs):
                    if add(f"{A.name}: equivariance fails at {op}, {sigma}, {ys!r}"):
                        return report
    for phi, psis in composable_instances(P, cap):
        top = P.gamma(phi, psis)
        for xs in A.inputs(top):
            inner, off = [], 0
            for p in psis:
                inner.append(A.act(p, xs[off:off + p.arity]))
                off += p.arity
            if A.act(top, xs) != A.act(phi, inner):
                if add(f"{A.name}: composition fails at {phi}; {psis} on {xs!r}"):
                    return report
    return report


@dataclass
class AlgebraMap:
    source: AlgebraTable
    target: AlgebraTable
    maps: dict  # color -> {element: element}

    def __call__(self, color, x):
        return self.maps[color][x]

    def check(self, cap=None):
        P = self.source.operad
        cap = P.cap if cap is None else cap
        report = []
        for op in P.operations():
            if op.arity > cap:
                continue
            for xs in self.source.inputs(op):
                lhs = self(op.output, self.source.act(op, xs))
                rhs = self.target.act(op, [self(c, x) for c, x in zip(op.inputs, xs)])
                if lhs != rhs:
                    report.append(f"map does not commute with {op} at {xs!r}")
                    break
        return report


# -- monoids ----------------------------------------------------------------

@dataclass(frozen=True)
class Monoid:
    elements: tuple
    table: tuple  # table[i][j] = index of elements[i] * elements[j]
    unit: int = 0
    name: str = "M"

    def __post_init__(self):
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(self.elements)})

    def mul(self, a, b):
        pos = self._pos
        return self.elements[self.table[pos[a]][pos[b]]]

    @property
    def one(self):
        return self.elements[self.unit]

    def prod(self, xs):
        r = self.one
        for x in xs:
            r = self.mul(r, x)
        return r

    def is_associative(self):
        n = len(self.elements)
        t = self.table
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))

    def is_unital(self):
        n = len(self.elements)
        t = self.table
        return all(t[self.unit][a] == a == t[a][self.unit] for a in range(n))

    def is_commutative(self):
        n = len(self.elements)
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def __str__(self):
        return f"{self.name}{list(self.elements)}"


def monoid_from_function(elements, mul, unit, name="M"):
    elements = tuple(elements)
    pos = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(pos[mul(a, b)] for b in elements) for a in elements)
    return Monoid(elements, table, pos[unit], name)


def cyclic_group(n, name=None):
    return monoid_from_function(range(n), lambda a, b: (a + b) % n, 0, name or f"Z{n}")


def max_monoid(n=2, name=None):
    return monoid_from_function(range(n), max, 0, name or f"max{n}")


def idempotent_monoid():
    """{e, m} with m*m = m."""
    return monoid_from_function(("e", "m"), lambda a, b: "m" if "m" in (a, b) else "e", "e", "idem")


def symmetric_group3():
    perms = list(itertools.permutations(range(3)))
    return monoid_from_function(perms, lambda s, t: tuple(s[t[i]] for i in range(3)),
                                (0, 1, 2), "S3")


def _canonical(table, n):
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm
        inv = [0] * n
        for i, j in enumerate(p):
            inv[j] = i
        t = tuple(tuple(p[table[inv[a]][inv[b]]] for b in range(n)) for a in range(n))
        if best is None or t < best:
            best = t
    return best


@lru_cache(maxsize=None)
def all_monoids(n, commutative=False):
    """Every monoid on n elements up to isomorphism; element 0 is the unit."""
    if n == 0:
        return ()
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    found = set()
    t = [[None] * n for _ in range(n)]
    for a in range(n):
        t[0][a] = t[a][0] = a

    def consistent():
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                if ab is None:
                    continue
                for c in range(n):
                    bc = t[b][c]
                    if bc is None:
                        continue
                    l, r = t[ab][c], t[a][bc]
                    if l is not None and r is not None and l != r:
                        return False
        return True

    def go(k):
        if k == len(cells):
            found.add(_canonical(t, n))
            return
        a, b = cells[k]
        if commutative and b < a:
            t[a][b] = t[b][a]
            if consistent():
                go(k + 1)
            t[a][b] = None
            return
        for v in range(n):
            t[a][b] = v
            if consistent():
                go(k + 1)
        t[a][b] = None

    go(0)
    return tuple(Monoid(tuple(range(n)), tbl, 0, f"M{n}.{i}") for i, tbl in enumerate(sorted(found)))


def monoid_homs(M: Monoid, N: Monoid):
    """All unit-preserving multiplicative maps M -> N, as dicts."""
    out = []
    others = [x for x in M.elements if x != M.one]
    for images in itertools.product(N.elements, repeat=len(others)):
        f = dict(zip(others, images))
        f[M.one] = N.one
        if all(f[M.mul(a, b)] == N.mul(f[a], f[b]) for a in M.elements for b in M.elements):
            out.append(f)
    return out


def monoid_algebra(O: OperadSpec, M: Monoid, target=None, name=None):
    """M as an algebra over com, e1, e0 or triv.

    An e1 operation multiplies inputs in its order; a com operation requires
    M commutative; e0 and triv act by unit and identity.
    """
    target = target or finset_cartesian()
    if O.name == "com" and not M.is_commutative():
        raise StructuralError(f"{M.name} is not commutative")
    carrier = target.obj(M.elements, M.one) if target.pointed else target.obj(M.elements)

    def action(op, xs):
        if O.name == "e1":
            return M.prod(xs[i] for i in op.label)
        return M.prod(xs)

    return AlgebraTable(O, target, {c: carrier for c in O.colors}, action, name or M.name)


def pointed_set_algebra(E0: OperadSpec, elements, base, target=None, name="X"):
    """A pointed set as an e0-algebra: the nullary operation picks the basepoint."""
    target = target or finset_cartesian()
    carrier = target.obj(elements, base) if target.pointed else target.obj(elements)

    def action(op, xs):
        return base if op.arity == 0 else xs[0]

    return AlgebraTable(E0, target, {c: carrier for c in E0.colors}, action, name)


def set_algebra(P: OperadSpec, elements, target=None, name="X"):
    """A bare set as an algebra over an operad whose operations are all unary units."""
    target = target or finset_cartesian()
    for op in P.operations():
        if op.arity != 1 or not P.is_unit(op):
            raise StructuralError(f"{P.name} has the non-identity operation {op}")
    carrier = target.obj(elements)
    return AlgebraTable(P, target, {c: carrier for c in P.colors}, lambda op, xs: xs[0], name)


def restrict_algebra(A: AlgebraTable, p, name=None):
    """Restriction along an operad map p: P -> O of an O-algebra."""
    P = p.source
    return AlgebraTable(P, A.target, {c: A.carrier(p.color(c)) for c in P.colors},
                        lambda op, xs: A.act(p(op), xs), name or f"{p.name}^*{A.name}")


# -- slice monoidal category ------------------------------------------------

@dataclass(frozen=True)
class SliceObject:
    carrier: FinSet
    structure: tuple  # image of each element, in carrier order

    def at(self, x):
        return self.structure[self.carrier.elements.index(x)]


class SliceSMC:
    """Objects over a commutative algebra A: pairs (X, x: X -> A)."""

    def __init__(self, target: FinSetTarget, A: AlgebraTable):
        if len(A.operad.colors) != 1:
            raise StructuralError("slice needs a single-colored algebra")
        self.target = target
        self.A = A
        self.color = A.operad.colors[0]
        self.O = A.operad

    def _mul(self, arity):
        ops = list(self.O.mul((self.color,) * arity, self.color))
        if not ops:
            raise StructuralError(f"{self.O.name} has no operation of arity {arity}")
        return ops[0]

    def unit(self):
        return SliceObject(self.target.unit(), (self.A.act(self._mul(0), ()),))

    def tensor(self, X: SliceObject, Y: SliceObject, op=None):
        op = op or self._mul(2)
        T = self.target.tensor([X.carrier, Y.carrier])
        return SliceObject(T, tuple(self.A.act(op, (X.at(a), Y.at(b))) for a, b in T.elements))

    def fiber(self, X: FinSet):
        """All objects of the slice lying over X."""
        return [SliceObject(X, s) for s in
                itertools.product(self.A.carrier(self.color).elements, repeat=len(X))]

    def hom(self, X: SliceObject, Y: SliceObject):
        out = []
        for images in itertools.product(Y.carrier.elements, repeat=len(X.carrier)):
            f = dict(zip(X.carrier.elements, images))
            if all(Y.at(f[x]) == X.at(x) for x in X.carrier.elements):
                out.append(f)
        return out

    def project(self, X: SliceObject):
        return X.carrier

    def check_conservative(self, objects):
        """Every slice map whose underlying map is bijective has a slice inverse."""
        for X in objects:
            for Y in objects:
                for f in self.hom(X, Y):
                    if len(set(f.values())) == len(f) == len(Y.carrier):
                        inv = {v: k for k, v in f.items()}
                        if any(X.at(inv[y]) != Y.at(y) for y in Y.carrier.elements):
                            return False
        return True


def slice_monoidal(C: FinSetTarget, A: AlgebraTable) -> SliceSMC:
    return SliceSMC(C, A)
