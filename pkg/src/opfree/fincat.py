"""Finite and graded categories, set-valued diagrams and their colimits.

Morphisms are opaque hashable values. A morphism value must not appear in
two different hom-sets of the same category; every shipped category encodes
its source and target inside the morphism value to guarantee this.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence


class StructuralError(ValueError):
    """A table is malformed (not merely law-violating)."""


class UnionFind:
    """Union-find whose class representative is always the least member."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        for members in out.values():
            members.sort()
        return dict(sorted(out.items()))


def _as_callable(table):
    if table is None or callable(table):
        return table
    return table.__getitem__


class FiniteCategory:
    """A category with finitely many objects and finite hom-sets.

    ``homs`` is either a dict ``(a, b) -> morphisms`` or a callable
    ``hom(a, b)``; hom-sets are materialised lazily and cached. ``compose(g, f)``
    returns ``g . f`` for ``f: a -> b``, ``g: b -> c``. ``generators`` (same
    shape as ``homs``) may list a subset of morphisms that generates the
    category under composition; colimits only need generators.
    """

    def __init__(self, objects, homs, identity, compose, generators=None,
                 name="C", grade=None):
        self.objects = tuple(objects)
        self._index = {x: i for i, x in enumerate(self.objects)}
        if len(self._index) != len(self.objects):
            raise StructuralError(f"{name}: duplicate objects")
        if isinstance(homs, dict):
            table = homs
            homs = lambda a, b: table.get((a, b), ())
        self._hom_fn = homs
        self._gen_fn = generators if not isinstance(generators, dict) else (
            lambda a, b, t=generators: t.get((a, b), ()))
        self._identity = _as_callable(identity)
        self._compose = compose
        self._hom_cache = {}
        self._gen_cache = {}
        self._comp_cache = {}
        self.name = name
        self._grade = _as_callable(grade)

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, {len(self.objects)} objects)"

    def index(self, x):
        return self._index[x]

    def __contains__(self, x):
        return x in self._index

    def grade(self, x):
        return self._grade(x) if self._grade else 0

    def hom(self, a, b):
        key = (a, b)
        if key not in self._hom_cache:
            self._hom_cache[key] = tuple(self._hom_fn(a, b))
        return self._hom_cache[key]

    def generating_hom(self, a, b):
        if self._gen_fn is None:
            return self.hom(a, b)
        key = (a, b)
        if key not in self._gen_cache:
            self._gen_cache[key] = tuple(self._gen_fn(a, b))
        return self._gen_cache[key]

    def identity(self, x):
        return self._identity(x)

    def compose(self, g, f):
        key = (g, f)
        r = self._comp_cache.get(key)
        if r is None:
            r = self._comp_cache[key] = self._compose(g, f)
        return r

    def morphisms(self):
        for a in self.objects:
            for b in self.objects:
                for f in self.hom(a, b):
                    yield a, b, f

    def generating_morphisms(self):
        for a in self.objects:
            for b in self.objects:
                for f in self.generating_hom(a, b):
                    yield a, b, f

    def hom_profile(self):
        return {(a, b): len(self.hom(a, b)) for a in self.objects for b in self.objects}

    def full_subcategory(self, objects, name=None):
        objects = tuple(objects)
        return FiniteCategory(objects, self.hom, self.identity, self.compose,
                              generators=self.generating_hom if self._gen_fn else None,
                              name=name or f"{self.name}|sub", grade=self._grade)

    def opposite(self, name=None):
        return FiniteCategory(
            self.objects, lambda a, b: self.hom(b, a), self.identity,
            lambda g, f: self.compose(f, g),
            generators=(lambda a, b: self.generating_hom(b, a)) if self._gen_fn else None,
            name=name or f"{self.name}^op", grade=self._grade)

    def to_dot(self, generators_only=True):
        """DOT rendering; edges are generating (non-identity) morphisms."""
        def q(v):
            return '"' + str(v).replace("\\", "\\\\").replace('"', '\\"') + '"'

        lines = [f'digraph {q(self.name)} {{']
        for x in self.objects:
            lines.append(f'  n{self.index(x)} [label={q(x)}];')
        for a in self.objects:
            for b in self.objects:
                homs = self.generating_hom(a, b) if generators_only else self.hom(a, b)
                for f in homs:
                    if a == b and f == self.identity(a):
                        continue
                    lines.append(f'  n{self.index(a)} -> n{self.index(b)} [label={q(f)}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_table(self):
        """Workspace category table: named objects and morphisms, identities,
        and the full composition table as [g, f, g.f] triples."""
        objs = {x: f"o{i}" for i, x in enumerate(self.objects)}
        mors, names = {}, {}
        for a, b, f in self.morphisms():
            names[(a, b, f)] = n = f"m{len(names)}"
            mors[n] = [objs[a], objs[b]]
        gens = [names[(a, b, f)] for a, b, f in self.generating_morphisms() if f != self.identity(a)]
        compose = [[names[(b, c, g)], names[(a, b, f)], names[(a, c, self.compose(g, f))]]
                   for a in self.objects for b in self.objects for c in self.objects
                   for f in self.hom(a, b) for g in self.hom(b, c)]
        return {"builder": "table", "name": self.name,
                "objects": list(objs.values()), "labels": {objs[x]: repr(x) for x in self.objects},
                "grades": {objs[x]: self.grade(x) for x in self.objects},
                "morphisms": mors, "identities": {objs[x]: names[(x, x, self.identity(x))] for x in self.objects},
                "generators": gens, "compose": compose}


def category_from_table(spec, name=None) -> FiniteCategory:
    """Inverse of ``FiniteCategory.to_table``; morphisms are their names."""
    objects = tuple(spec["objects"])
    homs = {}
    for m, (a, b) in spec["morphisms"].items():
        if a not in objects or b not in objects:
            raise StructuralError(f"morphism {m!r} has an unknown endpoint")
        homs.setdefault((a, b), []).append(m)
    table = {(g, f): h for g, f, h in spec["compose"]}

    def compose(g, f):
        if (g, f) not in table:
            raise StructuralError(f"composite {g} . {f} missing from the table")
        return table[(g, f)]

    gens = None
    if "generators" in spec:
        gset = set(spec["generators"]) | set(spec["identities"].values())
        gens = {k: [m for m in v if m in gset] for k, v in homs.items()}
    return FiniteCategory(objects, homs, dict(spec["identities"]), compose, generators=gens,
                          name=name or spec.get("name", "C"), grade=spec.get("grades"))


def check_category_laws(C: FiniteCategory, max_violations=50):
    """Exhaustive unit and associativity check.

    Returns a list of violation strings; an empty list means C is a category.
    Raises StructuralError when a composite is undefined or lands outside
    the expected hom-set.
    """
    report = []
    objs = C.objects
    homset = {(a, b): set(C.hom(a, b)) for a in objs for b in objs}

    def comp(g, f, a, b, c):
        try:
            h = C.compose(g, f)
        except Exception as exc:  # noqa: BLE001 - reported as structural
            raise StructuralError(f"compose undefined on ({g!r}, {f!r}): {exc}") from exc
        if h not in homset[(a, c)]:
            raise StructuralError(
                f"compose({g!r}, {f!r}) = {h!r} is not in hom({a!r}, {c!r})")
        return h

    for a in objs:
        ida = C.identity(a)
        if ida not in homset[(a, a)]:
            raise StructuralError(f"identity of {a!r} is not an endomorphism")
        for b in objs:
            idb = C.identity(b)
            for f in C.hom(a, b):
                if comp(idb, f, a, b, b) != f:
                    report.append(f"left unit fails: id_{b} . {f}")
                if comp(f, ida, a, a, b) != f:
                    report.append(f"right unit fails: {f} . id_{a}")
    for a, b, c, d in itertools.product(objs, repeat=4):
        hab, hbc, hcd = C.hom(a, b), C.hom(b, c), C.hom(c, d)
        if not (hab and hbc and hcd):
            continue
        for f in hab:
            for g in hbc:
                gf = comp(g, f, a, b, c)
                for h in hcd:
                    if comp(h, gf, a, c, d) != comp(comp(h, g, b, c, d), f, a, b, d):
                        report.append(f"associativity fails: ({h}, {g}, {f})")
                        if len(report) >= max_violations:
                            return report
    return report


class GradedCategory:
    """A category presented grade by grade; ``truncate(L)`` is finite.

    Objects of ``truncate(L)`` are listed grade by grade, so the object order
    of ``truncate(L)`` is a prefix of that of ``truncate(L + 1)``.
    """

    def __init__(self, grade_objects, hom, identity, compose, generators=None, name="G"):
        self._grade_objects = grade_objects
        self._hom = hom
        self._identity = identity
        self._compose = compose
        self._generators = generators
        self.name = name
        self._truncations = {}
        self._grade_of = {}

    def objects_of_grade(self, n):
        objs = tuple(self._grade_objects(n))
        for x in objs:
            self._grade_of[x] = n
        return objs

    def grade(self, x):
        return self._grade_of[x]

    def truncate(self, L) -> FiniteCategory:
        if L not in self._truncations:
            objs = [x for n in range(L + 1) for x in self.objects_of_grade(n)]
            self._truncations[L] = FiniteCategory(
                objs, self._hom, self._identity, self._compose,
                generators=self._generators, name=f"{self.name}<={L}", grade=self.grade)
        return self._truncations[L]


@dataclass
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    obj: Callable
    mor: Callable
    name: str = "F"

    def __post_init__(self):
        self.obj = _as_callable(self.obj)
        self.mor = _as_callable(self.mor)

    def check_laws(self):
        report = []
        S, T = self.source, self.target
        for a in S.objects:
            if self.mor(S.identity(a)) != T.identity(self.obj(a)):
                report.append(f"{self.name} does not preserve id_{a}")
            for b in S.objects:
                for f in S.hom(a, b):
                    if self.mor(f) not in T.hom(self.obj(a), self.obj(b)):
                        report.append(f"{self.name}({f}) has wrong endpoints")
        for a, b, c in itertools.product(S.objects, repeat=3):
            for f in S.hom(a, b):
                for g in S.hom(b, c):
                    if self.mor(S.compose(g, f)) != T.compose(self.mor(g), self.mor(f)):
                        report.append(f"{self.name} does not preserve {g} . {f}")
        return report


class SetDiagram:
    """A functor from a finite (or graded) category into finite sets.

    ``obj(x)`` returns a tuple of hashable elements; ``mor(f)`` returns a
    function on elements. The ``basepoint`` callable, when given, marks the
    diagram as pointed-set valued.
    """

    def __init__(self, source, obj, mor, basepoint=None, name="D"):
        self.source = source
        self._obj = _as_callable(obj)
        self._mor = _as_callable(mor)
        self._obj_cache = {}
        self._pos_cache = {}
        self.basepoint = basepoint
        self.name = name

    def obj(self, x):
        r = self._obj_cache.get(x)
        if r is None:
            r = self._obj_cache[x] = tuple(self._obj(x))
        return r

    def position(self, x, a):
        pos = self._pos_cache.get(x)
        if pos is None:
            pos = self._pos_cache[x] = {e: i for i, e in enumerate(self.obj(x))}
        return pos[a]

    def mor(self, f):
        m = self._mor(f)
        return m if callable(m) else m.__getitem__

    def restrict(self, source):
        return SetDiagram(source, self.obj, self._mor, self.basepoint, self.name)

    def precompose(self, u: Functor):
        return SetDiagram(u.source, lambda i: self.obj(u.obj(i)),
                          lambda f: self.mor(u.mor(f)), None, f"{self.name}.{u.name}")

    def check_functor_laws(self):
        report = []
        C = self.source
        for a in C.objects:
            ida = self.mor(C.identity(a))
            if any(ida(e) != e for e in self.obj(a)):
                report.append(f"{self.name}(id_{a}) is not the identity")
        for a, b, c in itertools.product(C.objects, repeat=3):
            for f in C.hom(a, b):
                Ff = self.mor(f)
                for g in C.hom(b, c):
                    Fg, Fgf = self.mor(g), self.mor(C.compose(g, f))
                    if any(Fg(Ff(e)) != Fgf(e) for e in self.obj(a)):
                        report.append(f"{self.name} fails on {g} . {f}")
        return report


@dataclass
class Colimit:
    """Quotient of the tagged disjoint union; a tag is (object index, element index).

    Class representatives are least tags, so objects earlier in the source
    order (lower grades) win.
    """

    diagram: SetDiagram
    classes: tuple
    members: dict
    _find: dict = field(repr=False)

    def leg(self, x, a):
        d = self.diagram
        return self._find[(d.source.index(x), d.position(x, a))]

    def cls_of_tag(self, tag):
        return self._find[tag]

    def element(self, tag):
        d = self.diagram
        x = d.source.objects[tag[0]]
        return x, d.obj(x)[tag[1]]

    def __len__(self):
        return len(self.classes)

    def cocone(self):
        return SetCocone(self.diagram, self.classes,
                         {x: {a: self.leg(x, a) for a in self.diagram.obj(x)}
                          for x in self.diagram.source.objects})


def colimit_set(D: SetDiagram, generators_only=True) -> Colimit:
    """Colimit of a finite set-valued diagram via union-find.

    Pointed diagrams have all basepoints identified first; an empty pointed
    diagram yields a one-point apex. Internally tags are numbered
    consecutively, so the least number is also the least tag.
    """
    C = D.source
    if not isinstance(C, FiniteCategory):
        raise StructuralError("colimit_set needs a finite source; use truncated_colimit")
    offsets = []
    total = 0
    for x in C.objects:
        offsets.append(total)
        total += len(D.obj(x))
    parent = list(range(total))

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(i, j):
        i, j = find(i), find(j)
        if i != j:
            if j < i:
                i, j = j, i
            parent[j] = i

    morphisms = C.generating_morphisms() if generators_only else C.morphisms()
    for a, b, f in morphisms:
        Ff = D.mor(f)
        oa, ob = offsets[C.index(a)], offsets[C.index(b)]
        pos = D.position
        for j, e in enumerate(D.obj(a)):
            union(oa + j, ob + pos(b, Ff(e)))
    if D.basepoint is not None and C.objects:
        base = [offsets[C.index(x)] + D.position(x, D.basepoint(x)) for x in C.objects]
        for t in base[1:]:
            union(base[0], t)
    tag = []
    for i, x in enumerate(C.objects):
        tag.extend((i, j) for j in range(len(D.obj(x))))
    members = {}
    for k in range(total):
        members.setdefault(tag[find(k)], []).append(tag[k])
    if D.basepoint is not None and not members:
        members = {("*",): []}
    find_tag = {t: rep for rep, ts in members.items() for t in ts}
    return Colimit(D, tuple(members), members, find_tag)


@dataclass
class SetCocone:
    diagram: SetDiagram
    apex: tuple
    legs: dict  # object -> {element: apex element}

    def check(self):
        report = []
        C, D = self.diagram.source, self.diagram
        for a, b, f in C.morphisms():
            Ff = D.mor(f)
            for e in D.obj(a):
                if self.legs[b][Ff(e)] != self.legs[a][e]:
                    report.append(f"cocone fails on {f} at {e!r}")
        return report


def _enumerate_cocones(D: SetDiagram, Y):
    """All cocones from D to the set Y, by backtracking over elements.

    Deliberately avoids union-find: constraints are checked edge by edge.
    """
    C = D.source
    elems = [(x, e) for x in C.objects for e in D.obj(x)]
    constraints = {k: [] for k in elems}
    for a, b, f in C.morphisms():
        Ff = D.mor(f)
        for e in D.obj(a):
            other = (b, Ff(e))
            constraints[(a, e)].append(other)
            constraints[other].append((a, e))
    assignment = {}

    def go(i):
        if i == len(elems):
            yield dict(assignment)
            return
        k = elems[i]
        for y in Y:
            if all(assignment.get(o, y) == y for o in constraints[k]):
                assignment[k] = y
                yield from go(i + 1)
                del assignment[k]

    yield from go(0)


def check_cocone_universal(c: SetCocone, candidates: Sequence[Sequence]) -> bool:
    """Extensional universality: every cocone into each candidate set
    factors through ``c`` by exactly one map."""
    D = c.diagram
    for Y in candidates:
        Y = tuple(Y)
        for cocone in _enumerate_cocones(D, Y):
            count = 1
            for z in c.apex:
                pre = {cocone[(x, e)] for x in D.source.objects
                       for e in D.obj(x) if c.legs[x][e] == z}
                if len(pre) > 1:
                    count = 0
                elif not pre:
                    count *= len(Y)
            if count != 1:
                return False
    return True


@dataclass
class TruncatedColimit:
    colimit: Colimit
    next_colimit: Colimit
    comparison: dict
    stabilized: bool
    L: int

    @property
    def classes(self):
        return self.colimit.classes

    def status(self):
        return "stabilized" if self.stabilized else "truncated"


def truncated_colimit(D: SetDiagram, L: int) -> TruncatedColimit:
    """Colimit of D over grades <= L.

    ``stabilized`` is a one-step certificate only: the comparison from the
    grade-L colimit to the grade-(L+1) colimit is a bijection. It does not
    prove convergence.
    """
    G = D.source
    low = colimit_set(D.restrict(G.truncate(L)))
    high = colimit_set(D.restrict(G.truncate(L + 1)))
    comparison = {rep: high.cls_of_tag(rep) for rep in low.classes}
    bij = len(set(comparison.values())) == len(low) == len(high)
    return TruncatedColimit(low, high, comparison, bij, L)


@dataclass
class FinalityResult:
    comparison: dict
    source_colimit: Colimit
    target_colimit: Colimit
    is_iso: bool


def finality_check(u: Functor, D: SetDiagram) -> FinalityResult:
    """Compare colim(D . u) with colim(D) through the canonical map."""
    src = colimit_set(D.precompose(u))
    tgt = colimit_set(D)
    comparison = {}
    for rep in src.classes:
        i, a = src.element(rep)
        comparison[rep] = tgt.leg(u.obj(i), a)
    iso = len(set(comparison.values())) == len(src) == len(tgt)
    return FinalityResult(comparison, src, tgt, iso)


def slice_category(C: FiniteCategory, x, name=None) -> FiniteCategory:
    """The under-category x/C: objects are arrows x -> s, morphisms commuting triangles."""
    objs = [(s, f) for s in C.objects for f in C.hom(x, s)]

    def hom(a, b):
        (s, f), (t, g) = a, b
        return [(a, b, h) for h in C.hom(s, t) if C.compose(h, f) == g]

    return FiniteCategory(objs, hom, lambda a: (a, a, C.identity(a[0])),
                          lambda g, f: (f[0], g[1], C.compose(g[2], f[2])),
                          name=name or f"{x}/{C.name}")


def diagonal_slice(S: FiniteCategory, xs, name=None) -> FiniteCategory:
    """S x_{S^n} (S^n)_{(x_1..x_n)/} along the diagonal S -> S^n.

    Objects are (s, (f_1..f_n)) with f_i: x_i -> s; a morphism is g: s -> t
    with g f_i = f'_i for every i.
    """
    xs = tuple(xs)
    objs = [(s, fs) for s in S.objects
            for fs in itertools.product(*(S.hom(x, s) for x in xs))]

    def hom(a, b):
        (s, fs), (t, gs) = a, b
        return [(a, b, h) for h in S.hom(s, t)
                if all(S.compose(h, f) == g for f, g in zip(fs, gs))]

    return FiniteCategory(objs, hom, lambda a: (a, a, S.identity(a[0])),
                          lambda g, f: (f[0], g[1], S.compose(g[2], f[2])),
                          name=name or f"{xs}/{S.name}")


def product_category(C: FiniteCategory, D: FiniteCategory, name=None) -> FiniteCategory:
    objs = [(a, b) for a in C.objects for b in D.objects]

    def hom(x, y):
        return [(f, g) for f in C.hom(x[0], y[0]) for g in D.hom(x[1], y[1])]

    def gens(x, y):
        out = []
        if x[1] == y[1]:
            out += [(f, D.identity(x[1])) for f in C.generating_hom(x[0], y[0])]
        if x[0] == y[0]:
            out += [(C.identity(x[0]), g) for g in D.generating_hom(x[1], y[1])]
        return out

    return FiniteCategory(objs, hom, lambda x: (C.identity(x[0]), D.identity(x[1])),
                          lambda g, f: (C.compose(g[0], f[0]), D.compose(g[1], f[1])),
                          generators=gens, name=name or f"{C.name}x{D.name}")


def diagonal_functor(S: FiniteCategory, SS: FiniteCategory) -> Functor:
    return Functor(S, SS, lambda s: (s, s), lambda f: (f, f), name="diag")


# -- weak contractibility ---------------------------------------------------

@dataclass
class ContractibilityVerdict:
    status: str  # certified_contractible | connected_only | disconnected
    certificate: list

    def __bool__(self):
        return self.status == "certified_contractible"


def connected_components(C: FiniteCategory):
    uf = UnionFind(range(len(C.objects)))
    for a, b, _ in C.generating_morphisms():
        uf.union(C.index(a), C.index(b))
    return [[C.objects[i] for i in ms] for ms in uf.classes().values()]


def _is_initial(C, x, objs):
    return all(len(C.hom(x, y)) == 1 for y in objs)


def _is_terminal(C, x, objs):
    return all(len(C.hom(y, x)) == 1 for y in objs)


def _removable(C, objs, x):
    """An adjoint to the inclusion of objs - {x} into objs, if one exists at x.

    A reflection x -> y (or coreflection y -> x) with y among the remaining
    objects gives a homotopy equivalence of nerves.
    """
    rest = [z for z in objs if z != x]
    for y in rest:
        for r in C.hom(x, y):
            if all(len(C.hom(y, z)) == len(C.hom(x, z))
                   and len({C.compose(g, r) for g in C.hom(y, z)}) == len(C.hom(y, z))
                   for z in rest):
                return ("reflect", x, y, r)
        for c in C.hom(y, x):
            if all(len(C.hom(z, y)) == len(C.hom(z, x))
                   and len({C.compose(c, g) for g in C.hom(z, y)}) == len(C.hom(z, y))
                   for z in rest):
                return ("coreflect", x, y, c)
    return None


def _set_adjoint(C, objs, keep):
    """Reflections (or coreflections) of every dropped object into ``keep``.

    All dropped objects must use the same side so that the inclusion of
    ``keep`` has a single adjoint.
    """
    dropped = [x for x in objs if x not in keep]
    for side in ("reflect", "coreflect"):
        witness = []
        for x in dropped:
            found = None
            for y in keep:
                homs = C.hom(x, y) if side == "reflect" else C.hom(y, x)
                for r in homs:
                    if side == "reflect":
                        good = all(len(C.hom(y, z)) == len(C.hom(x, z))
                                   and len({C.compose(g, r) for g in C.hom(y, z)})
                                   == len(C.hom(y, z)) for z in keep)
                    else:
                        good = all(len(C.hom(z, y)) == len(C.hom(z, x))
                                   and len({C.compose(r, g) for g in C.hom(z, y)})
                                   == len(C.hom(z, y)) for z in keep)
                    if good:
                        found = (x, y, r)
                        break
                if found:
                    break
            if not found:
                break
            witness.append(found)
        else:
            return (side + "-set", witness)
    return None


def weak_contractibility_heuristic(C: FiniteCategory) -> ContractibilityVerdict:
    """Certificate search for contractibility of the nerve.

    Certificates: an initial or terminal object, or a sequence of reductions
    to full subcategories whose inclusion has an adjoint (a (co)reflection of
    each dropped object), ending at a subcategory with an initial or terminal
    object. Adjoint functors induce homotopy equivalences of nerves, so each
    step preserves the homotopy type. Never claims contractibility without a
    certificate.
    """
    objs = list(C.objects)
    if not objs or len(connected_components(C)) > 1:
        return ContractibilityVerdict("disconnected", [])
    steps = []
    while True:
        for x in objs:
            if _is_initial(C, x, objs):
                return ContractibilityVerdict("certified_contractible", steps + [("initial", x)])
            if _is_terminal(C, x, objs):
                return ContractibilityVerdict("certified_contractible", steps + [("terminal", x)])
        if len(objs) == 1:
            break
        rigid = [x for x in objs if len(C.hom(x, x)) == 1]
        if rigid and len(rigid) < len(objs):
            step = _set_adjoint(C, objs, rigid)
            if step:
                steps.append(step)
                objs = rigid
                continue
        for x in reversed(objs):
            step = _removable(C, objs, x)
            if step:
                steps.append(step)
                objs.remove(x)
                break
        else:
            break
    return ContractibilityVerdict("connected_only", steps)
