"""Relative free algebras as colimits over the envelope, and independent oracles.

``free_algebra`` runs the colimit of F_A over the skeleton of Env_O(P) up to
grade L; operations are induced by the tensor functors of the envelope.
``classic_free`` computes the orbit formula directly from the operad tables
and never touches the envelope code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .envelope import EnvObject, build_envelope, extend_algebra
from .fincat import StructuralError, colimit_set
from .operad import CapError, Op, OperadMorphism, OperadSpec
from .target import AlgebraMap, AlgebraTable, FinSet, restrict_algebra


class CompatibilityError(RuntimeError):
    """The target does not commute with a colimit shape the computation needs."""


class TruncatedAlgebra:
    """Colimit classes with partial operations.

    A class is the least tag ``(object index, element index)`` of its
    members; its grade is the grade of that object. An operation on classes
    is defined when the grades sum to at most L.
    """

    def __init__(self, envelope, diagram, category, colimit, L, stabilized, comparison=None):
        self.E = envelope
        self.F = diagram
        self.category = category
        self.colimit = colimit
        self.L = L
        self.stabilized = stabilized
        self.comparison = comparison
        self.O = envelope.O
        self.color = envelope.O.colors[0]
        self.classes = colimit.classes
        self._op_cache = {}

    def __len__(self):
        return len(self.classes)

    def __repr__(self):
        return (f"TruncatedAlgebra({len(self.classes)} classes, L={self.L}, "
                f"{'stabilized' if self.stabilized else 'truncated'})")

    def rep(self, cls):
        return self.colimit.element(cls)

    def grade(self, cls):
        return self.category.objects[cls[0]].grade

    def members(self, cls):
        return self.colimit.members[cls]

    def class_of(self, x: EnvObject, e):
        """The class of element e of F(x), for any envelope object of grade <= L."""
        r, iso = self.E.rep(x)
        return self.colimit.leg(r, self.F.mor(iso)(e))

    def op(self, phi: Op, args):
        args = tuple(args)
        key = (phi, args)
        if key in self._op_cache:
            return self._op_cache[key]
        if sum(self.grade(a) for a in args) > self.L:
            return None
        reps = [self.rep(a) for a in args]
        res = self._apply(phi, reps)
        self._op_cache[key] = res
        return res

    def _apply(self, phi, reps):
        z = self.E.tensor(phi, [x for x, _ in reps])
        return self.class_of(z, tuple(c for _, e in reps for c in e))

    def operations(self, max_arity=2):
        return [phi for phi in self.O.operations() if phi.arity <= max_arity]

    def defined_instances(self, max_arity=2):
        """Every (phi, args) with the grade sum within L."""
        by_grade = {}
        for c in self.classes:
            by_grade.setdefault(self.grade(c), []).append(c)
        for phi in self.operations(max_arity):
            for args in _tuples_within(by_grade, phi.arity, self.L):
                yield phi, args

    def check_well_defined(self, max_arity=2, limit=200_000):
        """Every choice of representatives gives the same class.

        Returns (violations, instances checked, complete flag).
        """
        report, checked = [], 0
        for phi, args in self.defined_instances(max_arity):
            expect = self.op(phi, args)
            pools = [[t for t in self.members(a) if self.category.objects[t[0]].grade
                      + sum(self.grade(b) for b in args) - self.grade(a) <= self.L]
                     for a in args]
            for tags in itertools.product(*pools):
                if sum(self.category.objects[t[0]].grade for t in tags) > self.L:
                    continue
                checked += 1
                if checked > limit:
                    return report, checked, False
                got = self._apply(phi, [self.colimit.element(t) for t in tags])
                if got != expect:
                    report.append(f"{phi} on {tags} gives {got}, expected {expect}")
        return report, checked, True

    def check_laws(self, max_arity=2):
        """Unit, equivariance, and associativity wherever all sides are defined."""
        O = self.O
        report = []
        ops = self.operations(max_arity)
        unit = O.unit(self.color)
        for c in self.classes:
            if self.op(unit, (c,)) != c:
                report.append(f"unit moves {c}")
        for phi, args in self.defined_instances(max_arity):
            for sigma in itertools.permutations(range(phi.arity)):
                moved = O.act(phi, sigma)
                if self.op(moved, tuple(args[s] for s in sigma)) != self.op(phi, args):
                    report.append(f"equivariance fails at {phi}, {sigma}, {args}")
        binary = [phi for phi in ops if phi.arity == 2]
        for phi in binary:
            for psi in binary:
                for i in range(2):
                    inner = [O.unit(self.color)] * 2
                    inner[i] = psi
                    top = O.gamma(phi, tuple(inner))
                    for args in _tuples_within(self.classes_by_grade(), 3, self.L):
                        if i == 0:
                            lhs = self.op(phi, (self.op(psi, args[:2]), args[2]))
                        else:
                            lhs = self.op(phi, (args[0], self.op(psi, args[1:])))
                        if lhs is None:
                            continue
                        rhs = self.op(top, args)
                        if rhs is not None and lhs != rhs:
                            report.append(f"composition fails at {phi}, {psi}, {args}")
        return report

    def classes_by_grade(self):
        by = {}
        for c in self.classes:
            by.setdefault(self.grade(c), []).append(c)
        return by

    def product_table(self, phi=None):
        """Binary products as {(x, y): class}, skipping undefined entries."""
        phi = phi or self.O.ops_with_output(self.color, 2)[0]
        return {(x, y): self.op(phi, (x, y)) for x in self.classes for y in self.classes
                if self.op(phi, (x, y)) is not None}

    def unit_class(self):
        nullary = self.O.ops_with_output(self.color, 0)
        return self.op(nullary[0], ()) if nullary else None

    def generator_map(self, A: AlgebraTable):
        """A -> classes through grade-one objects: x |-> class of eta(q)(x)."""
        unit = self.E.O.unit
        return {q: {x: self.class_of(EnvObject((q,), unit(self.E.p.color(q))), (x,))
                    for x in A.carrier(q).elements} for q in A.operad.colors}

    def describe(self, cls):
        x, e = self.rep(cls)
        return f"{list(x.colors)} {e!r}"


def _tuples_within(by_grade, k, budget):
    grades = sorted(by_grade)
    if k == 0:
        yield ()
        return
    for g in grades:
        if g > budget:
            break
        for c in by_grade[g]:
            for rest in _tuples_within(by_grade, k - 1, budget - g):
                yield (c,) + rest


def _require_single_color(O: OperadSpec):
    if len(O.colors) != 1:
        raise StructuralError(f"free algebras are computed for single-colored targets; "
                              f"{O.name} has {len(O.colors)} colors")


def free_algebra(p: OperadMorphism, A: AlgebraTable, L: int, stabilize=True,
                 check_compat=True) -> TruncatedAlgebra:
    """Colimit over Env_O(P) (grades <= L) of the extension of A.

    Needs operad caps >= L + 1 when ``stabilize`` is set; the stabilization
    flag compares the grade-L and grade-(L+1) colimits.
    """
    _require_single_color(p.target)
    top = L + 1 if stabilize else L
    if top > min(p.source.cap, p.target.cap):
        raise CapError(top, min(p.source.cap, p.target.cap), "free_algebra needs cap >= L+1")
    E = build_envelope(p, top)
    F = extend_algebra(E, A)
    C = E.category(L, skeletal=True)
    if check_compat:
        res = A.target.compatible_with(C)
        if not res:
            raise CompatibilityError(f"{A.target.name} does not commute with colimits over "
                                     f"{C.name}: {res.detail}")
    low = colimit_set(F.set_diagram(C))
    stabilized, comparison = False, None
    if stabilize:
        C2 = E.category(L + 1, skeletal=True)
        high = colimit_set(F.set_diagram(C2))
        comparison = {cls: high.cls_of_tag(cls) for cls in low.classes}
        stabilized = len(set(comparison.values())) == len(low) == len(high)
    return TruncatedAlgebra(E, F, C, low, L, stabilized, comparison)


# -- the orbit formula --------------------------------------------------------

class ClassicFree:
    """The orbit formula: disjoint union over n <= L of (O(n) x X^n) / Sigma_n.

    With ``pointed`` set, the summands are wedged together: every (o, base^n)
    becomes the basepoint.
    """

    def __init__(self, O: OperadSpec, X: FinSet, L: int, pointed=False):
        _require_single_color(O)
        if L > O.cap:
            raise CapError(L, O.cap, "classic_free")
        self.O, self.X, self.L, self.pointed = O, X, L, pointed
        self.color = O.colors[0]
        self._ops = {n: list(O.ops_with_output(self.color, n)) for n in range(L + 1)}
        classes = []
        seen = set()
        for n in range(L + 1):
            for o in self._ops[n]:
                for xs in itertools.product(X.elements, repeat=n):
                    c = self.canon(o, xs)
                    if c not in seen:
                        seen.add(c)
                        classes.append(c)
        self.classes = tuple(classes)

    def _key(self, o, xs):
        return (self._ops[o.arity].index(o), tuple(self.X.elements.index(x) for x in xs))

    def canon(self, o, xs):
        n = len(xs)
        if self.pointed and all(x == self.X.base for x in xs):
            return ("*",)
        best = None
        for sigma in itertools.permutations(range(n)):
            o2 = self.O.act(o, sigma)
            xs2 = tuple(xs[s] for s in sigma)
            k = self._key(o2, xs2)
            if best is None or k < best[0]:
                best = (k, (n, o2, xs2))
        return best[1]

    def __len__(self):
        return len(self.classes)

    def grade(self, cls):
        if cls == ("*",):
            return min(n for n in range(self.L + 1) if self._ops[n])
        return cls[0]

    def op(self, phi, args):
        if sum(self.grade(a) for a in args) > self.L:
            return None
        parts = []
        for a in args:
            if a == ("*",):
                n = self.grade(a)
                parts.append((self._ops[n][0], (self.X.base,) * n))
            else:
                parts.append((a[1], a[2]))
        o = self.O.gamma(phi, tuple(q for q, _ in parts))
        return self.canon(o, tuple(x for _, xs in parts for x in xs))


def classic_free(O: OperadSpec, X: FinSet, L: int, pointed=False) -> ClassicFree:
    return ClassicFree(O, X, L, pointed)


@dataclass
class FreeComparison:
    ok: bool
    mapping: dict = field(default_factory=dict)
    obstruction: str = ""
    envelope_side: object = None
    classic_side: object = None

    def __bool__(self):
        return self.ok


def triv_projection(O: OperadSpec, triv: OperadSpec):
    from .operad import product, projection
    OT = product(O, triv, name=f"product:{O.name},triv")
    return projection(OT, 0, O)


def compare_free(O: OperadSpec, X: FinSet, L: int, triv: OperadSpec,
                 classic: ClassicFree | None = None, max_arity=2) -> FreeComparison:
    """Envelope route along O x Triv -> O against the orbit formula.

    Builds the class map from orbit representatives and checks that it is a
    grade-preserving bijection commuting with every defined operation of
    arity <= max_arity.
    """
    from .target import set_algebra, finset_cartesian
    p = triv_projection(O, triv)
    A = set_algebra(p.source, X.elements, finset_cartesian(), name="X")
    T = free_algebra(p, A, L)
    K = classic or classic_free(O, X, L)
    pcolor = p.source.colors[0]
    mapping = {}
    for cls in K.classes:
        n, o, xs = cls
        mapping[cls] = T.class_of(EnvObject((pcolor,) * n, o), xs)
    res = FreeComparison(False, mapping, envelope_side=T, classic_side=K)
    if len(K) != len(T):
        res.obstruction = f"class counts differ: orbit formula {len(K)}, envelope {len(T)}"
        return res
    if len(set(mapping.values())) != len(T):
        res.obstruction = "orbit classes do not map injectively onto envelope classes"
        return res
    for cls, img in mapping.items():
        if K.grade(cls) != T.grade(img):
            res.obstruction = f"grade mismatch at {cls}"
            return res
    for phi in O.operations():
        if phi.arity > max_arity:
            continue
        for args in itertools.product(K.classes, repeat=phi.arity):
            a = K.op(phi, args)
            if a is None:
                continue
            b = T.op(phi, tuple(mapping[x] for x in args))
            if b is None or mapping[a] != b:
                res.obstruction = f"operation {phi.label} disagrees on {args}"
                return res
    res.ok = True
    return res


# -- adjunction and universal property -------------------------------------

@dataclass
class AdjunctionReport:
    left: int | None
    right: int
    bijective: bool | None
    inconclusive: bool = False
    required_L: int | None = None
    detail: str = ""

    @property
    def ok(self):
        return not self.inconclusive and self.bijective and self.left == self.right


def algebra_maps_from_truncated(T: TruncatedAlgebra, B: AlgebraTable, max_arity=2):
    """All maps classes -> B commuting with every defined operation.

    Classes of grade <= 1 are chosen freely; everything else must be forced
    by products. Returns (maps, inconclusive, first unforced class).
    """
    instances = [(phi, args, T.op(phi, args)) for phi, args in T.defined_instances(max_arity)]
    carrier = B.carrier(B.operad.colors[0]).elements
    free = [c for c in T.classes if T.grade(c) <= 1]
    maps = []
    for images in itertools.product(carrier, repeat=len(free)):
        h = dict(zip(free, images))
        changed, ok = True, True
        while changed and ok:
            changed = False
            for phi, args, res in instances:
                if all(a in h for a in args):
                    v = B.act(phi, tuple(h[a] for a in args))
                    if res in h:
                        if h[res] != v:
                            ok = False
                            break
                    else:
                        h[res] = v
                        changed = True
        if not ok:
            continue
        missing = [c for c in T.classes if c not in h]
        if missing:
            return maps, True, missing[0]
        maps.append(h)
    return maps, False, None


def algebra_maps_between(A: AlgebraTable, B: AlgebraTable, max_arity=None):
    """All P-algebra maps A -> B, by brute force over carrier maps."""
    P = A.operad
    colors = P.colors
    choices = []
    for c in colors:
        src = A.carrier(c).elements
        choices.append([dict(zip(src, img)) for img in
                        itertools.product(B.carrier(c).elements, repeat=len(src))])
    out = []
    for combo in itertools.product(*choices):
        m = AlgebraMap(A, B, dict(zip(colors, combo)))
        if not m.check(max_arity):
            out.append(m)
    return out


def adjunction_check(p: OperadMorphism, A: AlgebraTable, B: AlgebraTable, L: int,
                     T: TruncatedAlgebra | None = None) -> AdjunctionReport:
    """Maps free(A) -> B against P-algebra maps A -> p^*B, and restriction
    along the grade-one legs as the bijection between them."""
    T = T or free_algebra(p, A, L)
    left, inconclusive, missing = algebra_maps_from_truncated(T, B)
    right = algebra_maps_between(A, restrict_algebra(B, p), max_arity=2)
    if inconclusive:
        return AdjunctionReport(None, len(right), None, True, L + 1,
                                f"class {T.describe(missing)} is not forced by products")
    eta = T.generator_map(A)
    restricted = set()
    for h in left:
        restricted.add(tuple((q, tuple(sorted(((x, h[eta[q][x]]) for x in eta[q]), key=repr)))
                             for q in sorted(eta, key=repr)))
    right_keys = {tuple((q, tuple(sorted(m.maps[q].items(), key=repr))) for q in sorted(m.maps, key=repr))
                  for m in right}
    bij = len(restricted) == len(left) and restricted == right_keys
    return AdjunctionReport(len(left), len(right), bij)


@dataclass
class UniversalReport:
    transformations: int
    algebra_maps: int | None
    inconclusive: bool = False

    @property
    def ok(self):
        return not self.inconclusive and self.transformations == self.algebra_maps


def monoidal_transformations(F, B: AlgebraTable, L: int):
    """Monoidal natural transformations F -> const_B over Env up to grade L.

    Monoidality forces tau(q, phi)(x) = phi_B(tau_q(x_1), ..., tau_q(x_n)), so
    tau is determined by its grade-one components; naturality is then checked
    on every generating morphism.
    """
    E, A = F.E, F.A
    colors = A.operad.colors
    C = E.category(L)
    choices = [list(itertools.product(B.carrier(E.p.color(q)).elements,
                                      repeat=len(A.carrier(q)))) for q in colors]
    pos = {x: {e: i for i, e in enumerate(F.obj(x))} for x in C.objects}
    edges = []
    for a, b, f in C.generating_morphisms():
        Ff = F.mor(f)
        edges.append((a, b, tuple(pos[b][Ff(e)] for e in F.obj(a))))
    count = 0
    for combo in itertools.product(*choices):
        tau1 = {q: dict(zip(A.carrier(q).elements, img)) for q, img in zip(colors, combo)}
        tau = {x: tuple(B.act(x.op, tuple(tau1[q][v] for q, v in zip(x.colors, e)))
                        for e in F.obj(x)) for x in C.objects}
        count += all(tau[b][j] == tau[a][i] for a, b, idx in edges for i, j in enumerate(idx))
    return count


def colim_universal_property_check(F, B: AlgebraTable, L: int,
                                   T: TruncatedAlgebra | None = None) -> UniversalReport:
    T = T or free_algebra(F.E.p, F.A, L)
    n_tau = monoidal_transformations(F, B, L)
    maps, inconclusive, _ = algebra_maps_from_truncated(T, B)
    return UniversalReport(n_tau, None if inconclusive else len(maps), inconclusive)


# -- lifts through the slice ---------------------------------------------

@dataclass
class LiftReport:
    lifts: int | None
    algebra_maps: int | None
    inconclusive: bool = False
    strong: bool = True
    detail: str = ""

    @property
    def ok(self):
        return not self.inconclusive and self.lifts == self.algebra_maps and self.strong


def is_lift(F, B: AlgebraTable, structure, L: int):
    """Does the family {x: tuple of B-values on F(x)} define an O-monoidal
    lift of F through the slice over B? Returns a list of failures."""
    from .target import SliceSMC
    E = F.E
    S = SliceSMC(B.target, B)
    C = E.category(L, skeletal=True)
    report = []
    for a, b, f in C.generating_morphisms():
        Ff = F.mor(f)
        for i, e in enumerate(F.obj(a)):
            if structure[b][C_pos(F, b, Ff(e))] != structure[a][i]:
                report.append(f"not a slice map along {f.alpha}")
                break
    for x in C.objects:
        if x.grade == 0 and structure[x] != (B.act(x.op, ()),):
            report.append("unit object does not lie over the unit")
    for chi in E.O.operations(2):
        for x, y in itertools.product(C.objects, repeat=2):
            if x.grade + y.grade > L:
                continue
            t = E.tensor(chi, (x, y))
            r, iso = E.rep(t)
            g = F.mor(iso)
            lifted = S.tensor(_slice_obj(F, x, structure[x]), _slice_obj(F, y, structure[y]), chi)
            for (a, b), v in zip(lifted.carrier.elements, lifted.structure):
                if structure[r][C_pos(F, r, g(a + b))] != v:
                    report.append(f"tensor of {x.colors} and {y.colors} is not over B")
                    break
    return report


def C_pos(F, x, e):
    return F.obj(x).index(e)


def _slice_obj(F, x, structure):
    from .target import SliceObject
    return SliceObject(FinSet(F.obj(x)), tuple(structure))


def slice_lift_check(F, B: AlgebraTable, L: int, bound=100_000, T=None) -> LiftReport:
    """Count lifts of F through the slice projection over B, by backtracking
    over the fibres of the slice, and compare with algebra maps colim F -> B."""
    E = F.E
    C = E.category(L, skeletal=True)
    carrier = B.carrier(B.operad.colors[0]).elements
    objs = list(C.objects)
    for x in objs:
        if len(carrier) ** len(F.obj(x)) > bound:
            return LiftReport(None, None, True, detail=f"fibre over {x.colors} exceeds bound {bound}")
    gens = list(C.generating_morphisms())
    tensors = []
    for chi in E.O.operations(2):
        for x, y in itertools.product(objs, repeat=2):
            if x.grade + y.grade <= L:
                t = E.tensor(chi, (x, y))
                r, iso = E.rep(t)
                tensors.append((chi, x, y, r, F.mor(iso)))
    pos = {x: {e: i for i, e in enumerate(F.obj(x))} for x in objs}
    assigned = {}
    count = 0

    def consistent(z):
        s = assigned[z]
        for a, b, f in gens:
            if a in assigned and b in assigned and z in (a, b):
                Ff = F.mor(f)
                sa, sb = assigned[a], assigned[b]
                if any(sb[pos[b][Ff(e)]] != sa[i] for i, e in enumerate(F.obj(a))):
                    return False
        for chi, x, y, r, g in tensors:
            if z in (x, y, r) and x in assigned and y in assigned and r in assigned:
                sx, sy, sr = assigned[x], assigned[y], assigned[r]
                for i, a in enumerate(F.obj(x)):
                    for j, b in enumerate(F.obj(y)):
                        if sr[pos[r][g(a + b)]] != B.act(chi, (sx[i], sy[j])):
                            return False
        if z.grade == 0 and s != (B.act(z.op, ()),):
            return False
        return True

    def go(k):
        nonlocal count
        if k == len(objs):
            count += 1
            return
        z = objs[k]
        for s in itertools.product(carrier, repeat=len(F.obj(z))):
            assigned[z] = s
            if consistent(z):
                go(k + 1)
            del assigned[z]

    go(0)
    T = T or free_algebra(E.p, F.A, L)
    maps, inconclusive, _ = algebra_maps_from_truncated(T, B)
    return LiftReport(count, None if inconclusive else len(maps), inconclusive)
