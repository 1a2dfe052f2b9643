"""The O-monoidal envelope of an operad map p: P -> O, truncated by grade.

An object is a tuple of P-colors with an O-operation out of their image. A
morphism (alpha, psi, u) carries an index map alpha, one P-operation per
target index taking the fibre of alpha in ascending order, and a unary
O-operation u. It is valid when

    act(gamma_O(target.op; p(psi_0)..p(psi_{m-1})), pi) == gamma_O(u; source.op)

where pi undoes the sort of source indices by (alpha(i), i).
"""

from __future__ import annotations

import itertools
from collections import namedtuple

from .catiso import find_equivalence
from .fincat import FiniteCategory, SetDiagram, StructuralError
from .operad import CapError, Op, OperadMorphism, invert_perm

EnvObject = namedtuple("EnvObject", "colors op")
EnvObject.grade = property(lambda self: len(self.colors))
EnvObject.out = property(lambda self: self.op.output)

EnvMorphism = namedtuple("EnvMorphism", "source target alpha psi u")


def _fibres(alpha, m):
    fib = [[] for _ in range(m)]
    for i, j in enumerate(alpha):
        fib[j].append(i)
    return fib


def _sort_perm(alpha):
    order = sorted(range(len(alpha)), key=lambda i: (alpha[i], i))
    return invert_perm(order)


class Envelope:
    """Env_O(P) up to grade L, with hom enumeration, generators and tensors."""

    def __init__(self, p: OperadMorphism, L: int):
        self.p = p
        self.P = p.source
        self.O = p.target
        self.L = L
        if L > self.O.cap or L > self.P.cap:
            raise CapError(L, min(self.O.cap, self.P.cap), "envelope grade")
        self._by_grade = []
        for n in range(L + 1):
            objs = []
            for q in itertools.product(self.P.colors, repeat=n):
                pq = tuple(p.color(c) for c in q)
                for c in self.O.colors:
                    for phi in self.O.mul(pq, c):
                        objs.append(EnvObject(q, phi))
            self._by_grade.append(tuple(objs))
        self.objects = tuple(x for g in self._by_grade for x in g)
        self._index = {x: i for i, x in enumerate(self.objects)}
        self._gens = {}
        self._inv_unary = {}
        self._fibre_ops = {}
        self._iso_cache = {}
        self._rep = None
        self._cats = {}

    def __repr__(self):
        return f"Envelope({self.P.name} -> {self.O.name}, L={self.L}, {len(self.objects)} objects)"

    @property
    def name(self):
        return f"Env[{self.p.name}]<={self.L}"

    def objects_of_grade(self, n):
        return self._by_grade[n] if n <= self.L else ()

    def __contains__(self, x):
        return x in self._index

    # -- morphisms ------------------------------------------------------

    def is_valid(self, f: EnvMorphism) -> bool:
        x, y = f.source, f.target
        O = self.O
        if len(f.alpha) != x.grade or len(f.psi) != y.grade:
            return False
        fib = _fibres(f.alpha, y.grade)
        for j, psi in enumerate(f.psi):
            if psi.inputs != tuple(x.colors[i] for i in fib[j]) or psi.output != y.colors[j]:
                return False
        if f.u.inputs != (x.out,) or f.u.output != y.out:
            return False
        lhs = O.act(O.gamma(y.op, tuple(self.p(psi) for psi in f.psi)), _sort_perm(f.alpha))
        return lhs == O.gamma(f.u, (x.op,))

    def _options(self, inputs, output=None):
        key = (inputs, output)
        r = self._fibre_ops.get(key)
        if r is None:
            outs = self.P.colors if output is None else (output,)
            r = tuple(op for c in outs for op in self.P.mul(inputs, c))
            self._fibre_ops[key] = r
        return r

    def _enumerate(self, x, alphas, m, target=None, targets=None):
        """Valid morphisms out of x for the given index maps into grade m."""
        O, p = self.O, self.p
        xc = x.colors
        units = [(c2, u) for c2 in O.colors for u in O.mul((x.out,), c2)]
        rhs_cache = {}
        for alpha in alphas:
            fib = _fibres(alpha, m)
            opts = []
            for j in range(m):
                ins = tuple(xc[i] for i in fib[j])
                o = self._options(ins, None if target is None else target.colors[j])
                if not o:
                    break
                opts.append(o)
            else:
                pi = _sort_perm(alpha)
                for psis in itertools.product(*opts):
                    q2 = tuple(ps.output for ps in psis)
                    ppsis = tuple(p(ps) for ps in psis)
                    pq2 = tuple(p.color(c) for c in q2)
                    for c2, u in units:
                        if target is not None and target.out != c2:
                            continue
                        rhs = rhs_cache.get(u)
                        if rhs is None:
                            rhs = rhs_cache[u] = O.gamma(u, (x.op,))
                        cands = (target.op,) if target is not None else O.mul(pq2, c2)
                        for phi2 in cands:
                            y = EnvObject(q2, phi2)
                            if targets is not None and y not in targets:
                                continue
                            if O.act(O.gamma(phi2, ppsis), pi) == rhs:
                                yield EnvMorphism(x, y, alpha, psis, u)

    def hom(self, x, y):
        alphas = itertools.product(range(y.grade), repeat=x.grade)
        return list(self._enumerate(x, alphas, y.grade, target=y))

    def identity(self, x):
        return EnvMorphism(x, x, tuple(range(x.grade)),
                           tuple(self.P.unit(c) for c in x.colors), self.O.unit(x.out))

    def compose(self, g: EnvMorphism, f: EnvMorphism) -> EnvMorphism:
        if f.target != g.source:
            raise StructuralError("composing non-composable envelope morphisms")
        P = self.P
        m = f.target.grade
        fib_f = _fibres(f.alpha, m)
        alpha = tuple(g.alpha[a] for a in f.alpha)
        psis = []
        for k in range(g.target.grade):
            js = [j for j in range(m) if g.alpha[j] == k]
            op = P.gamma(g.psi[k], tuple(f.psi[j] for j in js))
            concat = [i for j in js for i in fib_f[j]]
            pos = {i: r for r, i in enumerate(concat)}
            psis.append(P.act(op, tuple(pos[i] for i in sorted(concat))))
        return EnvMorphism(f.source, g.target, alpha, tuple(psis), self.O.gamma(g.u, (f.u,)))

    # -- generators -----------------------------------------------------

    def is_invertible_unary(self, psi: Op) -> bool:
        r = self._inv_unary.get(psi)
        if r is None:
            P = self.P
            a, b = psi.inputs[0], psi.output
            r = any(P.gamma(chi, (psi,)) == P.unit(a) and P.gamma(psi, (chi,)) == P.unit(b)
                    for chi in P.mul((b,), a))
            self._inv_unary[psi] = r
        return r

    def _u_invertible(self, u):
        O = self.O
        a, b = u.inputs[0], u.output
        return any(O.gamma(v, (u,)) == O.unit(a) and O.gamma(u, (v,)) == O.unit(b)
                   for v in O.mul((b,), a))

    def is_generator(self, f: EnvMorphism) -> bool:
        """At most one fibre (or the unary part) is not an invertible singleton."""
        bad = 0 if self._u_invertible(f.u) else 1
        for psi in f.psi:
            if not (psi.arity == 1 and self.is_invertible_unary(psi)):
                bad += 1
        return bad <= 1

    @staticmethod
    def _generator_alphas(n, m):
        """Index maps with at most one fibre of size other than 1."""
        if n == m:
            yield from itertools.permutations(range(m))
            return
        k = n - (m - 1)
        if k < 0:
            return
        for special in range(m):
            rest = [j for j in range(m) if j != special]
            for S in itertools.combinations(range(n), k):
                others = [i for i in range(n) if i not in S]
                for perm in itertools.permutations(rest):
                    alpha = [0] * n
                    for i in S:
                        alpha[i] = special
                    for i, j in zip(others, perm):
                        alpha[i] = j
                    yield tuple(alpha)

    def generators_from(self, x):
        """Generating morphisms out of x into any object of grade <= L."""
        r = self._gens.get(x)
        if r is None:
            r = []
            for m in range(0, min(self.L, x.grade + 1) + 1):
                alphas = list(self._generator_alphas(x.grade, m))
                for f in self._enumerate(x, alphas, m):
                    if f.target in self._index and self.is_generator(f):
                        r.append(f)
            self._gens[x] = r
        return r

    # -- categories -----------------------------------------------------

    def category(self, L=None, skeletal=False, generators=True) -> FiniteCategory:
        """Full subcategory on grades <= L (skeletal: one object per iso class).

        Generators of the skeleton are the generators of the envelope with
        both ends in it: the generator class is closed under composition with
        isomorphisms, so transporting a factorisation along isos stays inside.
        """
        L = self.L if L is None else L
        key = (L, skeletal, generators)
        hit = self._cats.get(key)
        if hit is not None:
            return hit
        if skeletal:
            objs = [x for x in self.skeleton_objects() if x.grade <= L]
        else:
            objs = [x for x in self.objects if x.grade <= L]
        objset = frozenset(objs)
        gen_table = None
        if generators:
            gen_table = {}
            for x in objs:
                for f in self.generators_from(x):
                    if f.target in objset:
                        gen_table.setdefault((x, f.target), []).append(f)
        C = FiniteCategory(objs, self.hom, self.identity, self.compose,
                           generators=gen_table, name=self.name + ("/sk" if skeletal else ""),
                           grade=lambda x: x.grade)
        self._cats[key] = C
        return C

    # -- isomorphisms and skeleton --------------------------------------

    def _bucket(self, x):
        return (x.grade, tuple(sorted(x.colors, key=self.P.colors.index)), x.out)

    def find_iso(self, x, y):
        """An isomorphism x -> y, or None."""
        if self._bucket(x) != self._bucket(y):
            return None
        key = (x, y)
        if key in self._iso_cache:
            return self._iso_cache[key]
        n = x.grade
        # try the permutation matching colors in order first
        first = []
        used = set()
        for c in x.colors:
            j = next((j for j in range(n) if y.colors[j] == c and j not in used), None)
            if j is None:
                break
            used.add(j)
            first.append(j)
        alphas = itertools.chain([tuple(first)] if len(first) == n else [],
                                 itertools.permutations(range(n)))
        found = None
        for f in self._enumerate(x, alphas, n, target=y):
            if all(ps.arity == 1 and self.is_invertible_unary(ps) for ps in f.psi) \
                    and self._u_invertible(f.u):
                found = f
                break
        self._iso_cache[key] = found
        return found

    def _build_skeleton(self):
        reps = {}
        rep_of = {}
        for x in self.objects:
            b = self._bucket(x)
            for r in reps.setdefault(b, []):
                iso = self.find_iso(x, r)
                if iso is not None:
                    rep_of[x] = (r, iso)
                    break
            else:
                reps[b].append(x)
                rep_of[x] = (x, self.identity(x))
        self._rep = rep_of

    def skeleton_objects(self):
        if self._rep is None:
            self._build_skeleton()
        return [x for x in self.objects if self._rep[x][0] == x]

    def rep(self, x):
        """(skeleton representative r, isomorphism x -> r)."""
        if self._rep is None:
            self._build_skeleton()
        return self._rep[x]

    # -- tensor family --------------------------------------------------

    def tensor(self, chi: Op, objs):
        objs = tuple(objs)
        if chi.inputs != tuple(x.out for x in objs):
            raise StructuralError(f"tensor by {chi} on objects over {[x.out for x in objs]}")
        colors = tuple(c for x in objs for c in x.colors)
        if len(colors) > self.L:
            raise CapError(len(colors), self.L, "tensor grade")
        return EnvObject(colors, self.O.gamma(chi, tuple(x.op for x in objs)))

    def tensor_mor(self, chi: Op, mors):
        mors = tuple(mors)
        for f in mors:
            if not self.O.is_unit(f.u):
                raise StructuralError("tensor of a morphism with a non-identity unary part")
        src = self.tensor(chi, [f.source for f in mors])
        tgt = self.tensor(chi, [f.target for f in mors])
        alpha, psis, off = [], [], 0
        for f in mors:
            alpha.extend(off + a for a in f.alpha)
            psis.extend(f.psi)
            off += f.target.grade
        return EnvMorphism(src, tgt, tuple(alpha), tuple(psis), self.O.unit(chi.output))

    def unit_objects(self):
        return self.objects_of_grade(0)

    def symmetry(self, chi: Op, objs, sigma):
        """Canonical iso tensor(chi.sigma, objs permuted) -> tensor(chi, objs)."""
        objs = tuple(objs)
        moved = tuple(objs[s] for s in sigma)
        src = self.tensor(self.O.act(chi, sigma), moved)
        tgt = self.tensor(chi, objs)
        sizes = [x.grade for x in objs]
        offs = list(itertools.accumulate([0] + sizes))
        alpha = tuple(offs[s] + r for s in sigma for r in range(sizes[s]))
        return EnvMorphism(src, tgt, alpha, tuple(self.P.unit(c) for c in src.colors),
                           self.O.unit(chi.output))


_ENV_CACHE = {}


def build_envelope(p: OperadMorphism, L: int) -> Envelope:
    """Envelope of p up to grade L; cached per (p, L) for the process lifetime."""
    key = (id(p), L)
    hit = _ENV_CACHE.get(key)
    if hit is not None and hit[0] is p:
        return hit[1]
    E = Envelope(p, L)
    _ENV_CACHE[key] = (p, E)
    return E


def check_envelope(E: Envelope, L=None):
    """Every enumerated morphism is valid and composites of valid morphisms are valid."""
    L = E.L if L is None else L
    objs = [x for x in E.objects if x.grade <= L]
    report = []
    for x in objs:
        for y in objs:
            for f in E.hom(x, y):
                if not E.is_valid(f):
                    report.append(f"invalid morphism {f}")
                for z in objs:
                    for g in E.hom(y, z):
                        if not E.is_valid(E.compose(g, f)):
                            report.append(f"composite {g} . {f} invalid")
    return report


def check_tensor_laws(E: Envelope, L=None):
    """Grade additivity and functoriality of every binary tensor."""
    L = E.L if L is None else L
    O = E.O
    report = []
    objs = [x for x in E.objects if x.grade <= L]
    for chi in O.operations(2):
        for x, y in itertools.product(objs, repeat=2):
            if x.grade + y.grade > L or chi.inputs != (x.out, y.out):
                continue
            t = E.tensor(chi, (x, y))
            if t.grade != x.grade + y.grade:
                report.append(f"grade not additive for {x}, {y}")
            if E.tensor_mor(chi, (E.identity(x), E.identity(y))) != E.identity(t):
                report.append(f"tensor does not preserve identities at {x}, {y}")
            for x2, y2 in itertools.product(objs, repeat=2):
                if x2.grade + y2.grade > L:
                    continue
                for f in E.hom(x, x2):
                    if not O.is_unit(f.u):
                        continue
                    for g in E.hom(y, y2):
                        if not O.is_unit(g.u):
                            continue
                        h = E.tensor_mor(chi, (f, g))
                        if not E.is_valid(h):
                            report.append(f"tensor of {f}, {g} is invalid")
    return report


# -- the universal algebra and extensions ---------------------------------

class UnitAlgebra:
    """The P-algebra in Env_O(P): colors go to singleton tuples, operations to
    collapse morphisms."""

    def __init__(self, E: Envelope):
        if E.L < 1:
            raise ValueError("unit algebra needs grade >= 1")
        self.E = E

    def carrier(self, q):
        return EnvObject((q,), self.E.O.unit(self.E.p.color(q)))

    def action(self, psi: Op) -> EnvMorphism:
        E = self.E
        src = EnvObject(psi.inputs, E.p(psi))
        return EnvMorphism(src, self.carrier(psi.output), (0,) * psi.arity, (psi,),
                           E.O.unit(E.p.color(psi.output)))

    def check(self):
        """Composition and equivariance: action(gamma(psi; psi_i)) equals
        action(psi) after the tensor of the action(psi_i)."""
        E, P = self.E, self.E.P
        report = []
        for psi in P.operations():
            if psi.arity > E.L:
                continue
            f = self.action(psi)
            if not E.is_valid(f):
                report.append(f"action({psi}) is not a valid morphism")
            for sigma in itertools.permutations(range(psi.arity)):
                sym = E.symmetry(E.p(psi), [self.carrier(c) for c in psi.inputs], sigma)
                if self.action(P.act(psi, sigma)) != E.compose(f, sym):
                    report.append(f"action not equivariant at {psi}, {sigma}")
        from .operad import composable_instances
        for phi, psis in composable_instances(P, E.L):
            lhs = self.action(P.gamma(phi, psis))
            rhs = E.compose(self.action(phi), E.tensor_mor(E.p(phi), [self.action(x) for x in psis]))
            if lhs != rhs:
                report.append(f"action not compatible with gamma at {phi}; {psis}")
        return report


def unit_algebra(E: Envelope) -> UnitAlgebra:
    return UnitAlgebra(E)


class MonoidalDiagram:
    """F_A: Env_O(P) -> finite sets for a P-algebra A.

    F_A(q, phi) is the product of the carriers A(q_i); a morphism sends x to
    the tuple whose j-th entry is A(psi_j) applied to the fibre of j.
    """

    def __init__(self, E: Envelope, A):
        if A.operad is not E.P and A.operad.colors != E.P.colors:
            raise StructuralError(f"algebra over {A.operad.name} does not match {E.P.name}")
        self.E = E
        self.A = A
        self.pointed = A.target.pointed

    def obj(self, x: EnvObject):
        return tuple(itertools.product(*(self.A.carrier(c).elements for c in x.colors)))

    def basepoint(self, x: EnvObject):
        return tuple(self.A.carrier(c).base for c in x.colors)

    def mor(self, f: EnvMorphism):
        fib = _fibres(f.alpha, f.target.grade)
        act = self.A.act
        is_unit = self.E.P.is_unit
        steps = tuple((fib[j][0], None) if len(fib[j]) == 1 and is_unit(ps) else (fib[j], ps)
                      for j, ps in enumerate(f.psi))

        def apply(xs):
            # unit singletons copy their input; other fibres act
            return tuple(xs[src] if ps is None else act(ps, tuple(xs[i] for i in src))
                         for src, ps in steps)
        return apply

    def set_diagram(self, C: FiniteCategory) -> SetDiagram:
        return SetDiagram(C, self.obj, self.mor,
                          basepoint=self.basepoint if self.pointed else None,
                          name=f"F[{self.A.name}]")

    def check_strong_monoidal(self, L=None):
        """F(x (x)_chi y) is literally F(x) x F(y), and F is strict on morphisms."""
        E = self.E
        L = E.L if L is None else L
        report = []
        objs = [x for x in E.objects if x.grade <= L]
        for chi in E.O.operations(2):
            for x, y in itertools.product(objs, repeat=2):
                if x.grade + y.grade > L or chi.inputs != (x.out, y.out):
                    continue
                t = E.tensor(chi, (x, y))
                expect = tuple(a + b for a, b in itertools.product(self.obj(x), self.obj(y)))
                if self.obj(t) != expect:
                    report.append(f"F not strict on objects at {x}, {y}")
        return report

    def check_unit_triangle(self):
        """F_A composed with the unit algebra recovers A."""
        U = UnitAlgebra(self.E)
        report = []
        for psi in self.E.P.operations():
            if psi.arity > self.E.L:
                continue
            g = self.mor(U.action(psi))
            for xs in self.A.inputs(psi):
                if g(tuple(xs)) != (self.A.act(psi, xs),):
                    report.append(f"F(eta({psi})) differs from A({psi}) at {xs!r}")
                    break
        return report


def extend_algebra(E: Envelope, A) -> MonoidalDiagram:
    return MonoidalDiagram(E, A)


def check_envelope_iso(E: Envelope, reference: FiniteCategory, L=None):
    """Grade-preserving equivalence search between the envelope and a reference."""
    L = E.L if L is None else L
    C = E.category(L, generators=False)
    return find_equivalence(C, reference, iso_c=E.find_iso)
