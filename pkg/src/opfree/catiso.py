"""Grade-preserving equivalence search between finite categories.

Both sides are reduced to skeleta, then an isomorphism of skeleta is built
from a greedy generating set: images of generators are chosen by
backtracking and the rest of the morphism map is forced by composition.
Functoriality of the result follows from F(g . h) = F(g) . F(h) for every
generator g, which is enforced during propagation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fincat import FiniteCategory, UnionFind


def find_inverse(C: FiniteCategory, f, a, b):
    for g in C.hom(b, a):
        if C.compose(g, f) == C.identity(a) and C.compose(f, g) == C.identity(b):
            return g
    return None


def iso_classes(C: FiniteCategory, find_iso=None):
    """Partition of objects into isomorphism classes, least object first.

    ``find_iso(a, b)`` may be supplied as a faster search; it must return an
    isomorphism a -> b or None.
    """
    def default(a, b):
        for f in C.hom(a, b):
            if find_inverse(C, f, a, b) is not None:
                return f
        return None

    find_iso = find_iso or default
    reps = []
    classes = {}
    for x in C.objects:
        for r in reps:
            if C.grade(r) == C.grade(x) and find_iso(r, x) is not None:
                classes[r].append(x)
                break
        else:
            reps.append(x)
            classes[x] = [x]
    return classes


def skeleton(C: FiniteCategory, find_iso=None) -> FiniteCategory:
    reps = list(iso_classes(C, find_iso))
    return C.full_subcategory(reps, name=f"sk({C.name})")


def _endo_signature(C, a, f, limit=8):
    """Pattern of powers of an endomorphism: index of first repeat and period."""
    seen = {C.identity(a): 0}
    g = C.identity(a)
    for k in range(1, limit + 1):
        g = C.compose(f, g)
        if g in seen:
            return (seen[g], k)
        seen[g] = k
    return (None, limit)


def generating_set(C: FiniteCategory):
    """Greedy generating set: a morphism is added unless it already lies in
    the composition closure of the previously chosen ones."""
    order = sorted(C.morphisms(), key=lambda t: (C.grade(t[0]) + C.grade(t[1]),
                                                 C.index(t[1]), C.index(t[0])))
    known = set()
    for x in C.objects:
        known.add(C.identity(x))
    gens = []
    by_src = {}
    src_of = {}
    for a, b, f in C.morphisms():
        src_of[f] = (a, b)
    for a, b, f in order:
        if f in known:
            continue
        gens.append((a, b, f))
        by_src.setdefault(a, []).append((b, f))
        queue = [(a, b, f)]
        known.add(f)
        # close: new element composed with every generator on both sides
        while queue:
            x, y, h = queue.pop()
            cand = [(x, z, C.compose(g, h)) for z, g in by_src.get(y, ())]
            for (u, w, g) in gens:
                if w == x:
                    cand.append((u, y, C.compose(h, g)))
            for item in cand:
                if item[2] not in known:
                    known.add(item[2])
                    queue.append(item)
    return gens


@dataclass
class IsoResult:
    ok: bool
    object_map: dict = field(default_factory=dict)
    morphism_map: dict = field(default_factory=dict)
    obstruction: str = ""

    def __bool__(self):
        return self.ok


def _profile(C, objs, x):
    return (C.grade(x),
            tuple(sorted((C.grade(y), len(C.hom(x, y)), len(C.hom(y, x))) for y in objs)),
            len(C.hom(x, x)))


def find_isomorphism(C: FiniteCategory, D: FiniteCategory) -> IsoResult:
    """Grade-preserving isomorphism C -> D, or a certified obstruction."""
    if len(C.objects) != len(D.objects):
        return IsoResult(False, obstruction=f"object counts {len(C.objects)} != {len(D.objects)}")
    pc = {x: _profile(C, C.objects, x) for x in C.objects}
    pd = {y: _profile(D, D.objects, y) for y in D.objects}
    if sorted(pc.values()) != sorted(pd.values()):
        return IsoResult(False, obstruction=_profile_obstruction(C, D))

    gens = generating_set(C)
    objs = list(C.objects)

    def object_maps(i, used, omap):
        if i == len(objs):
            # hom cardinalities must match pairwise under the bijection
            if all(len(C.hom(a, b)) == len(D.hom(omap[a], omap[b])) for a in objs for b in objs):
                yield dict(omap)
            return
        x = objs[i]
        for y in D.objects:
            if y not in used and pd[y] == pc[x]:
                omap[x] = y
                used.add(y)
                yield from object_maps(i + 1, used, omap)
                used.discard(y)
                del omap[x]

    for omap in object_maps(0, set(), {}):
        mmap = _morphism_search(C, D, omap, gens)
        if mmap is not None:
            return IsoResult(True, omap, mmap)
    return IsoResult(False, obstruction="exhaustive search found no isomorphism "
                                        "although hom cardinality profiles agree")


def _profile_obstruction(C, D):
    def table(K):
        t = {}
        for a in K.objects:
            for b in K.objects:
                key = (K.grade(a), K.grade(b))
                t.setdefault(key, []).append(len(K.hom(a, b)))
        return {k: sorted(v) for k, v in t.items()}

    tc, td = table(C), table(D)
    for key in sorted(set(tc) | set(td)):
        if tc.get(key) != td.get(key):
            return (f"hom cardinalities between grades {key[0]}->{key[1]}: "
                    f"{tc.get(key, [])} vs {td.get(key, [])}")
    return "object profiles differ"


def _morphism_search(C, D, omap, gens):
    mmap = {}
    used = set()
    for x in C.objects:
        mmap[C.identity(x)] = D.identity(omap[x])
        used.add(D.identity(omap[x]))
    src = {}
    for a, b, f in C.morphisms():
        src[f] = (a, b)
    decided = []

    def assign(pairs, mm, us):
        queue = list(pairs)
        while queue:
            f, g = queue.pop()
            if f in mm:
                if mm[f] != g:
                    return False
                continue
            if g in us:
                return False
            mm[f] = g
            us.add(g)
            a, b = src[f]
            for (ga, gb, gen) in decided:
                if ga == b:
                    queue.append((C.compose(gen, f), D.compose(mm[gen], g)))
        return True

    def close_new_generator(gen_triple, mm, us):
        # left-multiply every known morphism by the new generator
        a, b, gen = gen_triple
        pairs = [(C.compose(gen, f), D.compose(mm[gen], mm[f]))
                 for f in list(mm) if src[f][1] == a]
        return assign(pairs, mm, us)

    def search(i, mm, us):
        if i == len(gens):
            return mm
        a, b, f = gens[i]
        if f in mm:
            decided.append(gens[i])
            ok_mm, ok_us = dict(mm), set(us)
            if close_new_generator(gens[i], ok_mm, ok_us):
                res = search(i + 1, ok_mm, ok_us)
                if res is not None:
                    return res
            decided.pop()
            return None
        fa, fb = omap[a], omap[b]
        sig = _endo_signature(C, a, f) if a == b else None
        for g in D.hom(fa, fb):
            if g in us:
                continue
            if sig is not None and _endo_signature(D, fa, g) != sig:
                continue
            mm2, us2 = dict(mm), set(us)
            decided.append(gens[i])
            if assign([(f, g)], mm2, us2) and close_new_generator(gens[i], mm2, us2):
                res = search(i + 1, mm2, us2)
                if res is not None:
                    return res
            decided.pop()
        return None

    result = search(0, mmap, used)
    if result is None:
        return None
    total = sum(1 for _ in C.morphisms())
    if len(result) != total:
        return None
    return result


@dataclass
class EquivalenceResult:
    ok: bool
    left_skeleton: FiniteCategory
    right_skeleton: FiniteCategory
    iso: IsoResult

    def __bool__(self):
        return self.ok

    def witness_lines(self, limit=None):
        lines = [f"{a!r} -> {b!r}" for a, b in self.iso.object_map.items()]
        return lines[:limit] if limit else lines


def find_equivalence(C: FiniteCategory, D: FiniteCategory, iso_c=None, iso_d=None):
    """Grade-preserving equivalence: isomorphism of skeleta."""
    sc, sd = skeleton(C, iso_c), skeleton(D, iso_d)
    res = find_isomorphism(sc, sd)
    return EquivalenceResult(res.ok, sc, sd, res)


__all__ = ["find_equivalence", "find_isomorphism", "skeleton", "iso_classes",
           "generating_set", "IsoResult", "EquivalenceResult", "UnionFind"]
