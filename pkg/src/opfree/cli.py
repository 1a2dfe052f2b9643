"""Workspace-driven command line.

A workspace is one JSON file declaring operads, operad maps, categories,
targets, monoids, algebras and diagrams by name, plus an ordered task list.
``opfree run`` executes the tasks and prints one deterministic text section
per task; ``opfree explain`` says which statement a task instantiates.

Exit statuses: 0 success, 2 parse/schema error, 3 unresolved name or cap
violation, 4 law-check failure, 5 comparison mismatch.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import algcolim, envelope, freealg, operad, refcats, target
from .fincat import FiniteCategory, StructuralError, category_from_table, check_category_laws
from .operad import CapError, OperadSpec

SCHEMA = "opfree-workspace/1"
TASK_TYPES = ("envelope", "free", "compare-free", "adjoint-check", "colim-alg",
              "pushout", "sifted-check", "contractible-check", "check-laws")
SECTIONS = ("operads", "maps", "categories", "targets", "monoids", "algebras", "diagrams")
SINGULAR = {"operad": "operads", "map": "maps", "category": "categories", "target": "targets",
            "monoid": "monoids", "algebra": "algebras", "diagram": "diagrams"}

EXIT_OK, EXIT_PARSE, EXIT_RESOLVE, EXIT_LAW, EXIT_MISMATCH = 0, 2, 3, 4, 5

log = logging.getLogger("opfree")

EXPLAIN = {
    "envelope": "The monoidal envelope of an operad map P -> O is the category of "
                "P-colour tuples with an O-operation out of their image; for the "
                "standard maps into Com it recovers finite sets with injections, "
                "augmented semi-simplicial injections, finite sets with bijections, "
                "and maps with ordered fibres.",
    "free": "The free O-algebra on a P-algebra A is the colimit over the envelope of "
            "the extension of A; along E0 -> Assoc this is the James construction "
            "(words) and along E0 -> Com the symmetric product (multisets).",
    "compare-free": "Along O x Triv -> O the envelope colimit reduces to the classical "
                    "formula: the disjoint union of O(n) x X^n modulo the symmetric groups.",
    "adjoint-check": "Free algebra is left adjoint to restriction: maps free(A) -> B "
                     "correspond to P-algebra maps A -> p*B, and both match monoidal "
                     "transformations out of the extended envelope functor.",
    "colim-alg": "A K-shaped diagram of O-algebras is an algebra over O_K = K^cocart x O, "
                 "and its colimit is the free algebra along the projection O_K -> O.",
    "pushout": "For commutative monoids the pushout B <- A -> C is the relative tensor "
               "product, the coequalizer of the bar construction b a^n c, which the "
               "envelope colimit reproduces.",
    "sifted-check": "Colimits over sifted shapes such as reflexive pairs are computed on "
                    "underlying objects, since the diagonal slices are weakly contractible.",
    "contractible-check": "The cartesian product in pointed sets commutes with colimits "
                          "over weakly contractible shapes only; a discrete two-object "
                          "shape breaks the comparison.",
    "check-laws": "Every named object satisfies its defining laws at the declared cap.",
}


class WorkspaceError(Exception):
    status = EXIT_PARSE


class ResolveError(WorkspaceError):
    status = EXIT_RESOLVE


class LawError(WorkspaceError):
    status = EXIT_LAW


# -- parsing -----------------------------------------------------------------

def parse_workspace(text: str) -> dict:
    try:
        ws = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(ws, dict):
        raise WorkspaceError("workspace must be a JSON object")
    if ws.get("schema") != SCHEMA:
        raise WorkspaceError(f"unsupported schema {ws.get('schema')!r}; expected {SCHEMA!r}")
    for sec in SECTIONS:
        if not isinstance(ws.get(sec, {}), dict):
            raise WorkspaceError(f"section {sec!r} must be an object")
    tasks = ws.get("tasks", [])
    if not isinstance(tasks, list):
        raise WorkspaceError("'tasks' must be a list")
    seen = set()
    for i, t in enumerate(tasks):
        if not isinstance(t, dict) or "id" not in t or "task" not in t:
            raise WorkspaceError(f"task #{i} needs 'id' and 'task'")
        if t["task"] not in TASK_TYPES:
            raise WorkspaceError(f"task {t['id']!r}: unknown task type {t['task']!r}")
        if t["id"] in seen:
            raise WorkspaceError(f"duplicate task id {t['id']!r}")
        seen.add(t["id"])
        L = t.get("L", 1)
        if not isinstance(L, int) or L < 1:
            raise WorkspaceError(f"task {t['id']!r}: L must be a positive integer")
    for name, spec in ws.get("operads", {}).items():
        cap = spec.get("cap") if isinstance(spec, dict) else None
        if not isinstance(cap, int) or cap < 1:
            raise WorkspaceError(f"operad {name!r}: cap must be a positive integer")
    return ws


def _singular(section):
    return next(k for k, v in SINGULAR.items() if v == section)


def _pairs(raw, what):
    try:
        return {_key(x): _key(y) for x, y in raw}
    except (TypeError, ValueError):
        raise WorkspaceError(f"{what}: expected a list of [source, image] pairs")


def _key(x):
    return tuple(_key(v) for v in x) if isinstance(x, list) else x


# -- resolution --------------------------------------------------------------

class Resolver:
    """Builds named objects lazily and memoises them for the whole run."""

    def __init__(self, ws: dict):
        self.ws = ws
        self._built = {}
        self._laws = {}

    def _spec(self, section, name):
        table = self.ws.get(section, {})
        if name not in table:
            raise ResolveError(f"unknown {_singular(section)} {name!r}")
        return table[name]

    def get(self, section, name):
        key = (section, name)
        if key not in self._built:
            self._built[key] = getattr(self, "_make_" + section)(name, self._spec(section, name))
        return self._built[key]

    def operad(self, name) -> OperadSpec:
        return self.get("operads", name)

    def _make_operads(self, name, spec):
        builder = spec.get("builder")
        if builder == "cocartesian":
            return operad.builder_cocartesian(self.get("categories", spec["category"]), spec["cap"],
                                              name=f"cocartesian:{spec['category']}")
        if builder == "product":
            a, b = (self.operad(n) for n in spec["factors"])
            return operad.product(a, b, name=name)
        try:
            return operad.build_named(builder, spec["cap"])
        except KeyError as exc:
            raise ResolveError(f"operad {name!r}: {exc.args[0]}")

    def _make_maps(self, name, spec):
        kind = spec.get("kind")
        src = self.operad(spec["source"])
        if kind == "e0_to_assoc":
            return operad.e0_to_assoc(src, self.operad(spec["target"]))
        if kind == "terminal":
            return operad.terminal_map(src, self.operad(spec["target"]) if "target" in spec else None)
        if kind == "identity":
            return operad.identity_map(src)
        if kind == "projection":
            return operad.projection(src, spec["index"], self.operad(spec["target"]))
        raise ResolveError(f"map {name!r}: unknown kind {kind!r}")

    def _make_categories(self, name, spec):
        b = spec.get("builder")
        if b == "span":
            return algcolim.span_shape()
        if b == "reflexive_pair":
            return algcolim.reflexive_pair_shape()
        if b in ("point", "arrow"):
            return getattr(refcats, b)()
        if b == "discrete":
            return refcats.discrete(spec.get("n", 2))
        if b == "delta_op":
            return refcats.delta_op(spec["n"])
        if b in ("fin_inj", "delta_plus_inj", "fin_iso", "fin", "fin_ordered_fibers"):
            return getattr(refcats, b)(spec["L"])
        if b == "table":
            try:
                return category_from_table(spec, name=name)
            except (KeyError, TypeError, ValueError) as exc:
                raise WorkspaceError(f"category {name!r}: malformed table ({exc})")
        if b == "finite":
            gens = {g: tuple(st) for g, st in spec.get("generators", {}).items()}
            return refcats.finite_category(spec["objects"], gens, name=name)
        raise ResolveError(f"category {name!r}: unknown builder {b!r}")

    def _make_targets(self, name, spec):
        b = spec.get("builder")
        if b == "finset":
            return target.finset_cartesian()
        if b == "ptdfinset":
            return target.ptdfinset_cartesian()
        raise ResolveError(f"target {name!r}: unknown builder {b!r}")

    def target(self, name):
        return self.get("targets", name) if name else target.finset_cartesian()

    def _make_monoids(self, name, spec):
        b = spec.get("builder")
        if b == "cyclic":
            return target.cyclic_group(spec["n"], name=name)
        if b == "max":
            return target.max_monoid(spec.get("n", 2), name=name)
        if b == "idempotent":
            return target.idempotent_monoid()
        if b == "s3":
            return target.symmetric_group3()
        if b == "catalog":
            ms = target.all_monoids(spec["n"], spec.get("commutative", False))
            if not 0 <= spec["index"] < len(ms):
                raise ResolveError(f"monoid {name!r}: catalog index out of range")
            return ms[spec["index"]]
        if b == "table":
            elems = tuple(_key(x) for x in spec["elements"])
            rows = [[_key(v) for v in row] for row in spec["table"]]
            pos = {x: i for i, x in enumerate(elems)}
            M = target.monoid_from_function(elems, lambda x, y: rows[pos[x]][pos[y]],
                                            _key(spec["unit"]), name=name)
            if not (M.is_associative() and M.is_unital()):
                raise LawError(f"monoid {name!r} is not associative and unital")
            return M
        raise ResolveError(f"monoid {name!r}: unknown builder {b!r}")

    def _make_algebras(self, name, spec):
        kind = spec.get("kind")
        T = self.target(spec.get("target"))
        if kind == "restrict":
            return target.restrict_algebra(self.get("algebras", spec["algebra"]),
                                           self.get("maps", spec["map"]), name=name)
        O = self.operad(spec["operad"])
        if kind == "pointed_set":
            return target.pointed_set_algebra(O, tuple(spec["elements"]), spec["base"], T, name=name)
        if kind == "set":
            return target.set_algebra(O, tuple(spec["elements"]), T, name=name)
        if kind == "monoid":
            return target.monoid_algebra(O, self.get("monoids", spec["monoid"]), T, name=name)
        raise ResolveError(f"algebra {name!r}: unknown kind {kind!r}")

    def _make_diagrams(self, name, spec):
        K = self.get("categories", spec["shape"])
        O = self.operad(spec["operad"])
        algebras = {}
        for k in K.objects:
            if k not in spec["objects"]:
                raise ResolveError(f"diagram {name!r}: no algebra for object {k!r}")
            algebras[k] = self.get("algebras", spec["objects"][k])
        gens = {}
        for g, raw in spec.get("generators", {}).items():
            f = next((m for _, _, m in K.morphisms() if m[2] == (g,)), None)
            if f is None:
                raise ResolveError(f"diagram {name!r}: {g!r} is not a generator of {K.name}")
            gens[f] = _pairs(raw, f"diagram {name!r} generator {g!r}")
        G = algcolim.AlgebraDiagram.from_generators(K, O, algebras, gens, name=name)
        bad = G.check()
        if bad:
            raise LawError(f"diagram {name!r} is not a functor to algebras: {bad[0]}")
        return G

    # law summaries, embedded in every task report

    def laws(self, section, name, obj):
        key = (section, name)
        if key not in self._laws:
            self._laws[key] = self._check(section, obj)
        return self._laws[key]

    def _check(self, section, obj):
        if section == "operads":
            cap = min(obj.cap, 3)
            return f"operad laws to arity {cap}", operad.check_operad_laws(obj, cap)
        if section == "maps":
            cap = min(obj.source.cap, obj.target.cap, 3)
            return f"operad map laws to arity {cap}", obj.check_laws(cap)
        if section == "categories":
            return "category laws", check_category_laws(obj)
        if section == "algebras":
            return "algebra laws to arity 3", target.algebra_check(obj)
        if section == "diagrams":
            return "diagram functoriality", obj.check()
        if section == "monoids":
            bad = [f"{obj.name} is not {w}" for w, ok in (("associative", obj.is_associative()),
                                                          ("unital", obj.is_unital())) if not ok]
            return "monoid laws", bad
        return "no laws", []


# -- reports -----------------------------------------------------------------

class Report:
    def __init__(self, task):
        self.lines = [f"== task {task['id']} ({task['task']}) =="]
        self.mismatch = False
        self.law_failure = False
        self.consumed = set()

    def add(self, line=""):
        self.lines.append(line)

    def kv(self, key, value):
        self.lines.append(f"{key}: {value}")

    def fail(self, what):
        self.mismatch = True
        self.lines.append(f"MISMATCH: {what}")

    def text(self):
        status = "law-failure" if self.law_failure else "mismatch" if self.mismatch else "ok"
        return "\n".join(self.lines + [f"status: {status}", ""]) + "\n"


def _consume(R: Resolver, rep: Report, *refs):
    """Resolve names and record their law summaries in the report."""
    out = []
    for section, name in refs:
        obj = R.get(section, name)
        spec = R.ws[section][name]
        keys = ("source", "target") if section == "maps" else ("operad",)
        deps = [("operads", spec[k]) for k in keys
                if section in ("maps", "algebras", "diagrams") and k in spec]
        if deps:
            _consume(R, rep, *deps)
        if (section, name) in rep.consumed:
            out.append(obj)
            continue
        rep.consumed.add((section, name))
        label, bad = R.laws(section, name, obj)
        rep.add(f"laws {_singular(section)} {name}: {label}, {len(bad)} violations")
        if bad:
            rep.law_failure = True
            rep.add(f"  first violation: {bad[0]}")
        out.append(obj)
    return out


def _fmt(x):
    return repr(x)


def _class_table(rep: Report, T, limit=200):
    by = T.classes_by_grade()
    names = {}
    for g in sorted(by):
        for c in by[g]:
            names[c] = f"c{len(names)}"
    rep.kv("classes", len(T))
    rep.kv("stabilized", str(bool(T.stabilized)).lower())
    for c, n in list(names.items())[:limit]:
        rep.add(f"  {n} grade {T.grade(c)}: {T.describe(c)}")
    if len(names) > limit:
        rep.add(f"  ... {len(names) - limit} more")
    return names


def _product_table(rep: Report, T, names, limit=400):
    if not T.O.ops_with_output(T.color, 2):
        return
    table = T.product_table()
    rep.add(f"products ({len(table)} defined):")
    for (x, y), z in list(table.items())[:limit]:
        rep.add(f"  {names[x]} * {names[y]} = {names[z]}")
    if len(table) > limit:
        rep.add(f"  ... {len(table) - limit} more")


def _oracle(rep: Report, T, A, kind):
    """Compare against words or multisets over the non-base letters."""
    c = A.operad.colors[0]
    nullary = A.operad.ops_with_output(c, 0)
    base = A.act(nullary[0], ()) if nullary else None
    letters = [x for x in A.carrier(c).elements if x != base]
    eta = T.generator_map(A)[c]
    unit = T.unit_class()
    L = T.L

    def norm(w):
        return tuple(w) if kind == "words" else tuple(sorted(w, key=letters.index))

    word_of = {unit: ()}
    frontier = [((), unit)]
    while frontier:
        new = []
        for w, cls in frontier:
            if len(w) == L:
                continue
            for a in letters:
                nxt = T.op(T.O.ops_with_output(T.color, 2)[0], (cls, eta[a]))
                key = norm(w + (a,))
                if nxt not in word_of:
                    word_of[nxt] = key
                    new.append((key, nxt))
                elif word_of[nxt] != key and kind == "words":
                    rep.fail(f"two words {word_of[nxt]} and {key} share a class")
        frontier = new
    expected = set()
    level = {()}
    for _ in range(L + 1):
        expected |= level
        level = {norm(w + (a,)) for w in level for a in letters}
    got = set(word_of.values())
    rep.kv(f"{kind} oracle", f"{len(expected)} expected, {len(got)} reached, {len(T)} classes")
    if got != expected or len(T) != len(expected):
        rep.fail(f"class set differs from the {kind} oracle")
        return
    cls_of = {w: c for c, w in word_of.items()}
    for (x, y), z in T.product_table().items():
        if norm(word_of[x] + word_of[y]) != word_of[z]:
            rep.fail(f"product {word_of[x]} * {word_of[y]} is not concatenation")
            return
    missing = [(u, v) for u in expected for v in expected if len(u) + len(v) <= L
               and T.op(T.O.ops_with_output(T.color, 2)[0], (cls_of[u], cls_of[v])) is None]
    if missing:
        rep.fail(f"{len(missing)} products within the cap are undefined")


def _task_envelope(R, t, rep, dot_dir):
    p, = _consume(R, rep, ("maps", t["map"]))
    L = t["L"]
    E = envelope.build_envelope(p, L)
    S = E.category(L, skeletal=True)
    rep.kv("map", f"{p.source.name} -> {p.target.name}")
    rep.kv("L", L)
    rep.kv("objects", len([x for x in E.objects if x.grade <= L]))
    rep.kv("skeleton objects", len(S.objects))
    bad = envelope.check_envelope(E, min(L, 3))
    rep.kv("envelope validity to grade " + str(min(L, 3)), f"{len(bad)} violations")
    if bad:
        rep.law_failure = True
    full = E.category(L, skeletal=True, generators=False)
    by = {}
    for x in full.objects:
        by.setdefault(x.grade, []).append(x)
    for pair in t.get("homs", []):
        a, b = pair
        sizes = sorted(len(full.hom(x, y)) for x in by.get(a, []) for y in by.get(b, []))
        rep.add(f"  |hom({a},{b})| over skeleton objects: {sizes}")
    if "reference" in t:
        ref, = _consume(R, rep, ("categories", t["reference"]))
        res = envelope.check_envelope_iso(E, ref, L)
        rep.kv("equivalent to " + t["reference"], str(res.ok).lower())
        if res.ok:
            for x, y in sorted(res.iso.object_map.items(), key=lambda kv: (kv[0].grade, repr(kv))):
                rep.add(f"  witness {x!r} -> {y!r}")
        else:
            rep.fail(res.iso.obstruction or "no equivalence found")
    if dot_dir:
        _write_dot(dot_dir, t["id"], S)


def _write_dot(dot_dir, tid, C: FiniteCategory):
    os.makedirs(dot_dir, exist_ok=True)
    with open(os.path.join(dot_dir, f"{tid}.dot"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(C.to_dot())
    with open(os.path.join(dot_dir, f"{tid}.category.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(C.to_table(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _task_free(R, t, rep, dot_dir):
    p, A = _consume(R, rep, ("maps", t["map"]), ("algebras", t["algebra"]))
    L = t["L"]
    T = freealg.free_algebra(p, A, L, stabilize=t.get("stabilize", True))
    rep.kv("map", f"{p.source.name} -> {p.target.name}")
    rep.kv("L", L)
    names = _class_table(rep, T)
    _product_table(rep, T, names)
    if t.get("oracle") in ("words", "multisets"):
        _oracle(rep, T, A, t["oracle"])
    elif "expect_classes" in t and len(T) != t["expect_classes"]:
        rep.fail(f"expected {t['expect_classes']} classes, got {len(T)}")


def _task_compare_free(R, t, rep, dot_dir):
    O, = _consume(R, rep, ("operads", t["operad"]))
    triv = operad.builder_triv(O.cap)
    X = target.FinSet(tuple(t["elements"]))
    res = freealg.compare_free(O, X, t["L"], triv)
    rep.kv("operad", O.name)
    rep.kv("|X|", len(X))
    rep.kv("L", t["L"])
    rep.kv("orbit classes", len(res.classic_side))
    rep.kv("envelope classes", len(res.envelope_side))
    rep.kv("isomorphic", str(res.ok).lower())
    if not res.ok:
        rep.fail(res.obstruction)


def _task_adjoint(R, t, rep, dot_dir):
    p, A, B = _consume(R, rep, ("maps", t["map"]), ("algebras", t["algebra"]), ("algebras", t["into"]))
    L = t["L"]
    T = freealg.free_algebra(p, A, L, stabilize=False)
    adj = freealg.adjunction_check(p, A, B, L, T=T)
    F = envelope.extend_algebra(T.E, A)
    uni = freealg.colim_universal_property_check(F, B, L, T=T)
    rep.kv("L", L)
    rep.kv("maps free(A) -> B", adj.left if adj.left is not None else "inconclusive")
    rep.kv("maps A -> p*B", adj.right)
    rep.kv("restriction bijective", str(adj.bijective).lower())
    rep.kv("monoidal transformations", uni.transformations)
    if not adj.ok:
        rep.fail(adj.detail or "adjunction counts differ")
    if not uni.ok:
        rep.fail("transformations and algebra maps differ")


def _task_colim(R, t, rep, dot_dir):
    G, = _consume(R, rep, ("diagrams", t["diagram"]))
    L = t["L"]
    res = algcolim.colim_algebras(G, L, stabilize=t.get("stabilize", False))
    T = res.algebra
    rep.kv("shape", G.K.name)
    rep.kv("L", L)
    names = _class_table(rep, T)
    for k in G.K.objects:
        leg = res.legs[k]
        rep.add(f"  leg {k}: " + ", ".join(f"{x!r}->{names[leg[x]]}" for x in sorted(leg, key=repr)))
    _product_table(rep, T, names)
    bad = res.leg_report(G)
    rep.kv("cocone checks", f"{len(bad)} violations")
    if bad:
        rep.fail(bad[0])
    if "expect_classes" in t and len(T) != t["expect_classes"]:
        rep.fail(f"expected {t['expect_classes']} classes, got {len(T)}")


def _task_pushout(R, t, rep, dot_dir):
    O, = _consume(R, rep, ("operads", t["operad"]))
    L = t.get("L", 4)
    if "sweep" in t:
        n = agree = 0
        for A, B, C, f, g in algcolim.commutative_spans(t["sweep"]):
            n += 1
            agree += algcolim.pushout_commutative(A, B, C, f, g, O, L=L).agree
        rep.kv("spans", n)
        rep.kv("three-way agreement", agree)
        if agree != n:
            rep.fail(f"{n - agree} spans disagree")
        return
    A, B, C = (R.get("monoids", t[k]) for k in ("A", "B", "C"))
    f, g = _pairs(t["f"], "f"), _pairs(t["g"], "g")
    res = algcolim.pushout_commutative(A, B, C, f, g, O, L=L)
    rep.kv("span", f"{B.name} <- {A.name} -> {C.name}")
    rep.kv("bar coequalizer classes", len(res.bar))
    rep.kv("presentation classes", len(res.presentation))
    rep.kv("envelope classes", len(res.envelope.algebra))
    for block in res.bar.partition():
        rep.add(f"  class {block}")
    rep.kv("agree", str(res.agree).lower())
    if not res.agree:
        rep.fail(res.detail)
    if t.get("finality"):
        fin, laws = algcolim.pushout_finality(A, B, C, f, g, O)
        rep.kv("bar cut functor laws", f"{len(laws)} violations")
        rep.kv("bar cut final", str(fin.is_iso).lower())
        if laws or not fin.is_iso:
            rep.fail("the bar cut does not compute the envelope colimit")


def _task_sifted(R, t, rep, dot_dir):
    O, = _consume(R, rep, ("operads", t["operad"]))
    L = t.get("L", 2)
    if "sweep" in t:
        sw = t["sweep"]
        n = agree = 0
        for case in algcolim.reflexive_pairs(sw.get("max_m1", 4), sw.get("max_m0", 3),
                                             commutative=O.name == "com"):
            r = algcolim.sifted_preservation_check(*case, O, L=L, slice_levels=2, slice_points=())
            n += 1
            agree += r.agree
        rep.kv("reflexive pairs", n)
        rep.kv("agree", agree)
        if agree != n:
            rep.fail(f"{n - agree} reflexive pairs disagree")
        return
    M1, M0 = R.get("monoids", t["M1"]), R.get("monoids", t["M0"])
    d0, d1, s = (_pairs(t[k], k) for k in ("d0", "d1", "s"))
    r = algcolim.sifted_preservation_check(M1, M0, d0, d1, s, O, L=L)
    rep.kv("underlying coequalizer classes", len(r.underlying))
    rep.kv("envelope classes", len(r.envelope.algebra))
    rep.kv("agree", str(r.agree).lower())
    for xs, size, verdict in r.slices:
        rep.add(f"  diagonal slice at {xs}: {size} objects, {verdict.status}")
        if verdict.status != "certified_contractible":
            rep.fail(f"slice at {xs} is not certified")
    if not r.agree:
        rep.fail(r.detail)


def _task_contractible(R, t, rep, dot_dir):
    G, A = _consume(R, rep, ("diagrams", t["diagram"]), ("algebras", t["algebra"]))
    r = algcolim.contractible_compat_check(G, A, t.get("L", 4))
    rep.kv("shape", r.shape)
    rep.kv("contractibility", r.verdict.status)
    rep.kv("|colim G x A|", r.left)
    rep.kv("|colim(G x A)|", r.right)
    rep.kv("bijective", str(r.bijective).lower())
    if r.detail:
        rep.kv("detail", r.detail)
    expect = t.get("expect", "bijective")
    if (expect == "bijective") != r.bijective:
        rep.fail(f"expected {expect}")


def _task_laws(R, t, rep, dot_dir):
    expect_fail = t.get("expect") == "fail"
    for ref in t.get("objects", []):
        section, name = ref.split(":", 1)
        plural = SINGULAR.get(section)
        if plural is None:
            raise ResolveError(f"check-laws: unknown section {section!r}")
        obj = R.get(plural, name)
        label, bad = R.laws(plural, name, obj)
        rep.add(f"{section} {name}: {label}, {len(bad)} violations")
        for line in bad[:3]:
            rep.add(f"  {line}")
        if bad and not expect_fail:
            rep.law_failure = True
        if expect_fail and not bad:
            rep.fail(f"{section} {name} was expected to fail")


RUNNERS = {
    "envelope": _task_envelope, "free": _task_free, "compare-free": _task_compare_free,
    "adjoint-check": _task_adjoint, "colim-alg": _task_colim, "pushout": _task_pushout,
    "sifted-check": _task_sifted, "contractible-check": _task_contractible,
    "check-laws": _task_laws,
}


def run_task(ws: dict, task: dict, dot_dir=None, resolver=None) -> tuple[str, int]:
    R = resolver or Resolver(ws)
    rep = Report(task)
    try:
        RUNNERS[task["task"]](R, task, rep, dot_dir)
    except KeyError as exc:
        raise WorkspaceError(f"task {task['id']!r}: missing field {exc.args[0]!r}")
    except CapError as exc:
        raise ResolveError(f"task {task['id']!r}: {exc}")
    except (StructuralError, freealg.CompatibilityError) as exc:
        rep.law_failure = True
        rep.add(f"error: {exc}")
    code = EXIT_LAW if rep.law_failure else EXIT_MISMATCH if rep.mismatch else EXIT_OK
    return rep.text(), code


def _cache_key(ws: dict, task: dict) -> str:
    from . import __version__
    body = {k: ws.get(k, {}) for k in SECTIONS}
    blob = json.dumps([__version__, SCHEMA, body, task], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _run_cached(ws, task, dot_dir, cache_dir, resolver=None):
    path = None
    if cache_dir and not dot_dir:
        path = os.path.join(cache_dir, _cache_key(ws, task) + ".json")
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                hit = json.load(fh)
            log.info("cache hit for task %s", task["id"])
            return hit["report"], hit["status"]
    text, code = run_task(ws, task, dot_dir, resolver)
    if path:
        os.makedirs(cache_dir, exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump({"report": text, "status": code}, fh)
        os.replace(tmp, path)
    return text, code


def _worker(args):
    ws, task, dot_dir, cache_dir = args
    try:
        return _run_cached(ws, task, dot_dir, cache_dir)
    except WorkspaceError as exc:
        return f"error: {exc}\n", exc.status


def run(ws: dict, only=None, dot_dir=None, cache_dir=None, jobs=1) -> tuple[str, int]:
    tasks = [t for t in ws.get("tasks", []) if only is None or t["id"] == only]
    if only is not None and not tasks:
        raise ResolveError(f"unknown task {only!r}")
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, [(ws, t, dot_dir, cache_dir) for t in tasks]))
        for text, code in results:
            if text.startswith("error: "):
                err = {EXIT_PARSE: WorkspaceError, EXIT_RESOLVE: ResolveError}.get(code, LawError)
                raise err(text[7:].strip())
    else:
        R = Resolver(ws)
        results = [_run_cached(ws, t, dot_dir, cache_dir, R) for t in tasks]
    header = f"# workspace {ws.get('name', 'unnamed')} ({SCHEMA}), {len(tasks)} tasks\n\n"
    body = "\n".join(text for text, _ in results)
    codes = [c for _, c in results]
    code = EXIT_LAW if EXIT_LAW in codes else EXIT_MISMATCH if EXIT_MISMATCH in codes else EXIT_OK
    return header + body, code


def explain(ws: dict, task_id: str) -> str:
    task = next((t for t in ws.get("tasks", []) if t["id"] == task_id), None)
    if task is None:
        raise ResolveError(f"unknown task {task_id!r}")
    return f"== explain {task_id} ({task['task']}) ==\n{EXPLAIN[task['task']]}\n"


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WorkspaceError(f"cannot read workspace: {exc}")
    return parse_workspace(text)


def build_parser():
    ap = argparse.ArgumentParser(prog="opfree", description="Relative free algebras over finite operads.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a workspace")
    r.add_argument("--workspace", required=True)
    r.add_argument("--cache-dir")
    r.add_argument("--emit-dot", metavar="DIR")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--task")
    r.add_argument("--out")
    e = sub.add_parser("explain", help="state what a task checks")
    e.add_argument("--workspace", required=True)
    e.add_argument("task")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        ws = _load(args.workspace)
        if args.command == "explain":
            text, code = explain(ws, args.task), EXIT_OK
        else:
            text, code = run(ws, args.task, args.emit_dot, args.cache_dir, max(1, args.jobs))
    except WorkspaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
