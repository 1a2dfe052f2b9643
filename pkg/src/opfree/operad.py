"""Colored symmetric operads as finite tables up to an arity cap.

Conventions. An operation is an ``Op(inputs, output, label)``. The symmetric
action is a right action: slot ``i`` of ``act(op, sigma)`` feeds slot
``sigma[i]`` of ``op``, so its input colors are ``inputs[sigma[i]]`` and
``act(act(op, s), t) == act(op, compose_perm(s, t))``. Composition
``gamma(op, [psi_1..psi_n])`` plugs ``psi_i`` into slot ``i`` and lists the
inputs block by block.
"""

from __future__ import annotations

import itertools
from collections import namedtuple

from .fincat import StructuralError


class CapError(ValueError):
    """A computation needs an arity above the operad's cap."""

    def __init__(self, required, cap, what=""):
        super().__init__(f"arity {required} exceeds cap {cap}{': ' + what if what else ''}")
        self.required = required
        self.cap = cap


Op = namedtuple("Op", "inputs output label")
Op.arity = property(lambda self: len(self.inputs))


def compose_perm(s, t):
    return tuple(s[i] for i in t)


def invert_perm(s):
    inv = [0] * len(s)
    for i, j in enumerate(s):
        inv[j] = i
    return tuple(inv)


def block_perm(sigma, sizes):
    """Permutation moving block i of a concatenation to block position sigma[i].

    Flat slot ``off(i) + r`` of the source goes to ``off'(sigma[i]) + r``,
    where ``off'`` are offsets of the blocks reordered by ``sigma^-1``.
    """
    n = len(sigma)
    inv = invert_perm(sigma)
    new_sizes = [sizes[inv[j]] for j in range(n)]
    off = list(itertools.accumulate([0] + list(sizes)))
    new_off = list(itertools.accumulate([0] + new_sizes))
    out = [0] * off[-1]
    for i in range(n):
        for r in range(sizes[i]):
            out[off[i] + r] = new_off[sigma[i]] + r
    return tuple(out)


def block_sum(perms):
    out = []
    off = 0
    for p in perms:
        out.extend(off + x for x in p)
        off += len(p)
    return tuple(out)


class OperadSpec:
    """A colored symmetric operad with operations of arity <= cap.

    ``mul_fn(inputs, output)`` enumerates operations, ``unit_fn(color)``
    gives identities, ``gamma_fn`` and ``act_fn`` compute composition and the
    symmetric action. The multimorphism table and the action table are
    materialised at construction; laws are checked by ``check_operad_laws``.
    """

    def __init__(self, name, colors, cap, mul_fn, unit_fn, gamma_fn, act_fn):
        self.name = name
        self.colors = tuple(colors)
        self.cap = cap
        self._unit_fn = unit_fn
        self._gamma_fn = gamma_fn
        self._mul = {}
        self._by_output = {}
        for n in range(cap + 1):
            for inputs in itertools.product(self.colors, repeat=n):
                for out in self.colors:
                    ops = tuple(mul_fn(inputs, out))
                    for op in ops:
                        if op.inputs != inputs or op.output != out:
                            raise StructuralError(f"{name}: {op} listed under {inputs}->{out}")
                    self._mul[(inputs, out)] = ops
                    self._by_output.setdefault((out, n), []).extend(ops)
        self._act = {}
        for ops in self._mul.values():
            for op in ops:
                for sigma in itertools.permutations(range(op.arity)):
                    self._act[(op, sigma)] = act_fn(op, sigma)
        self._gamma_cache = {}

    def __repr__(self):
        return f"OperadSpec({self.name!r}, colors={len(self.colors)}, cap={self.cap})"

    def mul(self, inputs, output):
        inputs = tuple(inputs)
        if len(inputs) > self.cap:
            raise CapError(len(inputs), self.cap, f"{self.name}.mul")
        return self._mul.get((inputs, output), ())

    def ops_with_output(self, color, arity):
        return tuple(self._by_output.get((color, arity), ()))

    def operations(self, arity=None):
        for (inputs, _), ops in self._mul.items():
            if arity is None or len(inputs) == arity:
                yield from ops

    def unit(self, color):
        return self._unit_fn(color)

    def is_unit(self, op):
        return op.arity == 1 and op == self.unit(op.output)

    def act(self, op, sigma):
        sigma = tuple(sigma)
        try:
            return self._act[(op, sigma)]
        except KeyError:
            raise StructuralError(f"{self.name}: no action entry for {op} under {sigma}") from None

    def gamma(self, op, ops):
        ops = tuple(ops)
        key = (op, ops)
        r = self._gamma_cache.get(key)
        if r is not None:
            return r
        if len(ops) != op.arity:
            raise StructuralError(f"{self.name}: gamma of arity {op.arity} with {len(ops)} inputs")
        for i, psi in enumerate(ops):
            if psi.output != op.inputs[i]:
                raise StructuralError(
                    f"{self.name}: color mismatch in gamma slot {i}: {psi.output} != {op.inputs[i]}")
        total = sum(p.arity for p in ops)
        if total > self.cap:
            raise CapError(total, self.cap, f"{self.name}.gamma")
        r = self._gamma_fn(op, ops)
        self._gamma_cache[key] = r
        return r

    def signature_counts(self):
        return {k: len(v) for k, v in sorted(self._mul.items(), key=repr) if v}


# -- law checking -------------------------------------------------------------

def _fillings(O, colors, budget, max_each=None):
    """All tuples (psi_1..psi_n) with psi_i.output == colors[i], total arity <= budget."""
    if not colors:
        yield ()
        return
    first, rest = colors[0], colors[1:]
    for k in range(budget + 1):
        for psi in O.ops_with_output(first, k):
            for tail in _fillings(O, rest, budget - k):
                yield (psi,) + tail


def composable_instances(O, cap=None):
    cap = O.cap if cap is None else cap
    for phi in O.operations():
        if phi.arity > cap:
            continue
        for psis in _fillings(O, phi.inputs, cap):
            yield phi, psis


def check_operad_laws(O: OperadSpec, cap=None, max_violations=50):
    """Exhaustive unit, associativity, and equivariance check up to ``cap``.

    Returns a list of violation strings; empty iff every instance holds.
    Color mismatches raise StructuralError from ``gamma``.
    """
    cap = O.cap if cap is None else cap
    report = []

    def add(msg):
        report.append(msg)
        return len(report) >= max_violations

    for c in O.colors:
        u = O.unit(c)
        if u not in O.mul((c,), c):
            report.append(f"unit of {c} missing from table")
    for phi in O.operations():
        if phi.arity > cap:
            continue
        if O.gamma(O.unit(phi.output), (phi,)) != phi:
            if add(f"left unit fails at {phi}"):
                return report
        if O.gamma(phi, tuple(O.unit(c) for c in phi.inputs)) != phi:
            if add(f"right unit fails at {phi}"):
                return report
        n = phi.arity
        ident = tuple(range(n))
        if O.act(phi, ident) != phi:
            if add(f"identity permutation moves {phi}"):
                return report
        for sigma in itertools.permutations(range(n)):
            img = O.act(phi, sigma)
            if img.inputs != tuple(phi.inputs[sigma[i]] for i in range(n)) or img.output != phi.output:
                if add(f"act({phi}, {sigma}) has wrong colors"):
                    return report
            for tau in itertools.permutations(range(n)):
                if O.act(img, tau) != O.act(phi, compose_perm(sigma, tau)):
                    if add(f"action not associative at {phi}, {sigma}, {tau}"):
                        return report

    for phi, psis in composable_instances(O, cap):
        top = O.gamma(phi, psis)
        sizes = [p.arity for p in psis]
        # associativity
        for chis in _fillings(O, top.inputs, cap):
            lhs = O.gamma(top, chis)
            blocks, off = [], 0
            for p in psis:
                blocks.append(O.gamma(p, chis[off:off + p.arity]))
                off += p.arity
            if lhs != O.gamma(phi, blocks):
                if add(f"associativity fails at {phi}; {psis}; {chis}"):
                    return report
        # equivariance in the top operation
        n = phi.arity
        for sigma in itertools.permutations(range(n)):
            # slot i of phi.sigma is slot sigma[i] of phi
            plug = tuple(psis[sigma[i]] for i in range(n))
            lhs = O.gamma(O.act(phi, sigma), plug)
            rhs = O.act(top, block_perm(sigma, [p.arity for p in plug]))
            if lhs != rhs:
                if add(f"equivariance (top) fails at {phi}, {sigma}"):
                    return report
        # equivariance in the inner operations
        for taus in itertools.product(*(itertools.permutations(range(k)) for k in sizes)):
            lhs = O.gamma(phi, tuple(O.act(p, t) for p, t in zip(psis, taus)))
            rhs = O.act(top, block_sum(taus))
            if lhs != rhs:
                if add(f"equivariance (inner) fails at {phi}, {taus}"):
                    return report
    return report


# -- builders -------------------------------------------------------------

def _single(name, cap, arities, gamma_label=None):
    def mul(inputs, out):
        return [Op(inputs, out, ())] if len(inputs) in arities else []

    return OperadSpec(
        name, ("*",), cap, mul,
        lambda c: Op((c,), c, ()),
        lambda op, ops: Op(tuple(c for p in ops for c in p.inputs), op.output, ()),
        lambda op, s: Op(tuple(op.inputs[i] for i in s), op.output, ()))


def builder_com(cap):
    """Commutative operad: one operation in every arity."""
    return _single("com", cap, range(cap + 1))


def builder_e0(cap):
    """Operations of arity 0 and 1 only."""
    return _single("e0", cap, (0, 1))


def builder_triv(cap):
    """Only the unary identity."""
    return _single("triv", cap, (1,))


def builder_assoc(cap):
    """Associative operad; an operation is the order in which inputs multiply."""
    def mul(inputs, out):
        return [Op(inputs, out, order) for order in itertools.permutations(range(len(inputs)))]

    def gamma(op, ops):
        offs = list(itertools.accumulate([0] + [p.arity for p in ops]))
        order = tuple(offs[i] + o for i in op.label for o in ops[i].label)
        return Op(tuple(c for p in ops for c in p.inputs), op.output, order)

    def act(op, s):
        inv = invert_perm(s)
        return Op(tuple(op.inputs[i] for i in s), op.output, tuple(inv[o] for o in op.label))

    return OperadSpec("e1", ("*",), cap, mul, lambda c: Op((c,), c, (0,)), gamma, act)


def builder_cocartesian(K, cap, name=None):
    """Cocartesian operad on a finite category K: operations are tuples of arrows."""
    def mul(inputs, out):
        return [Op(inputs, out, fs) for fs in itertools.product(*(K.hom(x, out) for x in inputs))]

    def gamma(op, ops):
        label = tuple(K.compose(f, g) for f, p in zip(op.label, ops) for g in p.label)
        return Op(tuple(c for p in ops for c in p.inputs), op.output, label)

    def act(op, s):
        return Op(tuple(op.inputs[i] for i in s), op.output, tuple(op.label[i] for i in s))

    return OperadSpec(name or f"cocartesian:{K.name}", K.objects, cap, mul,
                      lambda c: Op((c,), c, (K.identity(c),)), gamma, act)


def _factor(op, k):
    return op.label[k]


def product(O1: OperadSpec, O2: OperadSpec, name=None):
    """Product operad: colors are pairs, operations are pairs of operations."""
    if O1.cap != O2.cap:
        raise ValueError(f"product needs a shared cap, got {O1.cap} and {O2.cap}")
    colors = [(a, b) for a in O1.colors for b in O2.colors]

    def mul(inputs, out):
        i1 = tuple(c[0] for c in inputs)
        i2 = tuple(c[1] for c in inputs)
        return [Op(inputs, out, (p, q)) for p in O1.mul(i1, out[0]) for q in O2.mul(i2, out[1])]

    def gamma(op, ops):
        p = O1.gamma(op.label[0], tuple(_factor(o, 0) for o in ops))
        q = O2.gamma(op.label[1], tuple(_factor(o, 1) for o in ops))
        return Op(tuple(c for o in ops for c in o.inputs), op.output, (p, q))

    def act(op, s):
        return Op(tuple(op.inputs[i] for i in s), op.output,
                  (O1.act(op.label[0], s), O2.act(op.label[1], s)))

    def unit(c):
        return Op((c,), c, (O1.unit(c[0]), O2.unit(c[1])))

    return OperadSpec(name or f"product:{O1.name},{O2.name}", colors, O1.cap, mul, unit, gamma, act)


# -- morphisms ------------------------------------------------------------

class OperadMorphism:
    """A map of operads given by a color map and an operation map."""

    def __init__(self, source, target, color_map, op_map, name="p"):
        self.source = source
        self.target = target
        self.color_map = dict(color_map) if not callable(color_map) else color_map
        self._op_map = op_map
        self.name = name
        self._cache = {}

    def __repr__(self):
        return f"OperadMorphism({self.source.name} -> {self.target.name})"

    def color(self, c):
        return self.color_map(c) if callable(self.color_map) else self.color_map[c]

    def __call__(self, op):
        r = self._cache.get(op)
        if r is None:
            r = self._cache[op] = self._op_map(op)
        return r

    def check_laws(self, cap=None, max_violations=50):
        S, T = self.source, self.target
        cap = min(S.cap, T.cap) if cap is None else cap
        report = []
        for phi in S.operations():
            if phi.arity > cap:
                continue
            img = self(phi)
            if img.inputs != tuple(self.color(c) for c in phi.inputs) or img.output != self.color(phi.output):
                report.append(f"{self.name}({phi}) has wrong colors")
                continue
            if img not in T.mul(img.inputs, img.output):
                report.append(f"{self.name}({phi}) not in target table")
            for sigma in itertools.permutations(range(phi.arity)):
                if self(S.act(phi, sigma)) != T.act(img, sigma):
                    report.append(f"{self.name} does not commute with action at {phi}, {sigma}")
        for c in S.colors:
            if self(S.unit(c)) != T.unit(self.color(c)):
                report.append(f"{self.name} does not preserve the unit of {c}")
        for phi, psis in composable_instances(S, cap):
            if self(S.gamma(phi, psis)) != T.gamma(self(phi), tuple(self(p) for p in psis)):
                report.append(f"{self.name} does not commute with gamma at {phi}; {psis}")
                if len(report) >= max_violations:
                    break
        return report


def terminal_map(O: OperadSpec, com: OperadSpec | None = None) -> OperadMorphism:
    """The unique map to the commutative operad."""
    com = com or builder_com(O.cap)
    return OperadMorphism(O, com, lambda c: "*",
                          lambda op: Op(("*",) * op.arity, "*", ()), name=f"{O.name}->com")


def identity_map(O: OperadSpec) -> OperadMorphism:
    return OperadMorphism(O, O, {c: c for c in O.colors}, lambda op: op, name=f"id_{O.name}")


def e0_to_assoc(e0: OperadSpec, assoc: OperadSpec) -> OperadMorphism:
    return OperadMorphism(e0, assoc, {"*": "*"},
                          lambda op: Op(op.inputs, op.output, tuple(range(op.arity))),
                          name="e0->e1")


def projection(prod: OperadSpec, k: int, target: OperadSpec) -> OperadMorphism:
    """Projection of a product operad onto factor ``k``."""
    return OperadMorphism(prod, target, lambda c: c[k], lambda op: op.label[k],
                          name=f"pr{k}:{prod.name}->{target.name}")


BUILDERS = {
    "com": builder_com,
    "e0": builder_e0,
    "e1": builder_assoc,
    "assoc": builder_assoc,
    "triv": builder_triv,
}


def build_named(name, cap, categories=None):
    """Resolve ``com``, ``e0``, ``e1``, ``triv``, ``cocartesian:<cat>``,
    ``product:<a>,<b>``."""
    categories = categories or {}
    if name in BUILDERS:
        return BUILDERS[name](cap)
    if name.startswith("cocartesian:"):
        cat = name.split(":", 1)[1]
        if cat not in categories:
            raise KeyError(f"unknown category {cat!r}")
        return builder_cocartesian(categories[cat], cap, name=name)
    if name.startswith("product:"):
        a, b = _split_product(name.split(":", 1)[1])
        return product(build_named(a, cap, categories), build_named(b, cap, categories), name=name)
    raise KeyError(f"unknown operad {name!r}")


def _split_product(arg):
    depth = 0
    for i, ch in enumerate(arg):
        if ch == "," and depth == 0:
            return arg[:i], arg[i + 1:]
        depth += ch == "("
        depth -= ch == ")"
    raise KeyError(f"malformed product name {arg!r}")
