"""Typed Datalog: programs, least fixed points, interpretations and union gadgets.

Rules are evaluated semi-naively, one strongly connected component of the
IDB dependency graph at a time. Equality atoms are grounded against per-type
identity relations; a variable that occurs only in ``x = x`` ranges over its
whole type.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx

from .structures import Signature, SignatureError, Structure, sorted_names

EQ = "="


class DatalogError(ValueError):
    """Ill-typed or ill-formed program."""


@dataclass(frozen=True)
class Var:
    name: Hashable
    type: Hashable

    def __repr__(self) -> str:
        return f"{self.name}:{self.type}"


@dataclass(frozen=True)
class Atom:
    pred: Hashable
    args: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def is_eq(self) -> bool:
        return self.pred == EQ

    def __repr__(self) -> str:
        if self.is_eq:
            return f"{self.args[0]!r} = {self.args[1]!r}"
        return f"{self.pred}({', '.join(map(repr, self.args))})"


def eq(x: Var, y: Var) -> Atom:
    return Atom(EQ, (x, y))


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "body", tuple(self.body))

    def variables(self) -> tuple:
        seen = {}
        for atom in (self.head,) + self.body:
            for v in atom.args:
                seen.setdefault(v, None)
        return tuple(seen)

    def __repr__(self) -> str:
        return f"{self.head!r} :- {', '.join(map(repr, self.body))}."


def _fresh(name: Hashable, taken: set) -> Hashable:
    if isinstance(name, str):
        cand = name + "'"
        while cand in taken:
            cand += "'"
        return cand
    cand = ("out", name)
    while cand in taken:
        cand = ("out", cand)
    return cand


@dataclass(frozen=True)
class DatalogProgram:
    """EDBs come from ``signature``; ``idbs`` is an ordered tuple of ``(name, arity)``."""

    signature: Signature
    idbs: tuple
    rules: tuple
    output: Hashable
    _arity: Mapping = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        idbs = tuple((name, tuple(ar)) for name, ar in self.idbs)
        rules = tuple(self.rules)
        output = self.output
        edb = set(self.signature.symbol_names)
        if self.signature.has_symbol(output):
            # echo an EDB through a fresh IDB so the output is always derived
            ar = self.signature.arity(output)
            copy = _fresh(output, edb | {n for n, _ in idbs})
            xs = tuple(Var(f"x{i}", t) for i, t in enumerate(ar))
            idbs += ((copy, ar),)
            rules += (Rule(Atom(copy, xs), (Atom(output, xs),)),)
            output = copy
        object.__setattr__(self, "idbs", idbs)
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "output", output)
        arity = dict(self.signature.symbols)
        for name, ar in idbs:
            if name in arity or name == EQ:
                raise DatalogError(f"IDB {name!r} clashes with an EDB or the equality marker")
            for t in ar:
                if t not in self.signature.types:
                    raise DatalogError(f"IDB {name!r} uses unknown type {t!r}")
            arity[name] = ar
        object.__setattr__(self, "_arity", MappingProxyType(arity))
        if output not in dict(idbs):
            raise DatalogError(f"output {output!r} is not declared")
        for rule in rules:
            self._check_rule(rule, edb)

    def _check_rule(self, rule: Rule, edb: set) -> None:
        idb = {n for n, _ in self.idbs}
        head = rule.head
        if head.is_eq or head.pred in edb or head.pred not in idb:
            raise DatalogError(f"head of {rule!r} must be an IDB")
        names = {}
        for atom in (head,) + rule.body:
            if atom.is_eq:
                if len(atom.args) != 2 or atom.args[0].type != atom.args[1].type:
                    raise DatalogError(f"equality {atom!r} must relate two variables of one type")
                if atom.args[0].type not in self.signature.types:
                    raise DatalogError(f"unknown type in {atom!r}")
            else:
                if atom.pred not in self._arity:
                    raise DatalogError(f"undeclared predicate {atom.pred!r} in {rule!r}")
                ar = self._arity[atom.pred]
                if tuple(v.type for v in atom.args) != ar:
                    raise DatalogError(f"atom {atom!r} does not match arity {ar}")
            for v in atom.args:
                if names.setdefault(v.name, v.type) != v.type:
                    raise DatalogError(f"variable {v.name!r} used with two types in {rule!r}")
        body_vars = {v for atom in rule.body for v in atom.args}
        loose = [v for v in head.args if v not in body_vars]
        if loose:
            raise DatalogError(f"rule {rule!r} is not range restricted: {loose}")

    def arity(self, pred: Hashable) -> tuple:
        return self._arity[pred]

    @property
    def output_arity(self) -> tuple:
        return self._arity[self.output]

    @property
    def idb_names(self) -> tuple:
        return tuple(n for n, _ in self.idbs)

    def width(self) -> int:
        return max((len(r.variables()) for r in self.rules), default=0)


# --------------------------------------------------------------------------
# evaluation


class _CompiledRule:
    """A join plan: body atoms ordered so that each step binds as much as possible."""

    def __init__(self, rule: Rule, delta_at: int | None):
        self.rule = rule
        self.vars = rule.variables()
        vid = {v: i for i, v in enumerate(self.vars)}
        order = self._order(rule.body, delta_at)
        bound: set = set()
        self.steps = []
        for j in order:
            atom = rule.body[j]
            ids = [vid[v] for v in atom.args]
            if atom.is_eq:
                a, b = ids
                self.steps.append(("eq", j, a, b, a in bound, b in bound, atom.args[0].type))
                bound.update(ids)
                continue
            key_pos, key_var, free, checks = [], [], [], []
            first = {}
            for pos, v in enumerate(ids):
                if v in bound:
                    key_pos.append(pos)
                    key_var.append(v)
                elif v in first:
                    checks.append((pos, first[v]))
                else:
                    first[v] = pos
                    free.append((pos, v))
            self.steps.append(("rel", j, tuple(key_pos), tuple(key_var), tuple(free), tuple(checks)))
            bound.update(ids)
        self.head = tuple(vid[v] for v in rule.head.args)

    @staticmethod
    def _order(body: tuple, delta_at: int | None) -> list:
        remaining = list(range(len(body)))
        order = []
        bound: set = set()
        if delta_at is not None:
            order.append(delta_at)
            remaining.remove(delta_at)
            bound.update(body[delta_at].args)

        def score(j):
            atom = body[j]
            args = set(atom.args)
            nb = len(args & bound)
            if atom.is_eq:
                return (0 if nb else 2, -nb)
            if not args or nb == len(args):
                return (-1, 0)
            return (1 if nb else 1.5, -nb)

        while remaining:
            j = min(remaining, key=lambda j: (score(j), j))
            order.append(j)
            remaining.remove(j)
            bound.update(body[j].args)
        return order


class _Evaluator:
    def __init__(self, program: DatalogProgram, X: Structure, cache: dict | None):
        if X.signature != program.signature:
            raise SignatureError("structure does not match the program's input signature")
        self.p = program
        self.X = X
        self.cache = cache if cache is not None else {}
        self.rels = {name: X.relations[name] for name in X.signature.symbol_names}
        self._index_cache: dict = {}

    def _index(self, rel: frozenset, positions: tuple) -> dict:
        # entries keep a reference to the relation so ids cannot be recycled
        key = (id(rel), positions)
        entry = self._index_cache.get(key)
        if entry is None or entry[0] is not rel:
            idx = defaultdict(list)
            for tup in rel:
                idx[tuple(tup[p] for p in positions)].append(tup)
            entry = (rel, idx)
            self._index_cache[key] = entry
        return entry[1]

    def _fire(self, plan: _CompiledRule, source) -> Iterable[tuple]:
        env = [None] * len(plan.vars)
        steps = plan.steps
        n = len(steps)
        domains = self.X.domains

        def go(i):
            if i == n:
                yield tuple(env[v] for v in plan.head)
                return
            step = steps[i]
            if step[0] == "eq":
                _, _, a, b, ab, bb, t = step
                if ab and bb:
                    if env[a] == env[b]:
                        yield from go(i + 1)
                elif ab or bb:
                    src, dst = (a, b) if ab else (b, a)
                    if a == b:
                        yield from go(i + 1)
                        return
                    env[dst] = env[src]
                    yield from go(i + 1)
                    env[dst] = None
                else:
                    for d in domains[t]:
                        env[a] = d
                        env[b] = d
                        yield from go(i + 1)
                    env[a] = env[b] = None
                return
            _, j, key_pos, key_var, free, checks = step
            rel = source(j)
            if key_pos:
                cands = self._index(rel, key_pos).get(tuple(env[v] for v in key_var), ())
            else:
                cands = rel
            for tup in cands:
                if checks and any(tup[p] != tup[q] for p, q in checks):
                    continue
                for pos, v in free:
                    env[v] = tup[pos]
                yield from go(i + 1)
            for _, v in free:
                env[v] = None

        return go(0)

    def run(self, targets: Iterable) -> dict:
        """Evaluate everything the ``targets`` depend on; return IDB relations."""
        p = self.p
        idb = set(p.idb_names)
        by_head = defaultdict(list)
        for rule in p.rules:
            by_head[rule.head.pred].append(rule)
        g = nx.DiGraph()
        g.add_nodes_from(idb)
        for rule in p.rules:
            for atom in rule.body:
                if atom.pred in idb:
                    g.add_edge(atom.pred, rule.head.pred)
        needed = set()
        for t in targets:
            needed |= nx.ancestors(g, t) | {t}
        sub = g.subgraph(needed)
        cond = nx.condensation(sub)
        closure_rules: dict = {}
        for c in nx.topological_sort(cond):
            members = cond.nodes[c]["members"]
            rules = [r for m in sorted_names(members) for r in by_head[m]]
            deps = set()
            for pred in members:
                for q in g.predecessors(pred):
                    if q not in members:
                        deps |= closure_rules[q]
            closure = frozenset(rules) | deps
            for pred in members:
                closure_rules[pred] = closure
            key = (frozenset(members), closure)
            hit = self.cache.get(key)
            if hit is None:
                hit = self._stratum(rules, members)
                self.cache[key] = hit
            for pred in members:
                self.rels[pred] = hit[pred]
        return {pred: self.rels[pred] for pred in needed}

    def _stratum(self, rules: list, members: set) -> dict:
        for m in members:
            self.rels[m] = frozenset()
        delta = {m: set() for m in members}
        for rule in rules:
            plan = _CompiledRule(rule, None)
            head = rule.head.pred
            for tup in self._fire(plan, lambda j, r=rule: self.rels[r.body[j].pred]):
                delta[head].add(tup)
        recursive = [(rule, j) for rule in rules for j, a in enumerate(rule.body) if a.pred in members]
        plans = {(id(rule), j): _CompiledRule(rule, j) for rule, j in recursive}
        while any(delta.values()):
            delta = {m: frozenset(v) for m, v in delta.items()}
            for m in members:
                self.rels[m] = self.rels[m] | delta[m]
            new = {m: set() for m in members}
            for rule, j in recursive:
                plan = plans[(id(rule), j)]
                head = rule.head.pred
                dj = delta[rule.body[j].pred]
                if not dj:
                    continue

                def source(i, rule=rule, j=j, dj=dj):
                    return dj if i == j else self.rels[rule.body[i].pred]

                known = self.rels[head]
                for tup in self._fire(plan, source):
                    if tup not in known:
                        new[head].add(tup)
            delta = new
        return {m: self.rels[m] for m in members}


def evaluate_all(program: DatalogProgram, X: Structure, *, cache: dict | None = None) -> dict:
    """Least fixed point of every IDB the output depends on."""
    return _Evaluator(program, X, cache).run([program.output])


def evaluate_program(program: DatalogProgram, X: Structure, *, cache: dict | None = None) -> frozenset:
    """The output relation of the least fixed point."""
    return frozenset(evaluate_all(program, X, cache=cache)[program.output])


def naive_fixpoint(program: DatalogProgram, X: Structure) -> dict:
    """Reference evaluation: fire every rule on everything until nothing changes."""
    ev = _Evaluator(program, X, None)
    for name in program.idb_names:
        ev.rels[name] = frozenset()
    plans = [_CompiledRule(r, None) for r in program.rules]
    changed = True
    while changed:
        snapshot = dict(ev.rels)
        derived = defaultdict(set)
        for plan in plans:
            rule = plan.rule
            derived[rule.head.pred].update(ev._fire(plan, lambda j, r=rule: snapshot[r.body[j].pred]))
        changed = False
        for name, tups in derived.items():
            if not tups <= ev.rels[name]:
                ev.rels[name] = ev.rels[name] | tups
                changed = True
    return {name: ev.rels[name] for name in program.idb_names}


# --------------------------------------------------------------------------
# interpretations and union gadgets


def _chunks(flat: tuple, sizes: Sequence[int]) -> tuple:
    out, i = [], 0
    for s in sizes:
        out.append(tuple(flat[i:i + s]))
        i += s
    return tuple(out)


@dataclass(frozen=True)
class DatalogInterpretation:
    source: Signature
    target: Signature
    domain_programs: Mapping
    relation_programs: Mapping

    def __post_init__(self) -> None:
        dp = MappingProxyType(dict(self.domain_programs))
        rp = MappingProxyType(dict(self.relation_programs))
        object.__setattr__(self, "domain_programs", dp)
        object.__setattr__(self, "relation_programs", rp)
        if set(dp) != set(self.target.types):
            raise DatalogError("need exactly one domain program per output type")
        if set(rp) != set(self.target.symbol_names):
            raise DatalogError("need exactly one relation program per output symbol")
        for prog in list(dp.values()) + list(rp.values()):
            if prog.signature != self.source:
                raise DatalogError("component program has the wrong input signature")
        for name, ar in self.target.symbols:
            want = tuple(t for s in ar for t in dp[s].output_arity)
            if rp[name].output_arity != want:
                raise DatalogError(f"program for {name!r} has arity {rp[name].output_arity}, want {want}")

    def components(self) -> list:
        return ([("type", t, self.domain_programs[t]) for t in self.target.types]
                + [("rel", r, self.relation_programs[r]) for r in self.target.symbol_names])

    def width(self) -> int:
        return max((p.width() for _, _, p in self.components()), default=0)


def width(phi) -> int:
    """Largest number of variables in a rule of any component program."""
    if isinstance(phi, DDatalogReduction):
        phi = phi.interpretation
    return phi.width()


def apply_interpretation(phi: DatalogInterpretation, X: Structure, *, cache: dict | None = None) -> Structure:
    if X.signature != phi.source:
        raise SignatureError("structure does not match the interpretation's input signature")
    cache = {} if cache is None else cache
    domains = {}
    for t in phi.target.types:
        domains[t] = sorted_names(evaluate_program(phi.domain_programs[t], X, cache=cache))
    members = {t: set(d) for t, d in domains.items()}
    relations = {}
    for name, ar in phi.target.symbols:
        sizes = [len(phi.domain_programs[s].output_arity) for s in ar]
        rel = set()
        for flat in evaluate_program(phi.relation_programs[name], X, cache=cache):
            groups = _chunks(flat, sizes)
            if all(g in members[s] for g, s in zip(groups, ar)):
                rel.add(groups)
        relations[name] = rel
    return Structure(phi.target, domains, relations, check=False)


@dataclass(frozen=True)
class UnionGadget:
    """Type map ``d`` and symbol map ``r`` with ``ar_{r(R)} = d ∘ ar_R``."""

    source: Signature
    target: Signature
    d: Mapping
    r: Mapping

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", MappingProxyType(dict(self.d)))
        object.__setattr__(self, "r", MappingProxyType(dict(self.r)))
        if set(self.d) != set(self.source.types):
            raise DatalogError("d must be defined on every input type")
        if set(self.r) != set(self.source.symbol_names):
            raise DatalogError("r must be defined on every input symbol")
        for t, u in self.d.items():
            if u not in self.target.types:
                raise DatalogError(f"d maps {t!r} to unknown type {u!r}")
        for name, ar in self.source.symbols:
            out = self.r[name]
            if not self.target.has_symbol(out):
                raise DatalogError(f"r maps {name!r} to unknown symbol {out!r}")
            if self.target.arity(out) != tuple(self.d[t] for t in ar):
                raise DatalogError(f"arity of {out!r} is not d applied to the arity of {name!r}")


def identity_union(sig: Signature) -> UnionGadget:
    return UnionGadget(sig, sig, {t: t for t in sig.types}, {s: s for s in sig.symbol_names})


def apply_union_gadget(u: UnionGadget, A: Structure) -> Structure:
    """Element ``a`` of input type ``i`` becomes ``(i, a)`` in type ``d(i)``."""
    if A.signature != u.source:
        raise SignatureError("structure does not match the union gadget's input signature")
    domains = {t: [] for t in u.target.types}
    for i in u.source.types:
        domains[u.d[i]].extend((i, a) for a in A.domains[i])
    relations = {s: set() for s in u.target.symbol_names}
    for name, ar in u.source.symbols:
        relations[u.r[name]].update(tuple((t, a) for t, a in zip(ar, tup)) for tup in A.relations[name])
    return Structure(u.target, domains, relations, check=False)


def compose_union_gadgets(u1: UnionGadget, u2: UnionGadget) -> UnionGadget:
    """Apply ``u1`` then ``u2``."""
    if u1.target != u2.source:
        raise SignatureError("union gadgets are not composable")
    return UnionGadget(u1.source, u2.target, {t: u2.d[u1.d[t]] for t in u1.source.types},
                       {s: u2.r[u1.r[s]] for s in u1.source.symbol_names})


@dataclass(frozen=True)
class DDatalogReduction:
    interpretation: DatalogInterpretation
    union: UnionGadget

    def __post_init__(self) -> None:
        if self.interpretation.target != self.union.source:
            raise DatalogError("interpretation output must be the union gadget's input")

    @property
    def source(self) -> Signature:
        return self.interpretation.source

    @property
    def target(self) -> Signature:
        return self.union.target

    def apply(self, X: Structure) -> Structure:
        return apply_union_gadget(self.union, apply_interpretation(self.interpretation, X))


# --------------------------------------------------------------------------
# standard interpretations


def domain_program(sig: Signature, t: Hashable, name: Hashable = "D") -> DatalogProgram:
    """``D(x) ← x = x``."""
    x = Var("x", t)
    return DatalogProgram(sig, ((name, (t,)),), (Rule(Atom(name, (x,)), (eq(x, x),)),), name)


def identity_interpretation(sig: Signature) -> DatalogInterpretation:
    dom = {t: domain_program(sig, t) for t in sig.types}
    rel = {}
    for name, ar in sig.symbols:
        xs = tuple(Var(f"x{i}", t) for i, t in enumerate(ar))
        out = _fresh(name, set(sig.symbol_names))
        rel[name] = DatalogProgram(sig, ((out, ar),), (Rule(Atom(out, xs), (Atom(name, xs),)),), out)
    return DatalogInterpretation(sig, sig, dom, rel)


def identity_reduction(sig: Signature) -> DDatalogReduction:
    return DDatalogReduction(identity_interpretation(sig), identity_union(sig))


# --------------------------------------------------------------------------
# composition of interpretations


def _rename_program_rules(prog: DatalogProgram, rename) -> tuple:
    def atom(a):
        return a if a.is_eq or prog.signature.has_symbol(a.pred) else Atom(rename(a.pred), a.args)

    return tuple(Rule(atom(r.head), tuple(atom(b) for b in r.body)) for r in prog.rules)


def compose_interpretations(phi: DatalogInterpretation, chi: DatalogInterpretation) -> DatalogInterpretation:
    """An interpretation ψ with ψ(A) ≅ χ(φ(A)).

    Every χ-variable of intermediate type ``i`` becomes a tuple of fresh
    variables shaped like φ_i's output, guarded by φ_i's output atom; every
    intermediate symbol becomes φ's output predicate for it.
    """
    if phi.target != chi.source:
        raise SignatureError("interpretations are not composable")
    mid = phi.target
    comp_tag = {}
    renamed = {}
    for kind, key, prog in phi.components():
        tag = ("dom", key) if kind == "type" else ("rel", key)
        comp_tag[(kind, key)] = tag
        renamed[(kind, key)] = (
            tuple(((tag, n), ar) for n, ar in prog.idbs),
            _rename_program_rules(prog, lambda n, tag=tag: (tag, n)),
            (tag, prog.output),
        )
    shape = {t: phi.domain_programs[t].output_arity for t in mid.types}

    def translate(prog: DatalogProgram) -> DatalogProgram:
        used_types, used_syms = set(), set()
        for rule in prog.rules:
            for a in (rule.head,) + rule.body:
                used_types.update(v.type for v in a.args)
                if not a.is_eq and mid.has_symbol(a.pred):
                    used_syms.add(a.pred)
        idbs, rules = [], []
        for kind, keys in (("type", mid.types), ("rel", mid.symbol_names)):
            for key in keys:
                if key in (used_types if kind == "type" else used_syms):
                    ids, rs, _ = renamed[(kind, key)]
                    idbs.extend(ids)
                    rules.extend(rs)
        chi_name = {n: ("chi", n) for n in prog.idb_names}
        for n, ar in prog.idbs:
            idbs.append((chi_name[n], tuple(t for s in ar for t in shape[s])))

        def flat(v: Var) -> tuple:
            return tuple(Var((v.name, j), t) for j, t in enumerate(shape[v.type]))

        for rule in prog.rules:
            body = []
            for a in rule.body:
                if a.is_eq:
                    x, y = a.args
                    body.extend(eq(p, q) for p, q in zip(flat(x), flat(y)))
                elif mid.has_symbol(a.pred):
                    body.append(Atom(renamed[("rel", a.pred)][2], sum((flat(v) for v in a.args), ())))
                else:
                    body.append(Atom(chi_name[a.pred], sum((flat(v) for v in a.args), ())))
            for v in rule.variables():
                body.append(Atom(renamed[("type", v.type)][2], flat(v)))
            head = Atom(chi_name[rule.head.pred], sum((flat(v) for v in rule.head.args), ()))
            rules.append(Rule(head, tuple(body)))
        return DatalogProgram(phi.source, tuple(idbs), tuple(rules), chi_name[prog.output])

    return DatalogInterpretation(
        phi.source, chi.target,
        {t: translate(p) for t, p in chi.domain_programs.items()},
        {r: translate(p) for r, p in chi.relation_programs.items()})


def swap_union_interpretation(u: UnionGadget, phi: DatalogInterpretation):
    """Return ``(φ', υ')`` with υ'(φ'(A)) ≅ φ(υ(A)).

    A Δ-predicate P of arity p gets a copy tagged with q for every tuple q of
    input types with d∘q = p; each rule is copied once per typing of its
    variables, and the copy of r(R) at ar_R is loaded from R.
    """
    if u.target != phi.source:
        raise SignatureError("union gadget output must be the interpretation's input")
    pi, delta = u.source, u.target
    pre = {p: [t for t in pi.types if u.d[t] == p] for p in delta.types}

    def typings(ar: tuple):
        return itertools.product(*(pre[p] for p in ar))

    # copies are named (mark, P, types), with a mark no input symbol starts with
    mark = "copy"
    while any(isinstance(s, tuple) and s[:1] == (mark,) for s in pi.symbol_names):
        mark += "'"

    def tag(pred, types: tuple) -> tuple:
        return (mark, pred, tuple(types))

    def copy_program(prog: DatalogProgram, q: tuple) -> DatalogProgram:
        idbs = []
        for n, ar in prog.idbs:
            idbs.extend((tag(n, tq), tq) for tq in typings(ar))
        for name, ar in delta.symbols:
            idbs.extend((tag(name, tq), tq) for tq in typings(ar))
        rules = []
        for name, ar in pi.symbols:
            xs = tuple(Var(f"x{i}", t) for i, t in enumerate(ar))
            rules.append(Rule(Atom(tag(u.r[name], ar), xs), (Atom(name, xs),)))
        for rule in prog.rules:
            vs = rule.variables()
            for choice in typings(tuple(v.type for v in vs)):
                ren = {v: Var(v.name, t) for v, t in zip(vs, choice)}

                def atom(a):
                    args = tuple(ren[v] for v in a.args)
                    if a.is_eq:
                        return Atom(EQ, args)
                    return Atom(tag(a.pred, tuple(v.type for v in args)), args)

                rules.append(Rule(atom(rule.head), tuple(atom(b) for b in rule.body)))
        return DatalogProgram(pi, tuple(idbs), tuple(rules), tag(prog.output, q))

    types, dprogs, dmap, qs = [], {}, {}, {}
    for s in phi.target.types:
        prog = phi.domain_programs[s]
        qs[s] = list(typings(prog.output_arity))
        for q in qs[s]:
            types.append((s, q))
            dprogs[(s, q)] = copy_program(prog, q)
            dmap[(s, q)] = s
    symbols, rprogs, rmap = [], {}, {}
    for name, ar in phi.target.symbols:
        prog = phi.relation_programs[name]
        sizes = [len(phi.domain_programs[s].output_arity) for s in ar]
        for q in typings(prog.output_arity):
            parts = _chunks(q, sizes)
            sym = (name, q)
            symbols.append((sym, tuple((s, part) for s, part in zip(ar, parts))))
            rprogs[sym] = copy_program(prog, q)
            rmap[sym] = name
    mid = Signature(tuple(types), tuple(symbols))
    phi2 = DatalogInterpretation(pi, mid, dprogs, rprogs)
    u2 = UnionGadget(mid, phi.target, dmap, rmap)
    return phi2, u2


def compose_ddatalog(r1: DDatalogReduction, r2: DDatalogReduction) -> DDatalogReduction:
    """A reduction equivalent to applying ``r1`` and then ``r2``."""
    if r1.target != r2.source:
        raise SignatureError("reductions are not composable")
    phi2, u2 = swap_union_interpretation(r1.union, r2.interpretation)
    psi = compose_interpretations(r1.interpretation, phi2)
    return DDatalogReduction(psi, compose_union_gadgets(u2, r2.union))
