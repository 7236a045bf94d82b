"""Text and JSON formats for signatures, structures, programs, interpretations,
union gadgets, gadgets, projective gadgets and label cover instances.

Names (of types, symbols, elements, predicates) are identifiers, integers,
double-quoted strings, or bracketed lists ``[a, 1, "x y"]`` standing for
tuples, so every name produced by the library prints and parses back.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Hashable

from .datalog import EQ, Atom, DatalogInterpretation, DatalogProgram, Rule, UnionGadget, Var
from .gadgets import Gadget, ProjectiveGadget
from .labelcover.instance import Constraint, LabelCoverInstance
from .structures import Homomorphism, Signature, Structure, sorted_names


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line, self.col = line, col


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<int>-?[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>:=|:-|->|::|[{}()\[\];:,.=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    value: Any
    line: int
    col: int


def tokenize(text: str) -> list:
    out, pos, line, lstart = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        s = m.group()
        col = pos - lstart + 1
        if kind == "string":
            out.append(Token("name", json.loads(s), line, col))
        elif kind == "int":
            out.append(Token("name", int(s), line, col))
        elif kind == "ident":
            out.append(Token("ident", s, line, col))
        elif kind == "punct":
            out.append(Token("p", s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            lstart = pos + s.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", None, line, pos - lstart + 1))
    return out


# --------------------------------------------------------------------------
# documents


@dataclass
class Document:
    """Named declarations in file order."""

    signatures: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    programs: dict = field(default_factory=dict)
    interpretations: dict = field(default_factory=dict)
    unions: dict = field(default_factory=dict)
    gadgets: dict = field(default_factory=dict)
    projectives: dict = field(default_factory=dict)
    labelcovers: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    KINDS = ("signatures", "structures", "programs", "interpretations", "unions", "gadgets",
             "projectives", "labelcovers")

    def add(self, kind: str, name: str, obj) -> None:
        table = getattr(self, kind)
        if name in table:
            if table[name] == obj:
                return  # the same declaration read from a shared file
            raise ParseError(f"{kind[:-1]} {name!r} declared twice")
        table[name] = obj
        self.order.append((kind, name))

    def get(self, name: str, *kinds: str):
        for k in kinds or self.KINDS:
            if name in getattr(self, k):
                return getattr(self, k)[name]
        raise KeyError(name)

    def first(self, kind: str):
        table = getattr(self, kind)
        return next(iter(table.values())) if table else None

    def structurally_equal(self, other: "Document") -> bool:
        return all(getattr(self, k) == getattr(other, k) for k in self.KINDS)


class _Parser:
    def __init__(self, text: str, doc: Document | None = None):
        self.toks = tokenize(text)
        self.i = 0
        self.doc = doc if doc is not None else Document()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def at(self, value: str) -> bool:
        t = self.tok
        return (t.kind == "p" or t.kind == "ident") and t.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        if not self.at(value):
            shown = self.tok.value if self.tok.kind != "eof" else "end of input"
            self.error(f"expected {value!r}, found {shown!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> Hashable:
        t = self.tok
        if t.kind in ("ident", "name"):
            self.i += 1
            return t.value
        if t.kind == "p" and t.value == "[":
            self.i += 1
            items = []
            if not self.accept("]"):
                items.append(self.name())
                while self.accept(","):
                    items.append(self.name())
                self.expect("]")
            return tuple(items)
        self.error(f"expected a name, found {t.value!r}")

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.error(f"expected an identifier, found {t.value!r}")
        self.i += 1
        return t.value

    def lookup(self, kind: str, name: str, tok: Token):
        table = getattr(self.doc, kind)
        if name not in table:
            self.error(f"unresolved {kind[:-1]} {name!r}", tok)
        return table[name]

    # document
    def document(self) -> Document:
        while self.tok.kind != "eof":
            t = self.tok
            kw = self.ident()
            handler = {
                "signature": self.signature, "structure": self.structure, "program": self.program_decl,
                "interpretation": self.interpretation, "union": self.union, "gadget": self.gadget,
                "projective": self.projective, "labelcover": self.labelcover,
            }.get(kw)
            if handler is None:
                self.error(f"unknown declaration {kw!r}", t)
            handler(t)
        return self.doc

    def declare(self, kind: str, name: str, obj, tok: Token) -> None:
        try:
            self.doc.add(kind, name, obj)
        except ParseError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def signature(self, start: Token) -> None:
        name = self.ident()
        self.expect("{")
        types, symbols = [], []
        while not self.accept("}"):
            t = self.tok
            kw = self.ident()
            if kw == "type":
                types.append(self.name())
            elif kw == "rel":
                sym = self.name()
                self.expect(":")
                ar = []
                while not self.at(";"):
                    tt = self.tok
                    ty = self.name()
                    if ty not in types:
                        self.error(f"undeclared type {ty!r}", tt)
                    ar.append(ty)
                symbols.append((sym, tuple(ar)))
            else:
                self.error("expected 'type' or 'rel'", t)
            self.expect(";")
        try:
            sig = Signature(tuple(types), tuple(symbols))
        except ValueError as exc:
            self.error(str(exc), start)
        self.declare("signatures", name, sig, start)

    def sig_ref(self) -> Signature:
        t = self.tok
        return self.lookup("signatures", self.ident(), t)

    def set_of(self, item):
        self.expect("{")
        out = []
        if not self.accept("}"):
            out.append(item())
            while self.accept(","):
                out.append(item())
            self.expect("}")
        return out

    def tuple_(self) -> tuple:
        self.expect("(")
        items = []
        if not self.accept(")"):
            items.append(self.name())
            while self.accept(","):
                items.append(self.name())
            self.expect(")")
        return tuple(items)

    def structure_body(self, sig: Signature, start: Token) -> Structure:
        domains, relations = {}, {}
        self.expect("{")
        while not self.accept("}"):
            t = self.tok
            key = self.name()
            self.expect("=")
            is_type = key in sig.types
            is_sym = sig.has_symbol(key)
            if not (is_type or is_sym):
                self.error(f"{key!r} is neither a type nor a symbol of the signature", t)
            save = self.i
            self.expect("{")
            tuples = self.at("(")
            self.i = save
            if is_sym and (tuples or not is_type):
                relations[key] = set(self.set_of(self.tuple_))
            else:
                domains[key] = self.set_of(self.name)
            self.expect(";")
        try:
            return Structure(sig, domains, relations)
        except ValueError as exc:
            self.error(str(exc), start)

    def structure(self, start: Token) -> None:
        name = self.ident()
        self.expect(":")
        sig = self.sig_ref()
        self.declare("structures", name, self.structure_body(sig, start), start)

    # programs
    def atom(self, types: dict) -> Atom:
        t = self.tok
        first = self.name()
        if self.at(":") or self.at("="):
            self.annotate(first, types, t)
            self.expect("=")
            return Atom(EQ, (first, self.var_ref(types)))
        args = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.var_ref(types))
                while self.accept(","):
                    args.append(self.var_ref(types))
                self.expect(")")
        return Atom(first, tuple(args))

    def var_ref(self, types: dict):
        t = self.tok
        v = self.name()
        self.annotate(v, types, t)
        return v

    def annotate(self, v, types: dict, tok: Token) -> None:
        if self.accept(":"):
            ty = self.name()
            if types.setdefault(v, ty) != ty:
                self.error(f"variable {v!r} annotated with two types", tok)

    def rule(self, sig: Signature, idbs: dict) -> Rule:
        start = self.tok
        types: dict = {}
        head = self.atom(types)
        if head.pred == EQ:
            self.error("an equality cannot be the head of a rule", start)
        body = []
        if self.accept(":-"):
            body.append(self.atom(types))
            while self.accept(","):
                body.append(self.atom(types))
        self.expect(".")
        arity = dict(sig.symbols)
        arity.update(idbs)
        # infer variable types from atom positions, then from equalities
        for atom in [head] + body:
            if atom.pred == EQ:
                continue
            if atom.pred not in arity:
                self.error(f"undeclared predicate {atom.pred!r}", start)
            ar = arity[atom.pred]
            if len(ar) != len(atom.args):
                self.error(f"{atom.pred!r} expects {len(ar)} arguments, got {len(atom.args)}", start)
            for v, ty in zip(atom.args, ar):
                if types.setdefault(v, ty) != ty:
                    self.error(f"variable {v!r} used at types {types[v]!r} and {ty!r}", start)
        changed = True
        while changed:
            changed = False
            for atom in body:
                if atom.pred == EQ:
                    a, b = atom.args
                    if a in types and b in types and types[a] != types[b]:
                        self.error(f"equality between variables of types {types[a]!r} and {types[b]!r}", start)
                    for x, y in ((a, b), (b, a)):
                        if x in types and y not in types:
                            types[y] = types[x]
                            changed = True
        for atom in [head] + body:
            for v in atom.args:
                if v not in types:
                    self.error(f"cannot infer the type of variable {v!r}; annotate it as {v}:type", start)

        def conv(atom):
            return Atom(atom.pred, tuple(Var(v, types[v]) for v in atom.args))

        return Rule(conv(head), tuple(conv(a) for a in body))

    def declaration_follows(self) -> bool:
        """After ``idb``/``output``: a name starts a declaration, punctuation a rule using that predicate."""
        nxt = self.toks[self.i + 1]
        return nxt.kind in ("ident", "name") or (nxt.kind == "p" and nxt.value == "[")

    def program_body(self, sig: Signature, start: Token) -> DatalogProgram:
        self.expect("{")
        idbs: dict = {}
        output = None
        rules = []
        while not self.accept("}"):
            if self.at("idb") and self.declaration_follows():
                self.i += 1
                pred = self.name()
                self.expect(":")
                ar = []
                while not self.at(";"):
                    ar.append(self.name())
                self.expect(";")
                idbs[pred] = tuple(ar)
            elif self.at("output") and self.declaration_follows():
                self.i += 1
                output = self.name()
                self.expect(";")
            else:
                rules.append(self.rule(sig, idbs))
        if output is None:
            self.error("program has no 'output' declaration", start)
        try:
            return DatalogProgram(sig, tuple(idbs.items()), tuple(rules), output)
        except ValueError as exc:
            self.error(str(exc), start)

    def program_decl(self, start: Token) -> None:
        name = self.ident()
        self.expect(":")
        sig = self.sig_ref()
        self.declare("programs", name, self.program_body(sig, start), start)

    def arrow_sigs(self) -> tuple:
        self.expect(":")
        a = self.sig_ref()
        self.expect("->")
        return a, self.sig_ref()

    def interpretation(self, start: Token) -> None:
        name = self.ident()
        src, tgt = self.arrow_sigs()
        dom, rel = {}, {}
        self.expect("{")
        while not self.accept("}"):
            t = self.tok
            kw = self.ident()
            key = self.name()
            self.expect(":=")
            self.expect("program")
            prog = self.program_body(src, t)
            self.expect(";")
            if kw == "type":
                dom[key] = prog
            elif kw == "rel":
                rel[key] = prog
            else:
                self.error("expected 'type' or 'rel'", t)
        try:
            phi = DatalogInterpretation(src, tgt, dom, rel)
        except ValueError as exc:
            self.error(str(exc), start)
        self.declare("interpretations", name, phi, start)

    def union(self, start: Token) -> None:
        name = self.ident()
        src, tgt = self.arrow_sigs()
        d, r = {}, {}
        self.expect("{")
        while not self.accept("}"):
            t = self.tok
            kw = self.ident()
            a = self.name()
            self.expect("->")
            b = self.name()
            self.expect(";")
            if kw == "type":
                d[a] = b
            elif kw == "rel":
                r[a] = b
            else:
                self.error("expected 'type' or 'rel'", t)
        try:
            u = UnionGadget(src, tgt, d, r)
        except ValueError as exc:
            self.error(str(exc), start)
        self.declare("unions", name, u, start)

    def mapping(self, dom: Structure, tok: Token) -> Homomorphism:
        """``{ d -> e, t :: d -> e }``: untyped entries must name an element of exactly one type."""
        maps = {t: {} for t in dom.signature.types}

        def entry():
            t = self.tok
            a = self.name()
            ty = None
            if self.accept("::"):
                ty, a = a, self.name()
            self.expect("->")
            b = self.name()
            if ty is None:
                owners = [s for s in dom.signature.types if dom.contains(s, a)]
                if len(owners) != 1:
                    self.error(f"element {a!r} is ambiguous or unknown; write type :: element", t)
                ty = owners[0]
            maps.setdefault(ty, {})[a] = b
        self.set_of(entry)
        return Homomorphism(maps)

    def struct_ref(self) -> Structure:
        t = self.tok
        return self.lookup("structures", self.ident(), t)

    def gadget(self, start: Token) -> None:
        name = self.ident()
        src, tgt = self.arrow_sigs()
        nodes, edges, glue = {}, {}, {}
        self.expect("{")
        while not self.accept("}"):
            t = self.tok
            kw = self.ident()
            key = self.name()
            if kw == "glue":
                self.expect("[")
                idx = self.tok
                i = self.name()
                if not isinstance(i, int):
                    self.error("glue index must be an integer", idx)
                self.expect("]")
                self.expect(":=")
                if key not in dict(src.symbols):
                    self.error(f"unknown symbol {key!r}", t)
                ar = src.arity(key)
                if not 1 <= i <= len(ar):
                    self.error(f"glue index {i} out of range for {key!r}", idx)
                if ar[i - 1] not in nodes:
                    self.error(f"declare node {ar[i - 1]!r} before gluing into it", t)
                glue[(key, i)] = self.mapping(nodes[ar[i - 1]], t)
            else:
                self.expect(":=")
                S = self.struct_ref()
                if kw == "node":
                    nodes[key] = S
                elif kw == "edge":
                    edges[key] = S
                else:
                    self.error("expected 'node', 'edge' or 'glue'", t)
            self.expect(";")
        try:
            g = Gadget(src, tgt, nodes, edges, glue)
        except ValueError as exc:
            self.error(str(exc), start)
        self.declare("gadgets", name, g, start)

    def projective(self, start: Token) -> None:
        name = self.ident()
        src, tgt = self.arrow_sigs()
        nodes, glue = {}, {}
        self.expect("{")
        while not self.accept("}"):
            t = self.tok
            kw = self.ident()
            key = self.name()
            self.expect(":=")
            if kw == "node":
                nodes[key] = self.struct_ref()
            elif kw == "glue":
                if key not in dict(src.symbols) or len(src.arity(key)) != 2:
                    self.error(f"unknown or non-binary symbol {key!r}", t)
                s = src.arity(key)[1]
                if s not in nodes:
                    self.error(f"declare node {s!r} before gluing from it", t)
                glue[key] = self.mapping(nodes[s], t)
            else:
                self.error("expected 'node' or 'glue'", t)
            self.expect(";")
        try:
            g = ProjectiveGadget(src, tgt, nodes, glue)
        except ValueError as exc:
            self.error(str(exc), start)
        self.declare("projectives", name, g, start)

    def labelcover(self, start: Token) -> None:
        name = self.ident()
        variables, cons = [], []
        self.expect("{")
        while not self.accept("}"):
            t = self.tok
            kw = self.ident()
            if kw == "var":
                v = self.name()
                self.expect(":")
                variables.append((v, self.set_of(self.name)))
            elif kw == "constraint":
                u = self.name()
                self.expect("->")
                v = self.name()
                self.expect(":")
                self.expect("pi")
                self.expect("=")

                def pair():
                    a = self.name()
                    self.expect("->")
                    return a, self.name()
                pairs = self.set_of(pair)
                if len(dict(pairs)) != len(pairs):
                    self.error("map assigns a label twice", t)
                cons.append(Constraint(u, v, tuple(pairs)))
            else:
                self.error("expected 'var' or 'constraint'", t)
            self.expect(";")
        try:
            S = LabelCoverInstance(variables, cons)
        except ValueError as exc:
            self.error(str(exc), start)
        self.declare("labelcovers", name, S, start)


def parse(text: str, into: Document | None = None) -> Document:
    """Parse declarations; with ``into``, add them to an existing document (identical redeclarations are allowed)."""
    return _Parser(text, into).document()


# --------------------------------------------------------------------------
# printing


def render(x: Hashable) -> str:
    if isinstance(x, bool):
        return json.dumps(str(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x if _IDENT.match(x) else json.dumps(x)
    if isinstance(x, tuple):
        return "[" + ", ".join(render(y) for y in x) + "]"
    return json.dumps(str(x))


class _Printer:
    def __init__(self, doc: Document):
        self.doc = doc
        self.lines: list = []
        self.sig_names: dict = {}
        self.struct_names: dict = {}
        self.emitted: set = set()

    def sig_name(self, sig: Signature) -> str:
        for n, s in self.doc.signatures.items():
            if s == sig:
                if ("signatures", n) not in self.emitted:
                    self.emit_signature(n, s)
                return n
        n = f"S{len(self.doc.signatures)}"
        while n in self.doc.signatures:
            n += "_"
        self.doc.signatures[n] = sig
        self.emit_signature(n, sig)
        return n

    def struct_name(self, A: Structure, hint: str) -> str:
        for n, s in self.doc.structures.items():
            if s is A or s == A:
                if ("structures", n) not in self.emitted:
                    self.emit_structure(n, s)
                return n
        n = hint
        while n in self.doc.structures:
            n += "_"
        self.doc.structures[n] = A
        self.emit_structure(n, A)
        return n

    def emit_signature(self, name: str, sig: Signature) -> None:
        self.emitted.add(("signatures", name))
        body = [f"type {render(t)};" for t in sig.types]
        body += [f"rel {render(s)} :{''.join(' ' + render(t) for t in ar)};" for s, ar in sig.symbols]
        self.lines.append(f"signature {name} {{ {' '.join(body)} }}")

    def emit_structure(self, name: str, A: Structure) -> None:
        sig = self.sig_name(A.signature)
        self.emitted.add(("structures", name))
        parts = []
        for t in A.signature.types:
            parts.append(f"  {render(t)} = {{ {', '.join(render(a) for a in A.domains[t])} }};")
        for s, _ in A.signature.symbols:
            tups = sorted_names(A.relations[s])
            body = ", ".join("(" + ", ".join(render(a) for a in tup) + ")" for tup in tups)
            parts.append(f"  {render(s)} = {{ {body} }};")
        self.lines.append(f"structure {name} : {sig} {{\n" + "\n".join(parts) + "\n}")

    @staticmethod
    def rule_text(rule: Rule) -> str:
        names = {}
        plain = all(isinstance(v.name, str) and _IDENT.match(v.name) for v in rule.variables())
        for i, v in enumerate(rule.variables()):
            names[v] = v.name if plain else f"v{i}"
        seen: set = set()

        def var(v: Var) -> str:
            if v in seen:
                return render(names[v])
            seen.add(v)
            return f"{render(names[v])}:{render(v.type)}"

        def atom(a: Atom) -> str:
            if a.is_eq:
                return f"{var(a.args[0])} = {var(a.args[1])}"
            return f"{render(a.pred)}({', '.join(var(v) for v in a.args)})"

        head = atom(rule.head)
        if not rule.body:
            return head + "."
        return f"{head} :- {', '.join(atom(a) for a in rule.body)}."

    def program_text(self, p: DatalogProgram, indent: str) -> str:
        lines = [f"{indent}idb {render(n)} :{''.join(' ' + render(t) for t in ar)};" for n, ar in p.idbs]
        lines.append(f"{indent}output {render(p.output)};")
        lines += [indent + self.rule_text(r) for r in p.rules]
        return "\n".join(lines)

    def emit_program(self, name: str, p: DatalogProgram) -> None:
        sig = self.sig_name(p.signature)
        self.lines.append(f"program {name} : {sig} {{\n{self.program_text(p, '  ')}\n}}")

    def emit_interpretation(self, name: str, phi: DatalogInterpretation) -> None:
        a, b = self.sig_name(phi.source), self.sig_name(phi.target)
        parts = []
        for kind, key, p in phi.components():
            word = "type" if kind == "type" else "rel"
            parts.append(f"  {word} {render(key)} := program {{\n{self.program_text(p, '    ')}\n  }};")
        self.lines.append(f"interpretation {name} : {a} -> {b} {{\n" + "\n".join(parts) + "\n}")

    def emit_union(self, name: str, u: UnionGadget) -> None:
        a, b = self.sig_name(u.source), self.sig_name(u.target)
        parts = [f"  type {render(t)} -> {render(u.d[t])};" for t in u.source.types]
        parts += [f"  rel {render(s)} -> {render(u.r[s])};" for s in u.source.symbol_names]
        self.lines.append(f"union {name} : {a} -> {b} {{\n" + "\n".join(parts) + "\n}")

    @staticmethod
    def mapping_text(h: Homomorphism, dom: Structure) -> str:
        entries = []
        for t in dom.signature.types:
            for a in dom.domains[t]:
                owners = [s for s in dom.signature.types if dom.contains(s, a)]
                prefix = "" if len(owners) == 1 else f"{render(t)} :: "
                entries.append(f"{prefix}{render(a)} -> {render(h(t, a))}")
        return "{ " + ", ".join(entries) + " }"

    def emit_gadget(self, name: str, g: Gadget) -> None:
        a, b = self.sig_name(g.source), self.sig_name(g.target)
        parts = []
        for t in g.source.types:
            parts.append(f"  node {render(t)} := {self.struct_name(g.nodes[t], f'{name}_node_{len(parts)}')};")
        for s in g.source.symbol_names:
            parts.append(f"  edge {render(s)} := {self.struct_name(g.edges[s], f'{name}_edge_{len(parts)}')};")
        for s, ar in g.source.symbols:
            for i, t in enumerate(ar, 1):
                parts.append(f"  glue {render(s)}[{i}] := {self.mapping_text(g.glue[(s, i)], g.nodes[t])};")
        self.lines.append(f"gadget {name} : {a} -> {b} {{\n" + "\n".join(parts) + "\n}")

    def emit_projective(self, name: str, g: ProjectiveGadget) -> None:
        a, b = self.sig_name(g.source), self.sig_name(g.target)
        parts = []
        for t in g.source.types:
            parts.append(f"  node {render(t)} := {self.struct_name(g.nodes[t], f'{name}_node_{len(parts)}')};")
        for s, (t, u) in g.source.symbols:
            parts.append(f"  glue {render(s)} := {self.mapping_text(g.glue[s], g.nodes[u])};")
        self.lines.append(f"projective {name} : {a} -> {b} {{\n" + "\n".join(parts) + "\n}")

    def emit_labelcover(self, name: str, S: LabelCoverInstance) -> None:
        parts = [f"  var {render(v)} : {{ {', '.join(render(x) for x in ls)} }};" for v, ls in S.variables]
        for c in S.constraints:
            pi = ", ".join(f"{render(a)} -> {render(b)}" for a, b in c.pairs)
            parts.append(f"  constraint {render(c.source)} -> {render(c.target)} : pi = {{ {pi} }};")
        self.lines.append(f"labelcover {name} {{\n" + "\n".join(parts) + "\n}")

    def run(self) -> str:
        emit = {
            "signatures": self.emit_signature, "structures": self.emit_structure, "programs": self.emit_program,
            "interpretations": self.emit_interpretation, "unions": self.emit_union, "gadgets": self.emit_gadget,
            "projectives": self.emit_projective, "labelcovers": self.emit_labelcover,
        }
        for kind, name in list(self.doc.order):
            if (kind, name) in self.emitted:
                continue
            self.emitted.add((kind, name))
            emit[kind](name, getattr(self.doc, kind)[name])
        return "\n\n".join(self.lines) + "\n"


def print_document(doc: Document) -> str:
    copy = Document(**{k: dict(getattr(doc, k)) for k in Document.KINDS}, order=list(doc.order))
    return _Printer(copy).run()


def document_of(**named) -> Document:
    """A document holding the given objects, kinds inferred from their classes."""
    doc = Document()
    for name, obj in named.items():
        doc.add(_kind_of(obj), name, obj)
    return doc


def _kind_of(obj) -> str:
    for cls, kind in ((Signature, "signatures"), (Structure, "structures"), (DatalogProgram, "programs"),
                      (DatalogInterpretation, "interpretations"), (UnionGadget, "unions"), (Gadget, "gadgets"),
                      (ProjectiveGadget, "projectives"), (LabelCoverInstance, "labelcovers")):
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, name: str = "X") -> str:
    return print_document(document_of(**{name: obj}))


# --------------------------------------------------------------------------
# JSON


def encode_name(x):
    if isinstance(x, tuple):
        return [encode_name(y) for y in x]
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return x
    return str(x)


def decode_name(x):
    if isinstance(x, list):
        return tuple(decode_name(y) for y in x)
    return x


def signature_to_json(sig: Signature) -> dict:
    return {"types": [encode_name(t) for t in sig.types],
            "symbols": [[encode_name(s), [encode_name(t) for t in ar]] for s, ar in sig.symbols]}


def signature_from_json(d: dict) -> Signature:
    return Signature(tuple(decode_name(t) for t in d["types"]),
                     tuple((decode_name(s), tuple(decode_name(t) for t in ar)) for s, ar in d["symbols"]))


def structure_to_json(A: Structure) -> dict:
    return {"signature": signature_to_json(A.signature),
            "domains": [[encode_name(t), [encode_name(a) for a in A.domains[t]]] for t in A.signature.types],
            "relations": [[encode_name(s), [encode_name(tup) for tup in sorted_names(A.relations[s])]]
                          for s in A.signature.symbol_names]}


def structure_from_json(d: dict) -> Structure:
    sig = signature_from_json(d["signature"])
    return Structure(sig, {decode_name(t): [decode_name(a) for a in xs] for t, xs in d["domains"]},
                     {decode_name(s): {decode_name(tup) for tup in ts} for s, ts in d["relations"]})


def labelcover_to_json(S: LabelCoverInstance) -> dict:
    return {"variables": [[encode_name(v), [encode_name(x) for x in ls]] for v, ls in S.variables],
            "constraints": [[encode_name(c.source), encode_name(c.target), [[encode_name(a), encode_name(b)] for a, b in c.pairs]]
                            for c in S.constraints]}


def labelcover_from_json(d: dict) -> LabelCoverInstance:
    return LabelCoverInstance([(decode_name(v), [decode_name(x) for x in ls]) for v, ls in d["variables"]],
                              [Constraint(decode_name(u), decode_name(v), tuple((decode_name(a), decode_name(b)) for a, b in ps))
                               for u, v, ps in d["constraints"]])


def to_json(obj) -> dict:
    if isinstance(obj, Structure):
        return {"type": "structure", **structure_to_json(obj)}
    if isinstance(obj, LabelCoverInstance):
        return {"type": "labelcover", **labelcover_to_json(obj)}
    if isinstance(obj, Signature):
        return {"type": "signature", **signature_to_json(obj)}
    # everything else travels as its text form
    return {"type": "text", "text": dumps(obj)}


def from_json(d: dict):
    kind = d.get("type")
    if kind == "structure":
        return structure_from_json(d)
    if kind == "labelcover":
        return labelcover_from_json(d)
    if kind == "signature":
        return signature_from_json(d)
    if kind == "text":
        doc = parse(d["text"])
        kind_, name = doc.order[-1]
        return getattr(doc, kind_)[name]
    raise ValueError(f"unknown JSON object type {kind!r}")


def envelope(kind: str, payload, seed: int | None) -> str:
    return json.dumps({"kind": kind, "payload": payload, "meta": {"seed": seed}}, indent=2)
