"""Command-line interface.

Exit status: 0 accept / feasible / found, 1 reject / infeasible / none,
2 usage or input error. Files are in the declaration format of
``cspforge.textfmt``; a file argument ``path:Name`` selects one declaration,
otherwise the last declaration of the expected kind in that file is used.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness, textfmt
from .datalog import (DDatalogReduction, UnionGadget, apply_interpretation, apply_union_gadget, compose_ddatalog,
                      evaluate_program, identity_interpretation, identity_union)
from .gadgets import (Gadget, apply_gadget, apply_projective_gadget, apply_universal_gadget, compile_gadget, reify,
                      reify_to_label_cover)
from .labelcover import (arc_consistency_reduce, enforce_arc_consistency, has_falsity_symbol, k_consistency_reduce,
                         k_consistency_test, sigma_k)
from .minions import (Minion, MinionError, adjunction_sides, find_minion_homomorphism, omega, polymorphism_minion,
                      projections_minion)
from .relax import (affine_system, export_group_system, export_linear_system, lambda_conv, lp_feasible,
                    parse_group_system, parse_linear_system, sherali_adams_system, solve_group_system,
                    tensor_power, tensor_test)
from .structures import Homomorphism, find_homomorphism, find_isomorphism, is_hom_equivalent, sorted_names

ACCEPT, REJECT, USAGE = 0, 1, 2


class InputError(Exception):
    pass


# --------------------------------------------------------------------------
# loading


class Loader:
    """One shared document for all files of a command, so files may share a signature declaration."""

    def __init__(self, libs=()):
        self.doc = textfmt.Document()
        self.added: dict = {}
        for path in libs:
            self.file(path)

    def file(self, path: str) -> list:
        if path not in self.added:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read {path}: {exc.strerror}") from None
            before = len(self.doc.order)
            try:
                textfmt.parse(text, into=self.doc)
            except textfmt.ParseError as exc:
                raise InputError(f"{path}:{exc}") from None
            self.added[path] = self.doc.order[before:]
        return self.added[path]

    def get(self, ref: str, *kinds: str):
        path, name = ref, None
        if not os.path.exists(ref) and ":" in ref:
            path, name = ref.rsplit(":", 1)
        entries = self.file(path)
        if name is not None:
            for kind in kinds:
                if name in getattr(self.doc, kind):
                    return getattr(self.doc, kind)[name]
            raise InputError(f"{path}: no {' or '.join(k[:-1] for k in kinds)} named {name!r}")
        for kind, n in reversed(entries):
            if kind in kinds:
                return getattr(self.doc, kind)[n]
        raise InputError(f"{path}: no {' or '.join(k[:-1] for k in kinds)} declared")


def _need(args, flag: str):
    value = getattr(args, flag.replace("-", "_"))
    if value is None:
        raise InputError(f"--{flag} is required for {args.command}")
    return value


def _structure(args, loader: Loader, flag: str):
    return loader.get(_need(args, flag), "structures")


def _labelcover(args, loader: Loader):
    return loader.get(_need(args, "instance"), "labelcovers")


def _reduction(loader: Loader, ref: str) -> DDatalogReduction:
    """``file[:phi]``, ``file:phi+union`` or a union alone (``file:union``)."""
    if ref.count("+") == 1 and ":" in ref:
        path, names = ref.rsplit(":", 1)
        a, b = names.split("+")
        phi = loader.get(f"{path}:{a}", "interpretations")
        return DDatalogReduction(phi, loader.get(f"{path}:{b}", "unions"))
    obj = loader.get(ref, "interpretations", "unions")
    if isinstance(obj, UnionGadget):
        return DDatalogReduction(identity_interpretation(obj.source), obj)
    return DDatalogReduction(obj, identity_union(obj.target))


def _minion_arg(desc: str, loader: Loader, max_arity: int) -> Minion:
    """``P`` (projections), ``pol:A[,B]`` with structure files, or ``omega:<minion>``."""
    if desc.startswith("omega:"):
        return omega(_minion_arg(desc[6:], loader, max_arity))
    if desc in ("P", "projections"):
        return projections_minion(max_arity)
    if desc.startswith("pol:"):
        parts = desc[4:].split(",")
        A = loader.get(parts[0], "structures")
        B = loader.get(parts[1], "structures") if len(parts) > 1 else A
        return polymorphism_minion(A, B, max_arity)
    raise InputError(f"unknown minion {desc!r}; use P, pol:FILE[,FILE] or omega:MINION")


# --------------------------------------------------------------------------
# output


class Output:
    def __init__(self, args):
        self.args = args
        self.text: list = []
        self.payload: dict = {}

    def add(self, key: str, text: str, payload=None) -> None:
        self.text.append(text.rstrip("\n"))
        self.payload[key] = text if payload is None else payload

    def obj(self, key: str, obj, name: str | None = None) -> None:
        self.add(key, textfmt.dumps(obj, name or key), textfmt.to_json(obj))

    def flush(self) -> None:
        if self.args.format == "json":
            body = textfmt.envelope(self.args.command, self.payload, self.args.seed) + "\n"
        else:
            body = "\n".join(t for t in self.text if t) + "\n"
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)


def _hom_payload(h: Homomorphism | None):
    if h is None:
        return None
    return [[textfmt.encode_name(t), [[textfmt.encode_name(a), textfmt.encode_name(b)] for a, b in m.items()]] for t, m in h.maps.items()]


def _hom_text(h: Homomorphism) -> str:
    return "\n".join(f"{textfmt.render(t)} :: {textfmt.render(a)} -> {textfmt.render(b)}"
                     for t, m in h.maps.items() for a, b in m.items())


def _verdict(out: Output, ok: bool, yes: str, no: str) -> int:
    out.add("verdict", yes if ok else no, ok)
    return ACCEPT if ok else REJECT


# --------------------------------------------------------------------------
# commands


def cmd_hom(args, L, out):
    X, A = _structure(args, L, "instance"), _structure(args, L, "template")
    h = find_homomorphism(X, A)
    if h is not None:
        out.add("homomorphism", _hom_text(h), _hom_payload(h))
    return _verdict(out, h is not None, "homomorphism found", "no homomorphism")


def cmd_iso(args, L, out):
    X, A = _structure(args, L, "instance"), _structure(args, L, "template")
    h = find_isomorphism(X, A)
    if h is not None:
        out.add("isomorphism", _hom_text(h), _hom_payload(h))
    return _verdict(out, h is not None, "isomorphic", "not isomorphic")


def cmd_homeq(args, L, out):
    ok = is_hom_equivalent(_structure(args, L, "instance"), _structure(args, L, "template"))
    return _verdict(out, ok, "homomorphically equivalent", "not homomorphically equivalent")


def cmd_eval(args, L, out):
    P = L.get(args.file, "programs")
    X = _structure(args, L, "instance")
    facts = evaluate_program(P, X)
    lines = [f"{textfmt.render(P.output)}({', '.join(textfmt.render(a) for a in tup)})"
             for tup in sorted_names(facts)]
    out.add("facts", "\n".join(lines), [textfmt.encode_name(t) for t in sorted_names(facts)])
    return _verdict(out, bool(facts), f"{len(facts)} facts derived", "nothing derived")


def cmd_interp(args, L, out):
    phi = L.get(args.file, "interpretations")
    out.obj("output", apply_interpretation(phi, _structure(args, L, "instance")), "output")
    return ACCEPT


def cmd_union(args, L, out):
    u = L.get(args.file, "unions")
    out.obj("output", apply_union_gadget(u, _structure(args, L, "instance")), "output")
    return ACCEPT


def cmd_compose(args, L, out):
    r1, r2 = _reduction(L, args.first), _reduction(L, args.second)
    r = compose_ddatalog(r1, r2)
    doc = textfmt.document_of(composed=r.interpretation, composed_union=r.union)
    out.add("reduction", textfmt.print_document(doc))
    if args.instance:
        out.obj("output", r.apply(_structure(args, L, "instance")), "output")
    return ACCEPT


def cmd_gadget(args, L, out):
    g = L.get(args.file, "gadgets", "projectives")
    X = _structure(args, L, "instance")
    Y = apply_gadget(g, X) if isinstance(g, Gadget) else apply_projective_gadget(g, X)
    out.obj("output", Y, "output")
    return ACCEPT


def cmd_reify(args, L, out):
    X = _structure(args, L, "instance")
    if args.template:
        out.obj("labelcover", reify_to_label_cover(_structure(args, L, "template"), X), "reified")
    else:
        out.obj("output", reify(X), "reified")
    return ACCEPT


def cmd_compile_gadget(args, L, out):
    g = L.get(args.file, "gadgets", "projectives")
    r = compile_gadget(g)
    out.add("reduction", textfmt.print_document(textfmt.document_of(compiled=r.interpretation,
                                                                     compiled_union=r.union)))
    if args.instance:
        out.obj("output", r.apply(_structure(args, L, "instance")), "output")
    return ACCEPT


def cmd_universal(args, L, out):
    out.obj("output", apply_universal_gadget(_structure(args, L, "template"), _labelcover(args, L)), "output")
    return ACCEPT


def cmd_sigma_k(args, L, out):
    S = sigma_k(_structure(args, L, "template"), _structure(args, L, "instance"), args.k)
    out.obj("labelcover", S, "sigma")
    return ACCEPT


def cmd_ac_enforce(args, L, out):
    S = enforce_arc_consistency(_labelcover(args, L))
    out.obj("labelcover", S, "arc_consistent")
    empty = S.empty_types()
    return _verdict(out, not empty, "no label set emptied", f"{len(empty)} label sets emptied")


def cmd_kcons_test(args, L, out):
    ok = k_consistency_test(_structure(args, L, "template"), args.k, _structure(args, L, "instance"))
    return _verdict(out, ok, f"{args.k}-consistency accepts", f"{args.k}-consistency rejects")


def _falsity_warning(B) -> None:
    if not has_falsity_symbol(B):
        print("warning: the output template has no false nullary symbol, so an emptied label set "
              "leaves no trace in the output", file=sys.stderr)


def cmd_kcons_reduce(args, L, out):
    A = _structure(args, L, "template")
    B = L.get(args.into, "structures") if args.into else A
    _falsity_warning(B)
    out.obj("output", k_consistency_reduce(A, B, args.k, _structure(args, L, "instance")), "output")
    return ACCEPT


def cmd_ac_reduce(args, L, out):
    A = _structure(args, L, "template")
    B = L.get(args.into, "structures") if args.into else A
    _falsity_warning(B)
    out.obj("output", arc_consistency_reduce(A, B, _structure(args, L, "instance")), "output")
    return ACCEPT


def cmd_sa(args, L, out):
    LS = sherali_adams_system(_structure(args, L, "template"), args.k, _structure(args, L, "instance"))
    out.add("system", export_linear_system(LS))
    return ACCEPT


def cmd_lambda_conv(args, L, out):
    out.add("system", export_linear_system(lambda_conv(_labelcover(args, L))))
    return ACCEPT


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_lp_check(args, L, out):
    LS = parse_linear_system(_read(args.file))
    res = lp_feasible(LS)
    if res:
        names = {v: textfmt.render(v) if not isinstance(v, str) else v for v in LS.variables}
        out.add("witness", "\n".join(f"{names[v]} = {x}" for v, x in res.witness.items()),
                {names[v]: str(x) for v, x in res.witness.items()})
    return _verdict(out, bool(res), "feasible", "infeasible")


def _modulus(args):
    m = args.modulus
    if m is None:
        raise InputError(f"--modulus is required for {args.command}")
    if m == "Z":
        return None
    try:
        n = int(m)
    except ValueError:
        raise InputError(f"--modulus must be a positive integer or Z, got {m!r}") from None
    if n < 1:
        raise InputError("--modulus must be positive")
    return n


def cmd_affine(args, L, out):
    G = affine_system(_structure(args, L, "template"), args.k, _structure(args, L, "instance"), _modulus(args))
    out.add("system", export_group_system(G))
    return ACCEPT


def cmd_zsolve(args, L, out):
    S = parse_group_system(_read(args.file))
    if args.modulus is not None:
        S = type(S)(_modulus(args), list(S.variables), [(dict(r), b) for r, b in S.rows])
    x = solve_group_system(S)
    if x is not None:
        out.add("solution", "\n".join(f"{v} = {c}" for v, c in x.items()), {str(v): c for v, c in x.items()})
    return _verdict(out, x is not None, "solvable", "no solution")


def _sizes(M: Minion) -> str:
    return ", ".join(f"arity {n}: {M.size(n)}" for n in range(1, M.max_arity + 1))


def cmd_pol(args, L, out):
    A = _structure(args, L, "template")
    B = L.get(args.into, "structures") if args.into else A
    try:
        M = polymorphism_minion(A, B, args.max_arity)
    except MinionError as exc:
        out.add("result", f"{exc} (within truncation {args.max_arity})", None)
        return REJECT
    out.add("sizes", f"polymorphisms up to arity {args.max_arity}: {_sizes(M)}",
            {str(n): M.size(n) for n in range(1, M.max_arity + 1)})
    if args.list:
        out.add("elements", "\n".join(f"{n}: {M.render[f]}" for n, fs in M.elements.items() for f in fs))
    return ACCEPT


def cmd_omega(args, L, out):
    M = _minion_arg(args.minion, L, args.max_arity)
    W = omega(M)
    out.add("sizes", f"omega up to arity {args.max_arity}: {_sizes(W)}",
            {str(n): W.size(n) for n in range(1, W.max_arity + 1)})
    return ACCEPT


def cmd_minion_hom(args, L, out):
    M = _minion_arg(args.source, L, args.max_arity)
    N = _minion_arg(args.target, L, args.max_arity)
    f = find_minion_homomorphism(M, N)
    trunc = f"at truncation {args.max_arity}"
    if f is not None:
        out.add("mapping", "\n".join(f"{M.render[a]} -> {N.render[b]}" for a, b in f.mapping.items()),
                {M.render[a]: N.render[b] for a, b in f.mapping.items()})
    return _verdict(out, f is not None, f"minion homomorphism found {trunc}",
                    f"no minion homomorphism {trunc}")


def cmd_adjunction_check(args, L, out):
    X = _labelcover(args, L)
    M = _minion_arg(args.minion, L, args.max_arity)
    left, right = adjunction_sides(X, M)
    out.add("sides", f"arc-consistent instance -> M: {left}\ninstance -> omega(M): {right}",
            {"left": left, "right": right})
    return _verdict(out, left == right, "sides agree", "sides disagree")


def cmd_tensor(args, L, out):
    A, X = _structure(args, L, "template"), _structure(args, L, "instance")
    if args.show:
        out.obj("power", tensor_power(X, args.k), "power")
    desc = args.minion or f"pol:{args.template}"
    M = _minion_arg(desc, L, args.max_arity)
    ok = tensor_test(A, M, args.k, X)
    return _verdict(out, ok, "tensor test accepts", "tensor test rejects")


def cmd_verify(args, L, out):
    if args.suite not in harness.SUITES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(harness.SUITES)}")
    report = harness.verify(args.suite, args.seed, cases=args.cases, only=args.case)
    out.add("report", report.text(verbose=args.verbose), report.to_dict())
    return ACCEPT if report.passed else REJECT


# --------------------------------------------------------------------------
# argument parsing


def _default_seed() -> int:
    env = os.environ.get("CSPFORGE_SEED")
    try:
        return int(env) if env else 0
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--template", metavar="FILE", help="template structure (FILE or FILE:Name)")
    common.add_argument("--instance", metavar="FILE", help="instance structure or label cover (FILE or FILE:Name)")
    common.add_argument("-k", type=int, default=2, help="consistency level (default 2)")
    common.add_argument("--modulus", metavar="n|Z", help="group for affine systems")
    common.add_argument("--max-arity", type=int, default=3, help="minion truncation (default 3)")
    common.add_argument("--seed", type=int, default=_default_seed(), help="seed (default $CSPFORGE_SEED or 0)")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--lib", metavar="FILE", action="append", default=[],
                        help="extra declaration file, e.g. shared signatures (repeatable)")

    parser = argparse.ArgumentParser(prog="cspforge", description="Reductions, consistency and relaxations "
                                     "for finite-template constraint satisfaction.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_, *positional):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        for arg, h in positional:
            p.add_argument(arg, help=h)
        p.set_defaults(handler=fn)
        return p

    add("hom", cmd_hom, "search for a homomorphism instance -> template")
    add("iso", cmd_iso, "search for an isomorphism instance -> template")
    add("homeq", cmd_homeq, "decide homomorphic equivalence of instance and template")
    add("eval", cmd_eval, "evaluate a Datalog program on the instance", ("file", "program FILE[:Name]"))
    add("interp", cmd_interp, "apply a Datalog interpretation", ("file", "interpretation FILE[:Name]"))
    add("union", cmd_union, "apply a union gadget", ("file", "union FILE[:Name]"))
    add("compose", cmd_compose, "compose two reductions; apply the result when --instance is given",
        ("first", "FILE[:interp[+union]]"), ("second", "FILE[:interp[+union]]"))
    add("gadget", cmd_gadget, "apply a (projective) gadget", ("file", "gadget FILE[:Name]"))
    add("reify", cmd_reify, "reify the instance; with --template, the label cover rho^A(X)")
    add("compile-gadget", cmd_compile_gadget, "compile a gadget to a Datalog reduction",
        ("file", "gadget FILE[:Name]"))
    add("universal", cmd_universal, "apply the universal gadget of the template to a label cover instance")
    add("sigma-k", cmd_sigma_k, "the label cover of partial homomorphisms on at most k elements")
    add("ac-enforce", cmd_ac_enforce, "arc consistency on a label cover instance")
    add("kcons-test", cmd_kcons_test, "the k-consistency test")
    for name, fn in (("kcons-reduce", cmd_kcons_reduce), ("ac-reduce", cmd_ac_reduce)):
        p = add(name, fn, f"the {'k' if name[0] == 'k' else 'arc'}-consistency reduction into --into "
                "(default: the template)")
        p.add_argument("--into", metavar="FILE", help="output template B")
    add("sa", cmd_sa, "export the level-k Sherali-Adams system")
    add("lambda-conv", cmd_lambda_conv, "export the convex relaxation of a label cover instance")
    add("lp-check", cmd_lp_check, "decide feasibility of an exported linear system", ("file", "system FILE"))
    add("affine", cmd_affine, "export the level-k affine system over --modulus")
    add("zsolve", cmd_zsolve, "solve an exported group system", ("file", "system FILE"))
    p = add("pol", cmd_pol, "polymorphism minion of the template (into --into), truncated at --max-arity")
    p.add_argument("--into", metavar="FILE", help="second structure B of Pol(A, B)")
    p.add_argument("--list", action="store_true", help="list every element")
    add("omega", cmd_omega, "sizes of omega of a minion", ("minion", "P, pol:FILE[,FILE] or omega:MINION"))
    add("minion-hom", cmd_minion_hom, "search for a minion homomorphism at the truncation",
        ("source", "minion: P, pol:FILE[,FILE] or omega:MINION"), ("target", "minion: P, pol:FILE[,FILE] or omega:MINION"))
    add("adjunction-check", cmd_adjunction_check, "compare both sides of the arc-consistency adjunction",
        ("minion", "minion: P, pol:FILE[,FILE] or omega:MINION"))
    p = add("tensor", cmd_tensor, "the level-k tensor test (minion defaults to Pol of the template)")
    p.add_argument("--minion", help="minion: P, pol:FILE[,FILE] or omega:MINION")
    p.add_argument("--show", action="store_true", help="also print the tensor power of the instance")
    p = add("verify", cmd_verify, "run a property suite", ("suite", "one of: " + ", ".join(harness.SUITES)))
    p.add_argument("--case", type=int, help="run a single case")
    p.add_argument("--cases", type=int, help="number of cases (default per suite)")
    p.add_argument("--verbose", action="store_true", help="list passing cases too")
    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args)
    try:
        loader = Loader(args.lib)
        status = args.handler(args, loader, out)
    except (InputError, MinionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    out.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
