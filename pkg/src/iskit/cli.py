"""Command-line interface: ``iskit <subcommand> [flags] <file>`` (``-`` reads stdin)."""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, Sequence

import numpy as np

from . import actions, congruences as cg, constructions, docformat, representations as rp, structure as st
from .semigroup import (MAX_CARRIER, MAX_ORDER, CapExceededError, FiniteInvSemigroup,
                        NotInverseSemigroupError, verify_axioms)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class CheckFailure(Exception):
    pass


def _bool(v: Optional[bool]) -> str:
    return "n/a" if v is None else ("true" if v else "false")


def _sizes(blocks: np.ndarray) -> str:
    counts = np.bincount(blocks)
    return " ".join(str(c) for c in sorted(counts.tolist(), reverse=True))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args) -> docformat.Loaded:
    return docformat.load(_read(args.file), max_order=args.max_order, max_carrier=args.max_carrier)


# -- subcommands ------------------------------------------------------------------


def analyze_report(S: FiniteInvSemigroup, max_congruence_order: int = cg.CONGRUENCE_CAP,
                   max_carrier: int = MAX_CARRIER) -> str:
    """Deterministic ``key: value`` report; see the README for the fields."""
    green = st.green_relations(S)
    has_zero = S.zero is not None
    lines = [
        ("order", S.order),
        ("idempotents", len(S.idempotents)),
        ("zero", S.labels[S.zero] if has_zero else "none"),
        ("identity", S.labels[S.identity] if S.identity is not None else "none"),
    ]
    for name in "LRHDJ":
        blocks = getattr(green, name)
        lines.append((f"green.{name}.classes", int(blocks.max()) + 1))
        lines.append((f"green.{name}.sizes", _sizes(blocks)))
    lines += [
        ("is_group", _bool(st.is_group(S))),
        ("is_semilattice", _bool(st.is_semilattice(S))),
        ("is_clifford", _bool(st.is_clifford(S))),
        ("is_E_unitary", _bool(st.is_E_unitary(S))),
        ("is_E_star_unitary", _bool(st.is_E_star_unitary(S))),
        ("is_fundamental", _bool(cg.is_fundamental(S))),
        ("is_zero_simple", _bool(cg.is_zero_simple(S) if has_zero else None)),
        ("is_zero_disjunctive", _bool(cg.is_zero_disjunctive(S) if has_zero else None)),
        ("is_congruence_free", _bool(cg.is_congruence_free(S, cap=max_congruence_order))),
        ("is_groupoid_with_zero", _bool(st.is_groupoid_with_zero(S) if has_zero else None)),
        ("sigma.classes", cg.sigma(S).num_classes),
        ("mu.classes", cg.mu(S).num_classes),
        ("xi.classes", cg.xi(S).num_classes if has_zero else "n/a"),
        ("munn_image.order", rp.munn_image(S, cap=max_carrier)[0].order),
    ]
    return "".join(f"{k}: {v}\n" for k, v in lines)


def cmd_analyze(args) -> str:
    S = _load(args).semigroup
    return analyze_report(S, args.max_congruence_order, args.max_carrier)


def cmd_quotient(args) -> str:
    loaded = _load(args)
    S = loaded.semigroup
    if args.kind == "sigma":
        rho = cg.sigma(S)
    elif args.kind == "mu":
        rho = cg.mu(S)
    elif args.kind == "xi":
        rho = cg.xi(S)
    else:
        if not args.ideal:
            raise docformat.DocumentError("quotient rees needs --ideal")
        ideal = docformat.resolve_elements(loaded, args.ideal)
        rho = cg.rees_congruence(S, ideal)
    Q = cg.quotient(S, rho)
    return docformat.emit_cayley_table(Q, f"quotient by {args.kind}: {S.order} -> {Q.order} elements")


def cmd_embed(args) -> str:
    S = _load(args).semigroup
    if args.kind == "wagner-preston":
        theta = rp.wagner_preston(S)
        note = f"Wagner-Preston image of an order-{S.order} semigroup"
        if S.order > MAX_CARRIER:
            note += f"; re-read with --max-carrier {S.order}"
        return docformat.emit_partial_bijections(theta.target, S.labels, note)
    image, _ = rp.munn_image(S, cap=args.max_carrier)
    E = S.idempotents
    return docformat.emit_partial_bijections(image, [S.labels[e] for e in E],
                                             f"Munn image of an order-{S.order} semigroup")


def _closed_inverse_hull(S: FiniteInvSemigroup, elements) -> list[int]:
    """Least closed inverse subsemigroup containing ``elements``."""
    H = set(elements)
    while True:
        grown = set(H) | {S.inv(h) for h in H}
        grown |= {S.mul(a, b) for a in grown for b in grown}
        grown = st.upward_closure(S, grown)
        if grown == H:
            return sorted(H)
        H = grown


def cmd_cosets(args) -> str:
    loaded = _load(args)
    S = loaded.semigroup
    H = _closed_inverse_hull(S, docformat.resolve_elements(loaded, args.sub))
    if not actions.is_proper_closed_inverse_sub(S, H):
        raise docformat.DocumentError("the generated closed inverse subsemigroup contains zero")
    space = actions.coset_space(S, H)
    A = actions.coset_action(S, H, space)
    if args.emit_action:
        return docformat.emit_action(A, f"coset action, {len(space.cosets)} cosets")
    out = [f"subsemigroup: {' '.join(S.labels[h] for h in H)}", f"cosets: {len(space.cosets)}"]
    for i, (rep, c) in enumerate(zip(space.representatives, space.cosets)):
        out.append(f"coset.{i}.representative: {S.labels[rep]}")
        out.append(f"coset.{i}.elements: {' '.join(S.labels[x] for x in c)}")
    out.append(f"transitive: {_bool(actions.is_transitive(A))}")
    return "\n".join(out) + "\n"


def cmd_recognize(args) -> str:
    S = _load(args).semigroup
    out = []
    if args.kind == "semidirect":
        rep = constructions.semidirect_recognition(S)
        for k in sorted(rep.conditions):
            out.append(f"condition.{k}: {_bool(rep.conditions[k])}")
        out.append(f"agree: {_bool(rep.agree)}")
        out.append(f"recognized: {_bool(rep.recognized)}")
        if rep.isomorphism is not None:
            out.append(f"product.order: {rep.product.order}")
            for a in range(S.order):
                out.append(f"iso.{S.labels[a]}: {rep.product.labels[rep.isomorphism[a]]}")
    elif args.kind == "clifford":
        ok = st.is_clifford(S)
        if args.emit and ok:
            return docformat.emit_presheaf(constructions.presheaf_from_clifford(S), "presheaf of groups")
        out.append(f"is_clifford: {_bool(ok)}")
        if ok:
            P = constructions.presheaf_from_clifford(S)
            for e, G in enumerate(P.groups):
                out.append(f"node.{P.semilattice.labels[e]}.group_order: {len(G)}")
    else:
        if S.zero is None:
            out.append("is_groupoid_with_zero: false")
            out.append("reason: no zero")
        else:
            ok = st.is_groupoid_with_zero(S)
            nonzero = [s for s in range(S.order) if s != S.zero]
            if args.emit and ok:
                G, _ = constructions.groupoid_from_semigroup(S, nonzero)
                return docformat.emit_groupoid(G, "groupoid of nonzero elements")
            out.append(f"is_groupoid_with_zero: {_bool(ok)}")
            if ok:
                G, _ = constructions.groupoid_from_semigroup(S, nonzero)
                out.append(f"groupoid.arrows: {len(G)}")
                out.append(f"groupoid.identities: {len(G.identities)}")
    return "\n".join(out) + "\n"


def cmd_congruences(args) -> str:
    S = _load(args).semigroup
    cons = cg.enumerate_congruences(S, cap=args.max_congruence_order)
    out = [f"congruences: {len(cons)}"]
    if args.all:
        for i, c in enumerate(cons):
            flags = [f"classes={c.num_classes}",
                     f"idempotent_separating={_bool(cg.is_idempotent_separating(c))}",
                     f"idempotent_pure={_bool(cg.is_idempotent_pure(c))}",
                     f"group={_bool(cg.is_group_congruence(c))}"]
            if S.zero is not None:
                flags.append(f"zero_restricted={_bool(cg.is_zero_restricted(c))}")
            out.append(f"congruence.{i}: {' '.join(flags)}")
            blocks = " | ".join(" ".join(S.labels[x] for x in cls) for cls in c.classes())
            out.append(f"congruence.{i}.classes: {blocks}")
    return "\n".join(out) + "\n"


def cmd_check(args) -> str:
    text = _read(args.file)
    doc = docformat.parse(text)
    try:
        loaded = docformat.build(doc, max_order=args.max_order, max_carrier=args.max_carrier)
    except docformat.DocumentError as exc:
        raise CheckFailure(str(exc)) from None
    S = loaded.semigroup
    checks: list[tuple[str, Callable[[], object]]] = [
        ("axioms", lambda: verify_axioms(S)),
        ("natural_order", lambda: st.natural_order(S)),
        ("groupoid", lambda: st.groupoid_view(S)),
        ("green", lambda: st.green_relations(S)),
        ("sigma", lambda: cg.max_group_image(S)),
        ("mu", lambda: rp.munn_representation(S, cap=args.max_carrier)),
        ("wagner_preston", lambda: rp.wagner_preston(S) if S.order <= 200 else None),
    ]
    out = []
    failed = False
    for name, fn in checks:
        try:
            fn()
            out.append(f"{name}: ok")
        except (NotInverseSemigroupError, st.InconsistentTableError) as exc:
            out.append(f"{name}: FAIL {exc}")
            failed = True
    text_out = "\n".join(out) + "\n"
    if failed:
        raise CheckFailure(text_out)
    return text_out


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iskit", description="Finite inverse semigroup toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-order", type=int, default=MAX_ORDER, help="element cap for closure")
    common.add_argument("--max-congruence-order", type=int, default=cg.CONGRUENCE_CAP,
                        help="largest order for congruence enumeration")
    common.add_argument("--max-carrier", type=int, default=MAX_CARRIER,
                        help="largest carrier for closure and Munn semigroups")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="structural report")
    a.set_defaults(func=cmd_analyze)

    q = sub.add_parser("quotient", parents=[common], help="emit a quotient as a cayley_table document")
    q.add_argument("kind", choices=["sigma", "mu", "xi", "rees"])
    q.add_argument("--ideal", help="ideal elements for rees")
    q.set_defaults(func=cmd_quotient)

    e = sub.add_parser("embed", parents=[common], help="emit an embedding as partial bijections")
    e.add_argument("kind", choices=["wagner-preston", "munn"])
    e.set_defaults(func=cmd_embed)

    c = sub.add_parser("cosets", parents=[common], help="cosets of a closed inverse subsemigroup")
    c.add_argument("--sub", required=True, help="elements generating the subsemigroup")
    c.add_argument("--emit-action", action="store_true", help="emit the coset action as a document")
    c.set_defaults(func=cmd_cosets)

    r = sub.add_parser("recognize", parents=[common], help="recognise a structure")
    r.add_argument("kind", choices=["semidirect", "clifford", "groupoid-zero"])
    r.add_argument("--emit", action="store_true", help="emit the presheaf or groupoid document")
    r.set_defaults(func=cmd_recognize)

    g = sub.add_parser("congruences", parents=[common], help="enumerate congruences")
    g.add_argument("--all", action="store_true", help="list every congruence")
    g.set_defaults(func=cmd_congruences)

    k = sub.add_parser("check", parents=[common], help="validate a document; exit 1 on failure")
    k.set_defaults(func=cmd_check)

    for sp in (a, q, e, c, r, g, k):
        sp.add_argument("file", help="input document, or - for stdin")
    return p


_VALUE_FLAGS = {"--max-order", "--max-congruence-order", "--max-carrier", "--ideal"}


def _rees_positional(argv: list[str]) -> list[str]:
    """Accept ``quotient rees <ideal> <file>`` as well as ``--ideal``."""
    if argv[:2] != ["quotient", "rees"] or any(x == "--ideal" or x.startswith("--ideal=") for x in argv):
        return argv
    positional = []
    i = 2
    while i < len(argv):
        x = argv[i]
        if x in _VALUE_FLAGS:
            i += 2
            continue
        if x.startswith("-") and x != "-":
            i += 1
            continue
        positional.append(i)
        i += 1
    if len(positional) == 2:
        j = positional[0]
        return argv[:j] + ["--ideal", argv[j]] + argv[j + 1:]
    return argv


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _rees_positional(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except CheckFailure as exc:
        sys.stdout.write(str(exc) if str(exc).endswith("\n") else f"{exc}\n")
        return EXIT_CHECK
    except CapExceededError as exc:
        sys.stderr.write(f"iskit: cap {exc.cap} exceeded: {exc}\n")
        return EXIT_CAP
    except (docformat.DocumentError, NotInverseSemigroupError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"iskit: {msg}\n")
        return EXIT_INPUT
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
