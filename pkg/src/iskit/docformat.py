"""Line-oriented text documents describing inverse semigroups.

Every document starts with ``kind: <kind>``.  ``#`` starts a comment and blank
lines are ignored.  See the README for the grammar of each kind.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .actions import Action
from .constructions import (FiniteGroupoid, GroupoidAxiomError, PresheafAxiomError, PresheafOfGroups,
                            SemilatticeGroupAction, ActionAxiomError, adjoin_zero,
                            clifford_from_presheaf, semidirect_product)
from .morphisms import generating_set
from .partial_maps import PartialBijection
from .semigroup import (MAX_CARRIER, MAX_ORDER, FiniteInvSemigroup, NotInverseSemigroupError,
                        close_generators, from_cayley_table)
from .semilattice import SemilatticePoset

KINDS = ("partial_bijections", "cayley_table", "presheaf", "semidirect", "groupoid", "action")
_NAME = re.compile(r"^[^\s#:/{}]+$")


class DocumentError(ValueError):
    """Malformed document; ``line`` is 1-based, or 0 when not tied to a line."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class InputDocument:
    kind: str
    body: dict
    lines: dict = field(default_factory=dict)  # body key -> line number


@dataclass
class Loaded:
    semigroup: FiniteInvSemigroup
    document: InputDocument
    points: Optional[list[str]] = None
    action: Optional[Action] = None


# -- parsing ----------------------------------------------------------------------


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _names(value: str, no: int, what: str) -> list[str]:
    names = value.split()
    if not names:
        raise DocumentError(f"empty {what} list", no)
    for n in names:
        if not _NAME.match(n):
            raise DocumentError(f"bad name {n!r} in {what}", no)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DocumentError(f"duplicate name {dup!r} in {what}", no)
    return names


def _arrows(value: str, no: int) -> list[tuple[str, str]]:
    """``p->q p2->q2 ...``"""
    out = []
    for tok in value.split():
        if tok.count("->") != 1:
            raise DocumentError(f"expected p->q, got {tok!r}", no)
        p, q = tok.split("->")
        if not p or not q:
            raise DocumentError(f"expected p->q, got {tok!r}", no)
        out.append((p, q))
    return out


def _table_rows(rows: list[tuple[int, str]], names: list[str], what: str) -> np.ndarray:
    idx = {n: i for i, n in enumerate(names)}
    k = len(names)
    if len(rows) != k:
        line = rows[-1][0] if rows else 0
        raise DocumentError(f"{what} needs {k} rows, got {len(rows)}", line)
    out = np.empty((k, k), dtype=np.int64)
    for i, (no, row) in enumerate(rows):
        toks = row.split()
        if len(toks) != k:
            raise DocumentError(f"{what} row has {len(toks)} entries, expected {k}", no)
        for j, t in enumerate(toks):
            if t not in idx:
                raise DocumentError(f"unknown element {t!r}", no)
            out[i, j] = idx[t]
    return out


def _split_key(line: str, no: int) -> tuple[str, str, str]:
    """``word [args]: value`` -> ``(word, args, value)``; plain rows give ``("", "", line)``."""
    m = re.match(r"^([A-Za-z_]+)((?:\s+[^\s:]+)*)\s*:\s*(.*)$", line)
    if m:
        return m.group(1), m.group(2).strip(), m.group(3).strip()
    return "", "", line


def parse(text: str) -> InputDocument:
    """Parse and schema-check a document (semantic checks happen in :func:`build`)."""
    lines = _lines(text)
    if not lines:
        raise DocumentError("empty document")
    no, first = lines[0]
    key, _, value = _split_key(first, no)
    if key != "kind":
        raise DocumentError("document must start with 'kind:'", no)
    if value not in KINDS:
        raise DocumentError(f"unknown kind {value!r}", no)
    parser = {
        "partial_bijections": _parse_partial_bijections,
        "cayley_table": _parse_cayley,
        "presheaf": _parse_presheaf,
        "semidirect": _parse_semidirect,
        "groupoid": _parse_groupoid,
        "action": _parse_action,
    }[value]
    doc = InputDocument(value, {})
    parser(lines[1:], doc)
    return doc


def _once(doc: InputDocument, key: str, val, no: int) -> None:
    if key in doc.body:
        raise DocumentError(f"duplicate '{key}:' line", no)
    doc.body[key] = val
    doc.lines[key] = no


def _require(doc: InputDocument, *keys: str) -> None:
    for k in keys:
        if k not in doc.body:
            raise DocumentError(f"missing '{k}:' line")


def _parse_partial_bijections(lines, doc: InputDocument) -> None:
    gens: list[tuple[str, list[tuple[str, str]], int]] = []
    for no, line in lines:
        key, args, value = _split_key(line, no)
        if key == "points" and not args:
            _once(doc, "points", _names(value, no, "points"), no)
        elif key == "gen":
            if not _NAME.match(args or ""):
                raise DocumentError("generator needs a name: 'gen <name>: p->q ...'", no)
            if "points" not in doc.body:
                raise DocumentError("'points:' must come before generators", no)
            if any(g[0] == args for g in gens):
                raise DocumentError(f"duplicate generator {args!r}", no)
            gens.append((args, _arrows(value, no), no))
        else:
            raise DocumentError(f"unexpected line {line!r}", no)
    _require(doc, "points")
    if not gens:
        raise DocumentError("no generators given")
    idx = {p: i for i, p in enumerate(doc.body["points"])}
    n = len(idx)
    built = []
    for name, pairs, no in gens:
        for p, q in pairs:
            for x in (p, q):
                if x not in idx:
                    raise DocumentError(f"unknown point {x!r}", no)
        srcs = [p for p, _ in pairs]
        tgts = [q for _, q in pairs]
        if len(set(srcs)) != len(srcs):
            raise DocumentError(f"generator {name!r} is not a function", no)
        if len(set(tgts)) != len(tgts):
            raise DocumentError(f"generator {name!r} is not injective", no)
        built.append((name, PartialBijection.from_pairs(n, [(idx[p], idx[q]) for p, q in pairs])))
    doc.body["gens"] = built


def _parse_cayley_section(lines, doc: InputDocument, extra=None) -> list:
    """Handles ``elements:``, ``table:`` rows and ``inverse:``; returns unconsumed lines."""
    rest = []
    i = 0
    while i < len(lines):
        no, line = lines[i]
        key, args, value = _split_key(line, no)
        if key == "elements" and not args:
            _once(doc, "elements", _names(value, no, "elements"), no)
        elif key == "table" and not args:
            if "elements" not in doc.body:
                raise DocumentError("'elements:' must come before 'table:'", no)
            if value:
                raise DocumentError("table rows go on the following lines", no)
            k = len(doc.body["elements"])
            rows = lines[i + 1:i + 1 + k]
            for rno, r in rows:
                if _split_key(r, rno)[0]:
                    raise DocumentError(f"table needs {k} rows", rno)
            _once(doc, "table", _table_rows(rows, doc.body["elements"], "table"), no)
            i += k
        elif key == "inverse" and not args:
            if "elements" not in doc.body:
                raise DocumentError("'elements:' must come before 'inverse:'", no)
            idx = {n: j for j, n in enumerate(doc.body["elements"])}
            toks = value.split()
            if len(toks) != len(idx) or any(t not in idx for t in toks):
                raise DocumentError("inverse must list one known element per element", no)
            _once(doc, "inverse", [idx[t] for t in toks], no)
        else:
            rest.append((no, line))
        i += 1
    _require(doc, "elements", "table")
    return rest


def _parse_cayley(lines, doc: InputDocument) -> None:
    rest = _parse_cayley_section(lines, doc)
    if rest:
        raise DocumentError(f"unexpected line {rest[0][1]!r}", rest[0][0])


def _parse_semilattice(lines, doc: InputDocument) -> list:
    rest = []
    pairs = []
    for no, line in lines:
        key, args, value = _split_key(line, no)
        if key == "semilattice" and not args:
            _once(doc, "semilattice", _names(value, no, "semilattice"), no)
        elif line.split()[0] == "leq" and not key:
            toks = line.split()
            if len(toks) != 3:
                raise DocumentError("expected 'leq <lower> <upper>'", no)
            pairs.append((toks[1], toks[2], no))
        else:
            rest.append((no, line))
    _require(doc, "semilattice")
    idx = {n: i for i, n in enumerate(doc.body["semilattice"])}
    resolved = []
    for a, b, no in pairs:
        if a not in idx or b not in idx:
            raise DocumentError(f"unknown semilattice point in 'leq {a} {b}'", no)
        resolved.append((idx[a], idx[b]))
    try:
        doc.body["poset"] = SemilatticePoset.from_order(len(idx), resolved, labels=doc.body["semilattice"])
    except ValueError as exc:
        raise DocumentError(str(exc), doc.lines["semilattice"]) from None
    return rest


def _group_rows(value: str, no: int) -> tuple[list[str], np.ndarray]:
    rows = [r.strip() for r in value.split("/")]
    if not rows or not rows[0]:
        raise DocumentError("group needs at least one row", no)
    names = _names(rows[0], no, "group")
    return names, _table_rows([(no, r) for r in rows], names, "group")


def _parse_presheaf(lines, doc: InputDocument) -> None:
    rest = _parse_semilattice(lines, doc)
    Y = doc.body["poset"]
    idx = {n: i for i, n in enumerate(Y.labels)}
    groups: dict[int, tuple[list[str], np.ndarray]] = {}
    maps: dict = {}
    for no, line in rest:
        key, args, value = _split_key(line, no)
        if key == "node":
            if args not in idx:
                raise DocumentError(f"unknown node {args!r}", no)
            if not value.startswith("group"):
                raise DocumentError("expected 'node <e>: group <rows>'", no)
            if idx[args] in groups:
                raise DocumentError(f"duplicate node {args!r}", no)
            groups[idx[args]] = _group_rows(value[len("group"):], no)
        elif key == "map":
            parts = args.split()
            if len(parts) != 2 or any(p not in idx for p in parts):
                raise DocumentError("expected 'map <e> <f>: x->y ...'", no)
            e, f = idx[parts[0]], idx[parts[1]]
            if e not in groups or f not in groups:
                raise DocumentError("map given before its nodes", no)
            src, dst = groups[e][0], groups[f][0]
            img = [-1] * len(src)
            for x, y in _arrows(value, no):
                if x not in src or y not in dst:
                    raise DocumentError(f"unknown group element in {x}->{y}", no)
                img[src.index(x)] = dst.index(y)
            if -1 in img:
                raise DocumentError("map must send every element somewhere", no)
            maps[(e, f)] = img
        else:
            raise DocumentError(f"unexpected line {line!r}", no)
    missing = [Y.labels[e] for e in range(len(Y)) if e not in groups]
    if missing:
        raise DocumentError(f"no group for node {missing[0]!r}")
    doc.body["groups"] = [groups[e] for e in range(len(Y))]
    doc.body["maps"] = maps


def _parse_semidirect(lines, doc: InputDocument) -> None:
    rest = _parse_semilattice(lines, doc)
    Y = doc.body["poset"]
    idx = {n: i for i, n in enumerate(Y.labels)}
    acts = {}
    for no, line in rest:
        key, args, value = _split_key(line, no)
        if key == "group" and not args:
            _once(doc, "group", _group_rows(value, no), no)
        elif key == "act":
            if "group" not in doc.body:
                raise DocumentError("'group:' must come before 'act' lines", no)
            gnames = doc.body["group"][0]
            if args not in gnames:
                raise DocumentError(f"unknown group element {args!r}", no)
            perm = list(range(len(Y)))
            for a, b in _arrows(value, no):
                if a not in idx or b not in idx:
                    raise DocumentError(f"unknown semilattice point in {a}->{b}", no)
                perm[idx[a]] = idx[b]
            acts[gnames.index(args)] = perm
        else:
            raise DocumentError(f"unexpected line {line!r}", no)
    _require(doc, "group")
    n = len(doc.body["group"][0])
    doc.body["act"] = [acts.get(g, list(range(len(Y)))) for g in range(n)]


def _parse_groupoid(lines, doc: InputDocument) -> None:
    arrows: list[tuple[str, str, str]] = []
    compose = {}
    for no, line in lines:
        key, args, value = _split_key(line, no)
        if key == "identities" and not args:
            _once(doc, "identities", _names(value, no, "identities"), no)
        elif key == "arrow":
            if "identities" not in doc.body:
                raise DocumentError("'identities:' must come before arrows", no)
            m = re.match(r"^(\S+)\s*->\s*(\S+)$", value)
            if not _NAME.match(args or "") or not m:
                raise DocumentError("expected 'arrow <name>: <from> -> <to>'", no)
            ids = doc.body["identities"]
            if m.group(1) not in ids or m.group(2) not in ids:
                raise DocumentError("arrow endpoints must be identities", no)
            names = ids + [a[0] for a in arrows]
            if args in names:
                raise DocumentError(f"duplicate arrow {args!r}", no)
            arrows.append((args, m.group(1), m.group(2)))
        elif not key and line.split()[0] == "compose":
            toks = line.split()
            if len(toks) != 5 or toks[3] != "=":
                raise DocumentError("expected 'compose <x> <y> = <z>'", no)
            compose[(toks[1], toks[2])] = (toks[4], no)
        else:
            raise DocumentError(f"unexpected line {line!r}", no)
    _require(doc, "identities")
    ids = doc.body["identities"]
    names = ids + [a[0] for a in arrows]
    idx = {n: i for i, n in enumerate(names)}
    dom = {i: i for i in range(len(ids))}
    ran = {i: i for i in range(len(ids))}
    for j, (_, a, b) in enumerate(arrows):
        dom[len(ids) + j], ran[len(ids) + j] = idx[a], idx[b]
    k = len(names)
    C = np.full((k, k), -1, dtype=np.int64)
    for x in range(k):
        C[x, dom[x]] = x
        C[ran[x], x] = x
    for (x, y), (z, no) in compose.items():
        if x not in idx or y not in idx or z not in idx:
            raise DocumentError("unknown arrow in compose line", no)
        xi, yi, zi = idx[x], idx[y], idx[z]
        if dom[xi] != ran[yi]:
            raise DocumentError(f"{x} . {y} is not composable", no)
        if dom[zi] != dom[yi] or ran[zi] != ran[xi]:
            raise DocumentError(f"{x} . {y} = {z} has the wrong endpoints", no)
        if C[xi, yi] != -1 and C[xi, yi] != zi:
            raise DocumentError(f"conflicting value for {x} . {y}", no)
        C[xi, yi] = zi
    missing = [(names[x], names[y]) for x in range(k) for y in range(k) if dom[x] == ran[y] and C[x, y] == -1]
    if missing:
        raise DocumentError(f"missing 'compose {missing[0][0]} {missing[0][1]} = ...'")
    doc.body["composition"] = C
    doc.body["names"] = names


def _parse_action(lines, doc: InputDocument) -> None:
    rest = _parse_cayley_section(lines, doc)
    rows = []
    in_action = False
    for no, line in rest:
        key, args, value = _split_key(line, no)
        if key == "points" and not args:
            _once(doc, "points", _names(value, no, "points"), no)
        elif key == "action" and not args:
            if value:
                raise DocumentError("action rows go on the following lines", no)
            in_action = True
        elif in_action and not key:
            m = re.match(r"^(\S+)\s+(\S+)\s*->\s*(\S+)$", line)
            if not m:
                raise DocumentError("expected '<element> <point> -> <point>'", no)
            rows.append((m.group(1), m.group(2), m.group(3), no))
        else:
            raise DocumentError(f"unexpected line {line!r}", no)
    _require(doc, "points")
    elems = {n: i for i, n in enumerate(doc.body["elements"])}
    pts = {n: i for i, n in enumerate(doc.body["points"])}
    table = np.full((len(elems), len(pts)), -1, dtype=np.int64)
    for s, x, y, no in rows:
        if s not in elems:
            raise DocumentError(f"unknown element {s!r}", no)
        if x not in pts or y not in pts:
            raise DocumentError("unknown point", no)
        if table[elems[s], pts[x]] not in (-1, pts[y]):
            raise DocumentError(f"{s} . {x} given twice", no)
        table[elems[s], pts[x]] = pts[y]
    doc.body["action"] = table


# -- building ---------------------------------------------------------------------


def build(doc: InputDocument, max_order: int = MAX_ORDER, max_carrier: int = MAX_CARRIER) -> Loaded:
    """Construct the semigroup (and action) a document describes.

    Raises :class:`DocumentError` for semantic errors; caps raise
    :class:`~iskit.semigroup.CapExceededError`.
    """
    b = doc.body
    try:
        if doc.kind == "partial_bijections":
            names = [n for n, _ in b["gens"]]
            S = close_generators([g for _, g in b["gens"]], names, max_order=max_order,
                                 max_carrier=max_carrier)
            return Loaded(S, doc, points=list(b["points"]))
        if doc.kind in ("cayley_table", "action"):
            S = from_cayley_table(b["table"], inverse_hint=b.get("inverse"), labels=b["elements"])
            if doc.kind == "action":
                return Loaded(S, doc, points=list(b["points"]),
                              action=Action(S, b["action"], b["points"]))
            return Loaded(S, doc)
        if doc.kind == "presheaf":
            Y = b["poset"]
            P = PresheafOfGroups(Y, [t for _, t in b["groups"]], b["maps"])
            S = clifford_from_presheaf(P)
            labels = [f"{Y.labels[e]}:{g}" for e, (names, _) in enumerate(b["groups"]) for g in names]
            return Loaded(_relabel(S, labels), doc)
        if doc.kind == "semidirect":
            names, table = b["group"]
            G = from_cayley_table(table, labels=names)
            S = semidirect_product(SemilatticeGroupAction(G, b["poset"], b["act"]))
            return Loaded(S, doc)
        if doc.kind == "groupoid":
            G = FiniteGroupoid(b["composition"], range(len(b["identities"])), b["names"])
            return Loaded(adjoin_zero(G), doc)
    except (NotInverseSemigroupError, GroupoidAxiomError, PresheafAxiomError, ActionAxiomError) as exc:
        raise DocumentError(str(exc)) from None
    except ValueError as exc:  # action and other validation errors
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from None
    raise DocumentError(f"unknown kind {doc.kind!r}")


def _relabel(S: FiniteInvSemigroup, labels: Sequence[str]) -> FiniteInvSemigroup:
    return FiniteInvSemigroup(S.product, S.inverse, labels=labels, maps=S.maps)


def load(text: str, **caps) -> Loaded:
    return build(parse(text), **caps)


# -- element references -----------------------------------------------------------


_TOKEN = re.compile(r"1_\{[^}]*\}|\{[^}]*\}|[^\s,]+")


def resolve_elements(loaded: Loaded, text: str) -> list[int]:
    """Element references: labels, or for concrete semigroups literals such as
    ``1_x``, ``1_{x,y}``, ``{x->y, y->x}`` and ``{}``."""
    S = loaded.semigroup
    out = []
    for tok in _TOKEN.findall(text):
        if tok in S._label_index:
            out.append(S.index(tok))
            continue
        if S.maps is None or loaded.points is None:
            raise DocumentError(f"unknown element {tok!r}")
        out.append(S.index_of_map(_literal(tok, loaded.points)))
    if not out:
        raise DocumentError("no elements given")
    return out


def _literal(tok: str, points: list[str]) -> PartialBijection:
    idx = {p: i for i, p in enumerate(points)}
    n = len(points)
    try:
        if tok.startswith("1_"):
            body = tok[2:].strip("{}")
            names = [p for p in re.split(r"[\s,]+", body) if p]
            return PartialBijection.identity(n, [idx[p] for p in names])
        if tok.startswith("{") and tok.endswith("}"):
            pairs = [p.split("->") for p in re.split(r"[\s,]+", tok[1:-1]) if p]
            return PartialBijection.from_pairs(n, [(idx[a], idx[b]) for a, b in pairs])
    except (KeyError, ValueError):
        pass
    raise DocumentError(f"cannot read element {tok!r}")


# -- emitting ---------------------------------------------------------------------


def _safe_names(labels: Sequence[str], prefix: str) -> list[str]:
    cand = [l.replace(" ", "") for l in labels]
    if all(_NAME.match(c) and "->" not in c for c in cand) and len(set(cand)) == len(cand):
        return cand
    return [f"{prefix}{i}" for i in range(len(labels))]


def emit_cayley_table(S: FiniteInvSemigroup, comment: str = "") -> str:
    names = _safe_names(S.labels, "e")
    out = ["kind: cayley_table"]
    if comment:
        out.insert(0, f"# {comment}")
    out.append("elements: " + " ".join(names))
    out.append("table:")
    for row in S.product:
        out.append(" ".join(names[j] for j in row))
    out.append("inverse: " + " ".join(names[j] for j in S.inverse))
    return "\n".join(out) + "\n"


def emit_partial_bijections(S: FiniteInvSemigroup, point_names: Optional[Sequence[str]] = None,
                            comment: str = "") -> str:
    """Concrete semigroup as points plus a generating set of its elements."""
    if S.maps is None:
        raise ValueError("semigroup is not concrete")
    n = S.maps[0].carrier_size
    points = _safe_names(point_names, "p") if point_names is not None else [f"p{i}" for i in range(n)]
    gens, _, _ = generating_set(S)
    gnames = _safe_names([S.labels[g] for g in gens], "g")
    out = [f"# {comment}"] if comment else []
    out += ["kind: partial_bijections", "points: " + " ".join(points)]
    for name, g in zip(gnames, gens):
        f = S.maps[g]
        pairs = " ".join(f"{points[x]}->{points[y]}" for x, y in f.graph())
        out.append(f"gen {name}: {pairs}".rstrip())
    return "\n".join(out) + "\n"


def emit_action(A: Action, comment: str = "") -> str:
    S = A.semigroup
    body = emit_cayley_table(S, comment).rstrip("\n").split("\n")
    body[body.index("kind: cayley_table")] = "kind: action"
    names = _safe_names(S.labels, "e")
    points = _safe_names(A.point_labels, "x")
    body.append("points: " + " ".join(points))
    body.append("action:")
    for s in range(S.order):
        for x in range(A.n_points):
            y = A.table[s, x]
            if y >= 0:
                body.append(f"{names[s]} {points[x]} -> {points[y]}")
    return "\n".join(body) + "\n"


def emit_presheaf(P: PresheafOfGroups, comment: str = "") -> str:
    Y = P.semilattice
    pts = _safe_names(Y.labels, "y")
    out = [f"# {comment}"] if comment else []
    out += ["kind: presheaf", "semilattice: " + " ".join(pts)]
    k = len(Y)
    for e in range(k):
        for f in range(k):
            if e != f and Y.leq[e, f] and not any(Y.leq[e, g] and Y.leq[g, f] and g not in (e, f) for g in range(k)):
                out.append(f"leq {pts[e]} {pts[f]}")
    gnames = []
    for e, G in enumerate(P.groups):
        names = [f"g{i}" for i in range(len(G))]
        gnames.append(names)
        rows = " / ".join(" ".join(names[j] for j in row) for row in G)
        out.append(f"node {pts[e]}: group {rows}")
    for (e, f), img in sorted(P.maps.items()):
        if e != f:
            pairs = " ".join(f"{gnames[e][x]}->{gnames[f][y]}" for x, y in enumerate(img))
            out.append(f"map {pts[e]} {pts[f]}: {pairs}")
    return "\n".join(out) + "\n"


def emit_groupoid(G: FiniteGroupoid, comment: str = "") -> str:
    names = _safe_names(G.labels, "a")
    ids = set(G.identities)
    out = [f"# {comment}"] if comment else []
    out += ["kind: groupoid", "identities: " + " ".join(names[e] for e in G.identities)]
    # identities must come first in the arrow numbering when re-read
    for x in range(len(G)):
        if x not in ids:
            out.append(f"arrow {names[x]}: {names[G.dom[x]]} -> {names[G.ran[x]]}")
    for x in range(len(G)):
        for y in range(len(G)):
            z = G.composition[x, y]
            if z >= 0 and x not in ids and y not in ids:
                out.append(f"compose {names[x]} {names[y]} = {names[z]}")
    return "\n".join(out) + "\n"
