"""Readers for design text (``.sfd``), circuit text (``.qhc``) and JSON designs.

Design format, one statement per line::

    structor S1 "Generic-Cloneable-Shape"
    functional F1 "Clone"
    provides S1 F1
    # comment

Circuit format::

    qubits 3
    box Oracle "Oracle" lines 0-2 functional "Mark-Target"
    couple Oracle Amplification via Mark-Target
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .exceptions import DesignError, ParseError
from .model import ID_PATTERN, SystemDesign

_TOKEN = re.compile(r'\s*(?:(?P<comment>#.*)|"(?P<quoted>(?:[^"\\]|\\.)*)"|(?P<bare>[^\s"#]+)|(?P<bad>"))')
_ESCAPE = re.compile(r"\\(.)", re.DOTALL)
_UNESCAPE = {"n": "\n", "r": "\r"}
_SPAN = re.compile(r"(\d+)-(\d+)\Z")


class Token(NamedTuple):
    text: str
    column: int
    quoted: bool


def tokenize(line: str, lineno: int) -> list[Token]:
    """Split one line into bare words and quoted strings, dropping comments."""
    tokens = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None or m.end() == pos:
            break
        if m.group("bad") is not None:
            raise ParseError("unterminated string", lineno, m.start("bad") + 1)
        if m.group("comment") is not None:
            break
        if m.group("quoted") is not None:
            text = _ESCAPE.sub(lambda e: _UNESCAPE.get(e.group(1), e.group(1)), m.group("quoted"))
            tokens.append(Token(text, m.start("quoted"), True))
        else:
            tokens.append(Token(m.group("bare"), m.start("bare") + 1, False))
        pos = m.end()
    return tokens


def _lines(text: str):
    # only \n ends a statement; other Unicode line breaks may sit inside quotes
    for lineno, raw in enumerate(text.split("\n"), start=1):
        yield lineno, raw.removesuffix("\r")


def _quote(text: str) -> str:
    text = text.replace("\\", "\\\\").replace('"', '\\"')
    return '"' + text.replace("\n", "\\n").replace("\r", "\\r") + '"'


def _expect_id(tok: Token, lineno: int, what: str) -> str:
    if tok.quoted or not ID_PATTERN.match(tok.text):
        raise ParseError(f"expected {what}, got {tok.text!r}", lineno, tok.column)
    return tok.text


def _expect_arity(tokens, n, lineno, usage):
    if len(tokens) != n:
        col = tokens[min(len(tokens), n) - 1].column if tokens else None
        raise ParseError(f"expected `{usage}`", lineno, col)


# --------------------------------------------------------------------------
# design text


class Declaration(NamedTuple):
    kind: str
    args: tuple[str, ...]
    line: int


@dataclass(frozen=True)
class DesignDocument:
    source: str
    declarations: tuple[Declaration, ...]


def read_design_document(text: str, source: str = "<string>") -> DesignDocument:
    """Parse design text into declarations, checking syntax and references."""
    decls = []
    declared: dict[str, str] = {}
    edges: set[tuple[str, str]] = set()
    for lineno, raw in _lines(text):
        tokens = tokenize(raw, lineno)
        if not tokens:
            continue
        head = tokens[0]
        if head.quoted:
            raise ParseError(f"unexpected string {head.text!r}", lineno, head.column)
        if head.text in ("structor", "functional"):
            _expect_arity(tokens, 3, lineno, f'{head.text} <id> "<display name>"')
            ident = _expect_id(tokens[1], lineno, "an id")
            if not tokens[2].quoted:
                raise ParseError("display name must be a quoted string", lineno, tokens[2].column)
            if ident in declared:
                raise ParseError(f"duplicate id {ident!r}", lineno, tokens[1].column)
            declared[ident] = head.text
            decls.append(Declaration(head.text, (ident, tokens[2].text), lineno))
        elif head.text == "provides":
            _expect_arity(tokens, 3, lineno, "provides <structor-id> <functional-id>")
            s = _expect_id(tokens[1], lineno, "a structor id")
            f = _expect_id(tokens[2], lineno, "a functional id")
            for tok, ident, kind in ((tokens[1], s, "structor"), (tokens[2], f, "functional")):
                if ident not in declared:
                    raise ParseError(f"unknown id {ident!r} in provides", lineno, tok.column)
                if declared[ident] != kind:
                    raise ParseError(f"{ident!r} is a {declared[ident]}, expected a {kind}", lineno, tok.column)
            if (s, f) in edges:
                raise ParseError(f"duplicate edge ({s}, {f})", lineno, head.column)
            edges.add((s, f))
            decls.append(Declaration("provides", (s, f), lineno))
        else:
            raise ParseError(f"unknown statement {head.text!r}", lineno, head.column)
    return DesignDocument(source, tuple(decls))


def design_from_document(doc: DesignDocument, name: str = "design") -> SystemDesign:
    structors = [d.args for d in doc.declarations if d.kind == "structor"]
    functionals = [d.args for d in doc.declarations if d.kind == "functional"]
    if not structors or not functionals:
        raise ParseError("empty design: at least one structor and one functional are required")
    provides = [d.args for d in doc.declarations if d.kind == "provides"]
    return SystemDesign(name, structors, functionals, provides)


def parse_design(text: str, name: str = "design") -> SystemDesign:
    """Parse design text into a :class:`SystemDesign`.

    Raises
    ------
    ParseError
        On syntax errors, duplicate ids or edges, references to undeclared
        ids, and designs without any structor or functional.
    """
    return design_from_document(read_design_document(text, name), name)


def format_design(design: SystemDesign) -> str:
    """Serialize a design to the text format; ``parse_design`` inverts it."""
    lines = [f"# {design.name}"]
    lines += [f"structor {i} {_quote(n)}" for i, n in design.structors]
    lines += [f"functional {i} {_quote(n)}" for i, n in design.functionals]
    lines += [f"provides {s} {f}" for s, f in design.provides]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# circuit text


class Box(NamedTuple):
    id: str
    display: str
    lo: int
    hi: int
    functional: str


class Coupling(NamedTuple):
    a: str
    b: str
    via: str


@dataclass(frozen=True)
class CircuitDocument:
    """High-level quantum circuit: boxes over qubit lines, left to right."""

    qubits: int
    boxes: tuple[Box, ...]
    couplings: tuple[Coupling, ...] = ()
    name: str = "circuit"


def parse_circuit(text: str, name: str = "circuit") -> CircuitDocument:
    """Parse circuit text into a :class:`CircuitDocument`."""
    qubits = None
    boxes: list[Box] = []
    couplings: list[Coupling] = []
    box_ids: set[str] = set()
    for lineno, raw in _lines(text):
        tokens = tokenize(raw, lineno)
        if not tokens:
            continue
        head = tokens[0]
        if qubits is None:
            if head.text != "qubits" or head.quoted:
                raise ParseError("first statement must be `qubits <n>`", lineno, head.column)
            _expect_arity(tokens, 2, lineno, "qubits <n>")
            try:
                qubits = int(tokens[1].text)
            except ValueError:
                raise ParseError(f"qubit count must be an integer, got {tokens[1].text!r}", lineno, tokens[1].column)
            if qubits <= 0:
                raise ParseError("qubit count must be positive", lineno, tokens[1].column)
            continue
        if head.text == "box" and not head.quoted:
            usage = 'box <id> "<display>" lines <lo>-<hi> functional "<display>"'
            _expect_arity(tokens, 7, lineno, usage)
            ident = _expect_id(tokens[1], lineno, "a box id")
            if not tokens[2].quoted or not tokens[6].quoted:
                raise ParseError(f"expected `{usage}`", lineno, tokens[2].column)
            if tokens[3].text != "lines" or tokens[5].text != "functional":
                raise ParseError(f"expected `{usage}`", lineno, tokens[3].column)
            m = _SPAN.match(tokens[4].text)
            if m is None:
                raise ParseError(f"bad line span {tokens[4].text!r}", lineno, tokens[4].column)
            lo, hi = int(m.group(1)), int(m.group(2))
            if not 0 <= lo <= hi < qubits:
                raise ParseError(f"span {lo}-{hi} out of range for {qubits} qubits", lineno, tokens[4].column)
            if ident in box_ids:
                raise ParseError(f"duplicate box id {ident!r}", lineno, tokens[1].column)
            box_ids.add(ident)
            boxes.append(Box(ident, tokens[2].text, lo, hi, tokens[6].text))
        elif head.text == "couple" and not head.quoted:
            _expect_arity(tokens, 5, lineno, "couple <idA> <idB> via <functional-id>")
            if tokens[3].text != "via":
                raise ParseError("expected `via`", lineno, tokens[3].column)
            a = _expect_id(tokens[1], lineno, "a box id")
            b = _expect_id(tokens[2], lineno, "a box id")
            for tok in (tokens[1], tokens[2]):
                if tok.text not in box_ids:
                    raise ParseError(f"coupling references unknown box {tok.text!r}", lineno, tok.column)
            couplings.append(Coupling(a, b, tokens[4].text))
        elif head.text == "qubits":
            raise ParseError("`qubits` may appear only once", lineno, head.column)
        else:
            raise ParseError(f"unknown statement {head.text!r}", lineno, head.column)
    if qubits is None or not boxes:
        raise ParseError("empty design: a circuit needs `qubits` and at least one box")
    return CircuitDocument(qubits, tuple(boxes), tuple(couplings), name)


def lower_circuit(doc: CircuitDocument) -> SystemDesign:
    """Turn a circuit into a design: one structor per box, one functional per computation.

    Structors are numbered ``S1..`` in box order and functionals ``F1..`` by
    first appearance. A coupling ``(A, B, via F)`` adds the edge from B's
    structor to A's functional F. ``F`` may be given as the generated id or
    as the functional's display name.
    """
    functional_ids: dict[str, str] = {}
    for box in doc.boxes:
        functional_ids.setdefault(box.functional, f"F{len(functional_ids) + 1}")
    structor_of = {box.id: f"S{k}" for k, box in enumerate(doc.boxes, start=1)}
    by_id = {box.id: box for box in doc.boxes}
    provides = [(structor_of[box.id], functional_ids[box.functional]) for box in doc.boxes]
    for c in doc.couplings:
        owned = functional_ids[by_id[c.a].functional]
        if c.via not in (owned, by_id[c.a].functional):
            raise DesignError(f"coupling {c.a} -> {c.b}: functional {c.via!r} is not provided by box {c.a!r}")
        edge = (structor_of[c.b], owned)
        if edge not in provides:
            provides.append(edge)
    return SystemDesign(
        name=doc.name,
        structors=[(structor_of[b.id], b.display) for b in doc.boxes],
        functionals=[(fid, disp) for disp, fid in functional_ids.items()],
        provides=provides,
        sequence=[structor_of[b.id] for b in doc.boxes],
    )


# --------------------------------------------------------------------------
# JSON mirror


def design_to_json(design: SystemDesign) -> dict:
    return {
        "name": design.name,
        "structors": [{"id": i, "name": n} for i, n in design.structors],
        "functionals": [{"id": i, "name": n} for i, n in design.functionals],
        "provides": [[s, f] for s, f in design.provides],
        "sequence": list(design.sequence) if design.sequence is not None else None,
    }


def design_from_json(obj: dict, name: str = "design") -> SystemDesign:
    try:
        structors = [(d["id"], d.get("name", d["id"])) for d in obj["structors"]]
        functionals = [(d["id"], d.get("name", d["id"])) for d in obj["functionals"]]
        provides = [tuple(e) for e in obj["provides"]]
        if any(len(e) != 2 for e in provides):
            raise ParseError("each provides entry must be a [structor, functional] pair")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed JSON design: {exc}") from None
    try:
        return SystemDesign(obj.get("name", name), structors, functionals, provides, obj.get("sequence"))
    except DesignError as exc:
        raise ParseError(str(exc)) from None


FORMATS = {".sfd": "design", ".qhc": "circuit", ".json": "json"}


def load_design(path, fmt: str | None = None) -> SystemDesign:
    """Read a design from a file, picking the reader from ``fmt`` or the extension."""
    path = Path(path)
    if fmt is None:
        try:
            fmt = FORMATS[path.suffix.lower()]
        except KeyError:
            raise ParseError(f"cannot infer format from extension {path.suffix!r}; pass --format") from None
    text = path.read_text(encoding="utf-8")
    name = path.stem
    if fmt == "design":
        return parse_design(text, name)
    if fmt == "circuit":
        return lower_circuit(parse_circuit(text, name))
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return design_from_json(obj, name)
    raise ValueError(f"unknown format {fmt!r}")
