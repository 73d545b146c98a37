"""Parser and canonical serializer for the ``.ofn`` ontology file format.

The format is a fixed subset of OWL 2 functional-style syntax: ``Prefix``
lines followed by one ``Ontology(<iri> ...)`` block whose axioms are drawn
from the keywords in :data:`KEYWORDS`.  ``#`` starts a comment.  The parser
recovers at the next top-level axiom, so one file can report many errors.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, replace
from typing import Optional

from .model import (
    Axiom,
    Characteristic,
    ClassAssertion,
    ClassExpr,
    DataPropertyAssertion,
    DataPropertyDomain,
    DataPropertyRange,
    DATATYPES,
    DisjointClasses,
    DisjointUnion,
    EntityKind,
    EquivalentClasses,
    InverseObjectProperties,
    Label,
    Literal,
    Name,
    ObjectPropertyAssertion,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    OntologyError,
    PropertyCharacteristic,
    SubClassOf,
    SubObjectPropertyOf,
    UnionOf,
    axiom_signature,
)

CHARACTERISTIC_KEYWORDS = {
    f"{c.value}ObjectProperty": c for c in Characteristic
}

DECLARATION_KINDS = {k.value: k for k in EntityKind}

KEYWORDS = (
    ["Declaration", "SubClassOf", "EquivalentClasses", "DisjointClasses",
     "DisjointUnion", "ObjectPropertyDomain", "ObjectPropertyRange",
     "DataPropertyDomain", "DataPropertyRange", "SubObjectPropertyOf",
     "InverseObjectProperties", "ClassAssertion", "ObjectPropertyAssertion",
     "DataPropertyAssertion", "AnnotationAssertion"]
    + list(CHARACTERISTIC_KEYWORDS)
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    span: SourceSpan
    code: str
    message: str

    def __str__(self):
        return (f"{self.severity}:{self.span.line}:{self.span.column}:"
                f"{self.code}:{self.message}")


@dataclass(frozen=True)
class ParseResult:
    ontology: Optional[Ontology]
    diagnostics: tuple

    @property
    def errors(self):
        return tuple(d for d in self.diagnostics if d.severity == "error")


class _Halt(Exception):
    """Internal: abandon the current top-level axiom and resynchronize."""


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<eq>=)
      | (?P<dcaret>\^\^)
      | (?P<iri><[^<>\s]*>)
      | (?P<string>"(?:[^"\\\n]|\\.)*")
      | (?P<name>(?:[A-Za-z_][A-Za-z0-9_.-]*)?:(?:[A-Za-z_][A-Za-z0-9_-]*)?
                 |[A-Za-z_][A-Za-z0-9_.-]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # lparen rparen eq dcaret iri string name eof
    text: str
    pos: int
    length: int


def _unescape(raw: str) -> str:
    return re.sub(r"\\(.)", r"\1", raw[1:-1])


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.diagnostics: list[ParseDiagnostic] = []
        self.line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]
        self.tokens = self._tokenize()
        self.i = 0
        self.depth = 0
        self.prefixes: dict[str, str] = {}
        self.declarations: set[tuple[Name, EntityKind]] = set()
        self.axioms: list[Axiom] = []
        self._axiom_set: set[Axiom] = set()
        # (name, required kind, span) checked once declarations are known
        self.references: list[tuple[Name, Optional[EntityKind], SourceSpan]] = []
        self.ontology_id = ""

    # -- low-level machinery --

    def _span(self, pos: int, length: int) -> SourceSpan:
        line = bisect_right(self.line_starts, pos)
        col = pos - self.line_starts[line - 1] + 1
        return SourceSpan(line, col, length)

    def _tok_span(self, tok: _Token) -> SourceSpan:
        return self._span(tok.pos, tok.length)

    def _tokenize(self) -> list[_Token]:
        toks = []
        pos = 0
        n = len(self.text)
        while pos < n:
            m = _TOKEN_RE.match(self.text, pos)
            if m is None:
                ch = self.text[pos]
                if ch == '"':
                    self._diag("error", self._span(pos, 1), "unterminated",
                               "unterminated string literal")
                    eol = self.text.find("\n", pos)
                    pos = n if eol < 0 else eol + 1
                elif ch == "<":
                    self._diag("error", self._span(pos, 1), "unterminated",
                               "unterminated IRI")
                    eol = self.text.find("\n", pos)
                    pos = n if eol < 0 else eol + 1
                else:
                    self._diag("error", self._span(pos, 1), "syntax",
                               f"unexpected character {ch!r}")
                    pos += 1
                continue
            kind = m.lastgroup
            if kind not in ("ws", "comment"):
                toks.append(_Token(kind, m.group(), m.start(), m.end() - m.start()))
            pos = m.end()
        toks.append(_Token("eof", "", n, 0))
        return toks

    def _diag(self, severity, span, code, message):
        self.diagnostics.append(ParseDiagnostic(severity, span, code, message))

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        if tok.kind == "lparen":
            self.depth += 1
        elif tok.kind == "rparen":
            self.depth -= 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            self._diag("error", self._tok_span(tok), "syntax",
                       f"expected {what}, found {tok.text or 'end of file'!r}")
            raise _Halt()
        return tok

    def _recover(self):
        """Skip to the next plausible top-level axiom keyword."""
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if self.depth <= 1:
                if tok.kind == "rparen":
                    return  # let the caller close the enclosing block
                if tok.kind == "name" and ":" not in tok.text:
                    return
            self.next()

    def _close_axiom(self, keyword_tok: _Token):
        tok = self.next()
        if tok.kind == "rparen":
            return
        self._diag("error", self._tok_span(tok), "arity",
                   f"too many arguments to {keyword_tok.text}")
        raise _Halt()

    # -- leaf productions --

    def parse_name(self, what="entity name") -> tuple[Name, SourceSpan]:
        tok = self.expect("name", what)
        if ":" not in tok.text:
            self._diag("error", self._tok_span(tok), "syntax",
                       f"expected {what}, found keyword {tok.text!r}")
            raise _Halt()
        prefix, _, local = tok.text.partition(":")
        if not local:
            self._diag("error", self._tok_span(tok), "syntax",
                       f"expected {what}, found bare prefix {tok.text!r}")
            raise _Halt()
        return Name(prefix, local), self._tok_span(tok)

    def parse_ref(self, kind: Optional[EntityKind], what="entity name") -> Name:
        name, span = self.parse_name(what)
        self.references.append((name, kind, span))
        return name

    def parse_class_expr(self) -> ClassExpr:
        tok = self.peek()
        if tok.kind == "name" and tok.text == "ObjectUnionOf":
            self.next()
            self.expect("lparen", "'('")
            members = []
            while self.peek().kind == "name":
                members.append(self.parse_ref(EntityKind.CLASS, "class name"))
            end = self.next()
            if end.kind != "rparen":
                self._diag("error", self._tok_span(end), "syntax",
                           "expected ')' after ObjectUnionOf members")
                raise _Halt()
            if len(set(members)) < 2:
                self._diag("error", self._tok_span(tok), "arity",
                           "ObjectUnionOf needs at least two distinct classes")
                raise _Halt()
            return UnionOf(tuple(members))
        return self.parse_ref(EntityKind.CLASS, "class expression")

    def parse_literal(self) -> Literal:
        tok = self.expect("string", "literal")
        lexical = _unescape(tok.text)
        datatype = "xsd:string"
        if self.peek().kind == "dcaret":
            self.next()
            dt = self.expect("name", "datatype")
            if dt.text not in DATATYPES:
                self._diag("error", self._tok_span(dt), "datatype",
                           f"unsupported datatype {dt.text!r}")
                raise _Halt()
            datatype = dt.text
        return Literal(lexical, datatype)

    def parse_datatype(self) -> str:
        tok = self.expect("name", "datatype")
        if tok.text not in DATATYPES:
            self._diag("error", self._tok_span(tok), "datatype",
                       f"unsupported datatype {tok.text!r}")
            raise _Halt()
        return tok.text

    # -- grammar --

    def parse_document(self):
        while self.peek().kind == "name" and self.peek().text == "Prefix":
            try:
                self.parse_prefix()
            except _Halt:
                self._recover()
        tok = self.next()
        if not (tok.kind == "name" and tok.text == "Ontology"):
            self._diag("error", self._tok_span(tok), "syntax",
                       "expected Ontology(...) block")
            return
        try:
            self.expect("lparen", "'('")
            iri = self.expect("iri", "ontology IRI")
            self.ontology_id = iri.text[1:-1]
        except _Halt:
            self._recover()
        while True:
            tok = self.peek()
            if tok.kind == "rparen":
                self.next()
                break
            if tok.kind == "eof":
                self._diag("error", self._tok_span(tok), "unterminated",
                           "unterminated Ontology(...) block")
                break
            try:
                self.parse_axiom()
            except _Halt:
                self._recover()
        tail = self.peek()
        if tail.kind != "eof":
            self._diag("error", self._tok_span(tail), "syntax",
                       "content after the Ontology(...) block")

    def parse_prefix(self):
        self.next()  # 'Prefix'
        self.expect("lparen", "'('")
        tok = self.expect("name", "prefix name")
        if not tok.text.endswith(":"):
            self._diag("error", self._tok_span(tok), "syntax",
                       "prefix declaration must end with ':'")
            raise _Halt()
        self.expect("eq", "'='")
        iri = self.expect("iri", "prefix IRI")
        self.expect("rparen", "')'")
        self.prefixes[tok.text[:-1]] = iri.text[1:-1]

    def parse_axiom(self):
        tok = self.next()
        if tok.kind != "name" or ":" in tok.text:
            self._diag("error", self._tok_span(tok), "syntax",
                       f"expected an axiom keyword, found {tok.text!r}")
            raise _Halt()
        keyword = tok.text
        if keyword == "Declaration":
            self.parse_declaration()
            return
        handler = {
            "SubClassOf": self._ax_subclassof,
            "EquivalentClasses": self._ax_equivalent,
            "DisjointClasses": self._ax_disjoint,
            "DisjointUnion": self._ax_disjoint_union,
            "ObjectPropertyDomain": self._ax_obj_domain,
            "ObjectPropertyRange": self._ax_obj_range,
            "DataPropertyDomain": self._ax_data_domain,
            "DataPropertyRange": self._ax_data_range,
            "SubObjectPropertyOf": self._ax_subprop,
            "InverseObjectProperties": self._ax_inverse,
            "ClassAssertion": self._ax_class_assertion,
            "ObjectPropertyAssertion": self._ax_obj_assertion,
            "DataPropertyAssertion": self._ax_data_assertion,
            "AnnotationAssertion": self._ax_annotation,
        }.get(keyword)
        if handler is None and keyword in CHARACTERISTIC_KEYWORDS:
            handler = lambda t: self._ax_characteristic(t, CHARACTERISTIC_KEYWORDS[keyword])
        if handler is None:
            self._diag("error", self._tok_span(tok), "unknown-keyword",
                       f"unknown axiom keyword {keyword!r}")
            raise _Halt()
        self.expect("lparen", "'('")
        ax = handler(tok)
        self._close_axiom(tok)
        if ax is not None and ax not in self._axiom_set:
            self.axioms.append(ax)
            self._axiom_set.add(ax)

    def parse_declaration(self):
        self.expect("lparen", "'('")
        kind_tok = self.expect("name", "entity kind")
        kind = DECLARATION_KINDS.get(kind_tok.text)
        if kind is None:
            self._diag("error", self._tok_span(kind_tok), "unknown-keyword",
                       f"unknown declaration kind {kind_tok.text!r}")
            raise _Halt()
        self.expect("lparen", "'('")
        name, _span = self.parse_name()
        self.expect("rparen", "')'")
        self.expect("rparen", "')'")
        self.declarations.add((name, kind))

    def _ax_subclassof(self, tok):
        return SubClassOf(self.parse_class_expr(), self.parse_class_expr())

    def _ax_equivalent(self, tok):
        return EquivalentClasses(self.parse_class_expr(), self.parse_class_expr())

    def _ax_disjoint(self, tok):
        names = []
        while self.peek().kind == "name":
            names.append(self.parse_ref(EntityKind.CLASS, "class name"))
        if len(set(names)) < 2:
            self._diag("error", self._tok_span(tok), "arity",
                       "DisjointClasses needs at least two distinct classes")
            raise _Halt()
        return DisjointClasses(tuple(names))

    def _ax_disjoint_union(self, tok):
        whole = self.parse_ref(EntityKind.CLASS, "class name")
        parts = []
        while self.peek().kind == "name":
            parts.append(self.parse_ref(EntityKind.CLASS, "class name"))
        if len(set(parts)) < 2:
            self._diag("error", self._tok_span(tok), "arity",
                       "DisjointUnion needs at least two distinct parts")
            raise _Halt()
        return DisjointUnion(whole, tuple(parts))

    def _ax_obj_domain(self, tok):
        return ObjectPropertyDomain(
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"),
            self.parse_class_expr())

    def _ax_obj_range(self, tok):
        return ObjectPropertyRange(
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"),
            self.parse_class_expr())

    def _ax_data_domain(self, tok):
        return DataPropertyDomain(
            self.parse_ref(EntityKind.DATA_PROPERTY, "data property"),
            self.parse_class_expr())

    def _ax_data_range(self, tok):
        return DataPropertyRange(
            self.parse_ref(EntityKind.DATA_PROPERTY, "data property"),
            self.parse_datatype())

    def _ax_subprop(self, tok):
        return SubObjectPropertyOf(
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"),
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"))

    def _ax_inverse(self, tok):
        return InverseObjectProperties(
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"),
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"))

    def _ax_characteristic(self, tok, characteristic):
        return PropertyCharacteristic(
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"),
            characteristic)

    def _ax_class_assertion(self, tok):
        return ClassAssertion(
            self.parse_class_expr(),
            self.parse_ref(EntityKind.INDIVIDUAL, "individual"))

    def _ax_obj_assertion(self, tok):
        return ObjectPropertyAssertion(
            self.parse_ref(EntityKind.OBJECT_PROPERTY, "object property"),
            self.parse_ref(EntityKind.INDIVIDUAL, "individual"),
            self.parse_ref(EntityKind.INDIVIDUAL, "individual"))

    def _ax_data_assertion(self, tok):
        return DataPropertyAssertion(
            self.parse_ref(EntityKind.DATA_PROPERTY, "data property"),
            self.parse_ref(EntityKind.INDIVIDUAL, "individual"),
            self.parse_literal())

    def _ax_annotation(self, tok):
        prop = self.expect("name", "annotation property")
        entity = self.parse_ref(None, "annotated entity")
        value = self.parse_literal()
        if prop.text != "rdfs:label":
            # only labels feed the pipeline; other annotations are dropped
            self._diag("warning", self._tok_span(prop), "annotation-dropped",
                       f"annotation property {prop.text!r} is not preserved")
            return None
        return Label(entity, value.lexical)

    # -- finalization --

    def finish(self) -> ParseResult:
        for name, kind, span in self.references:
            kinds = {k for (n, k) in self.declarations if n == name}
            if not kinds:
                self._diag("error", span, "undeclared",
                           f"{name} is not declared")
            elif kind is not None and kind not in kinds:
                self._diag("error", span, "kind-mismatch",
                           f"{name} is not declared as {kind.value}")
        diagnostics = tuple(self.diagnostics)
        if any(d.severity == "error" for d in diagnostics):
            return ParseResult(None, diagnostics)
        onto = Ontology(
            ontology_id=self.ontology_id,
            declarations=frozenset(self.declarations),
            axioms=tuple(self.axioms),
            prefixes=tuple(sorted(self.prefixes.items())),
        )
        return ParseResult(onto, diagnostics)


def parse(text: str) -> ParseResult:
    p = _Parser(text)
    p.parse_document()
    return p.finish()


def parse_file(path) -> ParseResult:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# --- serialization ----------------------------------------------------------

_KIND_ORDER = {
    EntityKind.CLASS: 0,
    EntityKind.OBJECT_PROPERTY: 1,
    EntityKind.DATA_PROPERTY: 2,
    EntityKind.INDIVIDUAL: 3,
}


def _render_expr(expr: ClassExpr) -> str:
    if isinstance(expr, Name):
        return str(expr)
    return "ObjectUnionOf(" + " ".join(str(m) for m in expr.members) + ")"


def _render_literal(lit: Literal) -> str:
    s = f'"{_escape(lit.lexical)}"'
    if lit.datatype != "xsd:string":
        s += f"^^{lit.datatype}"
    return s


def render_axiom(ax: Axiom) -> str:
    if isinstance(ax, SubClassOf):
        return f"SubClassOf({_render_expr(ax.sub)} {_render_expr(ax.sup)})"
    if isinstance(ax, EquivalentClasses):
        return f"EquivalentClasses({_render_expr(ax.a)} {_render_expr(ax.b)})"
    if isinstance(ax, DisjointClasses):
        return "DisjointClasses(" + " ".join(map(str, ax.classes)) + ")"
    if isinstance(ax, DisjointUnion):
        return f"DisjointUnion({ax.whole} " + " ".join(map(str, ax.parts)) + ")"
    if isinstance(ax, ObjectPropertyDomain):
        return f"ObjectPropertyDomain({ax.prop} {_render_expr(ax.cls)})"
    if isinstance(ax, ObjectPropertyRange):
        return f"ObjectPropertyRange({ax.prop} {_render_expr(ax.cls)})"
    if isinstance(ax, DataPropertyDomain):
        return f"DataPropertyDomain({ax.prop} {_render_expr(ax.cls)})"
    if isinstance(ax, DataPropertyRange):
        return f"DataPropertyRange({ax.prop} {ax.datatype})"
    if isinstance(ax, SubObjectPropertyOf):
        return f"SubObjectPropertyOf({ax.sub} {ax.sup})"
    if isinstance(ax, InverseObjectProperties):
        return f"InverseObjectProperties({ax.a} {ax.b})"
    if isinstance(ax, PropertyCharacteristic):
        return f"{ax.characteristic.value}ObjectProperty({ax.prop})"
    if isinstance(ax, ClassAssertion):
        return f"ClassAssertion({_render_expr(ax.cls)} {ax.individual})"
    if isinstance(ax, ObjectPropertyAssertion):
        return f"ObjectPropertyAssertion({ax.prop} {ax.subject} {ax.object})"
    if isinstance(ax, DataPropertyAssertion):
        return f"DataPropertyAssertion({ax.prop} {ax.subject} {_render_literal(ax.value)})"
    if isinstance(ax, Label):
        return f'AnnotationAssertion(rdfs:label {ax.entity} "{_escape(ax.text)}")'
    raise TypeError(f"not an axiom: {ax!r}")


def _axiom_sort_key(ax: Axiom):
    line = render_axiom(ax)
    keyword = line.split("(", 1)[0]
    return (keyword, line)


def serialize(o: Ontology) -> str:
    """Canonical text form: stable ordering, one axiom per line."""
    prefixes = dict(o.prefixes)
    used = {n.prefix for (n, _) in o.declarations}
    for ax in o.axioms:
        used.update(n.prefix for n, _ in axiom_signature(ax))
    base = o.ontology_id or "urn:ontomap"
    for p in sorted(used):
        if p not in prefixes:
            prefixes[p] = f"{base}#" if p == "" else f"{base}/{p}#"
    lines = [f"Prefix({p}:=<{iri}>)" for p, iri in sorted(prefixes.items())]
    lines.append(f"Ontology(<{o.ontology_id}>")
    for name, kind in sorted(o.declarations,
                             key=lambda nk: (_KIND_ORDER[nk[1]], nk[0])):
        lines.append(f"Declaration({kind.value}({name}))")
    logical = [ax for ax in o.axioms if not isinstance(ax, Label)]
    for ax in sorted(logical, key=_axiom_sort_key):
        lines.append(render_axiom(ax))
    annotations = [ax for ax in o.axioms if isinstance(ax, Label)]
    for ax in sorted(annotations, key=lambda a: (a.entity, a.text)):
        lines.append(render_axiom(ax))
    lines.append(")")
    return "\n".join(lines) + "\n"
