"""Reading and writing schema and instance fact files.

Schema files hold ``entity/1``, ``subclassOf/2``, ``arc/2`` and ``prop/4``
facts. Instance files hold ``node/2`` (or the split ``node/1`` + ``label/2``
form), ``arcs/2`` and ``val/3`` facts. Only these fixed shapes are
understood; there are no variables, operators or nested terms.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Union

__all__ = [
    "FactError",
    "FactSyntaxError",
    "UnknownFactWarning",
    "PropertyFact",
    "SchemaFacts",
    "InstanceFacts",
    "parse_schema_facts",
    "parse_instance_facts",
    "serialize_schema_facts",
    "serialize_instance_facts",
]

TYPE_TAGS = ("int", "string", "date")

Value = Union[int, str]


class FactError(ValueError):
    """A fact file is well formed but semantically invalid."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class FactSyntaxError(FactError):
    """Malformed term in a fact file."""

    def __init__(self, message, line, column, offset):
        self.offset = offset
        super().__init__(message, line, column)


class UnknownFactWarning(UserWarning):
    pass


class PropertyFact(NamedTuple):
    owner: str
    name: str
    type_tag: str
    mandatory: bool


@dataclass
class SchemaFacts:
    entities: list = field(default_factory=list)
    subclass_pairs: list = field(default_factory=list)
    arcs: list = field(default_factory=list)
    property_specs: list = field(default_factory=list)


@dataclass
class InstanceFacts:
    nodes: list = field(default_factory=list)
    arcs: list = field(default_factory=list)
    node_properties: list = field(default_factory=list)


# --------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<int>-?[0-9]+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<punct>[()\[\],.])
    """,
    re.VERBOSE,
)

_IDENT_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


class _Token(NamedTuple):
    kind: str
    text: str
    offset: int
    line: int
    column: int


class _Atom(str):
    """Unquoted identifier argument (kept apart from quoted strings)."""


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _position(text, pos)
            raise FactSyntaxError(f"unexpected character {text[pos]!r}", line, col, pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            line, col = _position(text, pos)
            tokens.append(_Token(kind, m.group(), pos, line, col))
        pos = m.end()
    line, col = _position(text, n)
    tokens.append(_Token("eof", "", n, line, col))
    return tokens


def _unquote(s):
    body = s[1:-1]
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), body)


class _Fact(NamedTuple):
    name: str
    args: tuple
    line: int
    column: int


def _parse_terms(text):
    """Yield ``_Fact`` records; arguments are ints, ``_Atom``, str or lists."""
    tokens = _tokenize(text)
    i = 0

    def fail(tok, what):
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise FactSyntaxError(f"expected {what}, found {found}", tok.line, tok.column, tok.offset)

    def expect(text_):
        nonlocal i
        tok = tokens[i]
        if tok.kind != "punct" or tok.text != text_:
            fail(tok, repr(text_))
        i += 1

    def scalar():
        nonlocal i
        tok = tokens[i]
        if tok.kind == "int":
            i += 1
            return int(tok.text)
        if tok.kind == "ident":
            i += 1
            return _Atom(tok.text)
        if tok.kind == "string":
            i += 1
            return _unquote(tok.text)
        if tok.kind == "var":
            raise FactSyntaxError(
                f"variables are not supported: {tok.text!r}", tok.line, tok.column, tok.offset
            )
        fail(tok, "a constant")

    def argument():
        nonlocal i
        tok = tokens[i]
        if tok.kind == "punct" and tok.text == "[":
            i += 1
            items = []
            if tokens[i].kind == "punct" and tokens[i].text == "]":
                i += 1
                return items
            while True:
                items.append(scalar())
                tok = tokens[i]
                if tok.kind == "punct" and tok.text == ",":
                    i += 1
                    continue
                expect("]")
                return items
        return scalar()

    while tokens[i].kind != "eof":
        head = tokens[i]
        if head.kind != "ident":
            fail(head, "a predicate name")
        i += 1
        args = []
        if tokens[i].kind == "punct" and tokens[i].text == "(":
            i += 1
            while True:
                args.append(argument())
                tok = tokens[i]
                if tok.kind == "punct" and tok.text == ",":
                    i += 1
                    continue
                expect(")")
                break
        expect(".")
        yield _Fact(head.text, tuple(args), head.line, head.column)


# --------------------------------------------------------------------------
# argument coercion


def _ident(fact, k):
    v = fact.args[k]
    if not isinstance(v, _Atom):
        raise FactError(
            f"{fact.name}/{len(fact.args)}: argument {k + 1} must be an identifier, got {v!r}",
            fact.line,
            fact.column,
        )
    return str(v)


def _integer(fact, k, nonneg=True):
    v = fact.args[k]
    if not isinstance(v, int) or (nonneg and v < 0):
        kind = "a non-negative integer" if nonneg else "an integer"
        raise FactError(
            f"{fact.name}/{len(fact.args)}: argument {k + 1} must be {kind}, got {v!r}",
            fact.line,
            fact.column,
        )
    return v


def _int_list(fact, k):
    v = fact.args[k]
    if not isinstance(v, list):
        raise FactError(
            f"{fact.name}/{len(fact.args)}: argument {k + 1} must be a list", fact.line, fact.column
        )
    out = []
    for item in v:
        if not isinstance(item, int) or item < 0:
            raise FactError(
                f"{fact.name}/{len(fact.args)}: list items must be non-negative integers, got {item!r}",
                fact.line,
                fact.column,
            )
        out.append(item)
    return out


def _value(fact, k):
    v = fact.args[k]
    if isinstance(v, list):
        raise FactError("val/3: value must be a constant, got a list", fact.line, fact.column)
    if isinstance(v, _Atom):
        return str(v)
    return v


def _warn_unknown(fact):
    warnings.warn(
        f"line {fact.line}: ignoring unrecognized fact {fact.name}/{len(fact.args)}",
        UnknownFactWarning,
        stacklevel=3,
    )


# --------------------------------------------------------------------------
# schema files


def parse_schema_facts(text):
    """Parse schema facts, preserving file order.

    Unrecognized predicates emit :class:`UnknownFactWarning` and are skipped.
    """
    facts = SchemaFacts()
    seen_entities = set()
    seen_pairs = set()
    seen_arcs = set()
    seen_props = set()
    for fact in _parse_terms(text):
        sig = (fact.name, len(fact.args))
        if sig == ("entity", 1):
            name = _ident(fact, 0)
            if name in seen_entities:
                raise FactError(f"duplicate entity {name!r}", fact.line, fact.column)
            seen_entities.add(name)
            facts.entities.append(name)
        elif sig == ("subclassOf", 2):
            pair = (_ident(fact, 0), _ident(fact, 1))
            if pair in seen_pairs:
                raise FactError(f"duplicate subclassOf{pair}", fact.line, fact.column)
            seen_pairs.add(pair)
            facts.subclass_pairs.append(pair)
        elif sig == ("arc", 2):
            pair = (_ident(fact, 0), _ident(fact, 1))
            if pair in seen_arcs:
                warnings.warn(f"line {fact.line}: duplicate arc{pair} ignored", UnknownFactWarning)
                continue
            seen_arcs.add(pair)
            facts.arcs.append(pair)
        elif sig == ("prop", 4):
            owner, name = _ident(fact, 0), _ident(fact, 1)
            type_tag, mandatory = _ident(fact, 2), _ident(fact, 3)
            if type_tag not in TYPE_TAGS:
                raise FactError(
                    f"prop/4: type must be one of {', '.join(TYPE_TAGS)}, got {type_tag!r}",
                    fact.line,
                    fact.column,
                )
            if mandatory not in ("true", "false"):
                raise FactError(
                    f"prop/4: mandatory flag must be true or false, got {mandatory!r}",
                    fact.line,
                    fact.column,
                )
            if (owner, name) in seen_props:
                raise FactError(f"duplicate property {name!r} on {owner!r}", fact.line, fact.column)
            seen_props.add((owner, name))
            facts.property_specs.append(PropertyFact(owner, name, type_tag, mandatory == "true"))
        else:
            _warn_unknown(fact)
    return facts


def serialize_schema_facts(facts):
    lines = [f"entity({e})." for e in facts.entities]
    lines += [f"subclassOf({c}, {p})." for c, p in facts.subclass_pairs]
    lines += [f"arc({d}, {r})." for d, r in facts.arcs]
    lines += [
        f"prop({p.owner}, {p.name}, {p.type_tag}, {'true' if p.mandatory else 'false'})."
        for p in facts.property_specs
    ]
    return "".join(line + "\n" for line in lines)


# --------------------------------------------------------------------------
# instance files


def parse_instance_facts(text):
    """Parse instance facts.

    Both ``node(Id, Label).`` and the split ``node(Id). label(Id, Label).``
    encodings are accepted and normalized to ``(id, label)`` pairs, in order
    of node declaration. Neighbor lists keep their written order.

    Raises
    ------
    FactError
        On duplicate nodes, duplicate or conflicting labels, a ``node/1``
        without a label, a duplicate ``arcs`` fact, or an ``arcs``/``val``
        fact whose subject node is never declared.
    """
    declared = {}  # id -> (label or None, line, column), insertion-ordered
    labels = {}
    arcs = []
    arcs_seen = set()
    props = []
    for fact in _parse_terms(text):
        sig = (fact.name, len(fact.args))
        if sig == ("node", 2) or sig == ("node", 1):
            nid = _integer(fact, 0)
            if nid in declared:
                raise FactError(f"duplicate node {nid}", fact.line, fact.column)
            label = _ident(fact, 1) if sig == ("node", 2) else None
            declared[nid] = (label, fact.line, fact.column)
        elif sig == ("label", 2):
            nid, label = _integer(fact, 0), _ident(fact, 1)
            if nid in labels:
                raise FactError(f"node {nid} has more than one label", fact.line, fact.column)
            labels[nid] = (label, fact.line, fact.column)
        elif sig == ("arcs", 2):
            nid = _integer(fact, 0)
            if nid in arcs_seen:
                raise FactError(f"duplicate arcs fact for node {nid}", fact.line, fact.column)
            arcs_seen.add(nid)
            arcs.append((nid, _int_list(fact, 1), fact.line, fact.column))
        elif sig == ("val", 3):
            props.append((_integer(fact, 0), _ident(fact, 1), _value(fact, 2), fact.line, fact.column))
        else:
            _warn_unknown(fact)

    nodes = []
    for nid, (label, line, col) in declared.items():
        split = labels.pop(nid, None)
        if label is None:
            if split is None:
                raise FactError(f"node {nid} has no label", line, col)
            label = split[0]
        elif split is not None:
            raise FactError(f"node {nid} has more than one label", split[1], split[2])
        nodes.append((nid, label))
    for nid, (_, line, col) in labels.items():
        raise FactError(f"label for undeclared node {nid}", line, col)
    for nid, _, line, col in arcs:
        if nid not in declared:
            raise FactError(f"arcs fact for undeclared node {nid}", line, col)
    for nid, _, _, line, col in props:
        if nid not in declared:
            raise FactError(f"val fact for undeclared node {nid}", line, col)

    return InstanceFacts(
        nodes=nodes,
        arcs=[(nid, nbrs) for nid, nbrs, _, _ in arcs],
        node_properties=[(nid, name, value) for nid, name, value, _, _ in props],
    )


def _format_value(v):
    if isinstance(v, bool):
        raise TypeError("boolean property values are not representable")
    if isinstance(v, int):
        return str(v)
    escaped = str(v).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'


def serialize_instance_facts(facts):
    """Emit canonical ``node/2`` form; string values are always quoted."""
    lines = [f"node({nid}, {label})." for nid, label in facts.nodes]
    lines += [f"arcs({nid}, [{','.join(str(m) for m in nbrs)}])." for nid, nbrs in facts.arcs]
    lines += [f"val({nid}, {name}, {_format_value(v)})." for nid, name, v in facts.node_properties]
    return "".join(line + "\n" for line in lines)


def is_identifier(s):
    return bool(_IDENT_RE.match(s))
