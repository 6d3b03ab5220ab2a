"""Instance-vs-schema compliance checking.

Checked conditions, by tag:

``i``
    every node label is a schema entity
``ii``
    edge labels exist in the schema (vacuous: edges carry no labels)
``iii``
    every node property is declared, with a matching type, on the node's
    label or one of its ancestors
``iv``
    edge properties are declared (vacuous: edges carry no properties)
``v``
    every edge ``s -> o`` is licensed: ``label(o)`` is a lifted neighbor of
    ``label(s)``
``mandatory``
    every mandatory property inherited by a node's label has a value

Nodes with an unknown label are reported under ``i`` only; the checks that
depend on their label are skipped.
"""

from __future__ import annotations

import datetime
import re
from dataclasses import dataclass, field

__all__ = ["Violation", "ComplianceReport", "check_compliance", "value_matches_type", "VACUOUS"]

VACUOUS = ("ii", "iv")

_INT_RE = re.compile(r"-?[0-9]+\Z")


@dataclass(frozen=True)
class Violation:
    condition: str
    subject: str
    message: str

    def to_dict(self):
        return {"condition": self.condition, "subject": self.subject, "message": self.message}


@dataclass
class ComplianceReport:
    violations: list = field(default_factory=list)
    checked_vacuously: tuple = VACUOUS

    @property
    def compliant(self):
        return not self.violations

    def conditions(self):
        return {v.condition for v in self.violations}

    def to_dict(self):
        return {
            "compliant": self.compliant,
            "checked_vacuously": list(self.checked_vacuously),
            "violations": [v.to_dict() for v in self.violations],
        }


def value_matches_type(value, type_tag):
    if type_tag == "string":
        return True
    if type_tag == "int":
        if isinstance(value, bool):
            return False
        return isinstance(value, int) or bool(_INT_RE.match(str(value)))
    if type_tag == "date":
        if not isinstance(value, str):
            return False
        try:
            datetime.date.fromisoformat(value)
        except ValueError:
            return False
        return True
    raise ValueError(f"unknown type tag {type_tag!r}")


def check_compliance(graph, schema) -> ComplianceReport:
    """Check every condition over the whole graph; never stops early."""
    report = ComplianceReport()
    add = report.violations.append
    known = {}

    for n, rec in graph.nodes.items():
        ok = rec.label in schema
        known[n] = ok
        if not ok:
            add(Violation("i", f"node {n}", f"label {rec.label!r} is not a schema entity"))

    for n, rec in graph.nodes.items():
        if not known[n]:
            continue
        specs = {}
        for spec in schema.properties(rec.label):
            specs.setdefault(spec.name, spec)
        for key, value in rec.properties.items():
            spec = specs.get(key)
            if spec is None:
                add(Violation("iii", f"node {n}.{key}",
                              f"property {key!r} is not declared for {rec.label!r} or its ancestors"))
            elif not value_matches_type(value, spec.type_tag):
                add(Violation("iii", f"node {n}.{key}",
                              f"value {value!r} does not match type {spec.type_tag}"))

    for s, nbrs in graph.adjacency.items():
        if not known[s]:
            continue
        hs = schema.handle(graph.labels[s])
        allowed = schema.lifted(hs)
        for o in nbrs:
            if not known[o]:
                continue
            if schema.handle(graph.labels[o]) not in allowed:
                add(Violation("v", f"edge {s}->{o}",
                              f"no schema arc licenses {graph.labels[s]!r} -> {graph.labels[o]!r}"))

    for n, rec in graph.nodes.items():
        if not known[n]:
            continue
        seen = set()
        for spec in schema.properties(rec.label):
            if spec.name in seen:
                continue
            seen.add(spec.name)
            if spec.mandatory and rec.properties.get(spec.name) in (None, ""):
                add(Violation("mandatory", f"node {n}.{spec.name}",
                              f"mandatory property {spec.name!r} of {rec.label!r} is missing"))
    return report
