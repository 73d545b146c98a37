#!/usr/bin/env python3
"""Count ontology metrics straight off the text of a functional-syntax file.

Independent of the package: plain line scanning and regexes, no parsing.
Assumes the canonical layout (one axiom per line, comments start the line
with ``#``).  Prints the same two-column report as ``ontomap metrics`` so
the two can be compared field for field.
"""

import re
import sys

LOGICAL_TYPES = [
    "SubClassOf",
    "EquivalentClasses",
    "DisjointClasses",
    "DisjointUnion",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "DataPropertyDomain",
    "DataPropertyRange",
    "SubObjectPropertyOf",
    "InverseObjectProperties",
    "SymmetricObjectProperty",
    "AsymmetricObjectProperty",
    "TransitiveObjectProperty",
    "IrreflexiveObjectProperty",
    "FunctionalObjectProperty",
    "InverseFunctionalObjectProperty",
    "ClassAssertion",
    "ObjectPropertyAssertion",
    "DataPropertyAssertion",
]

DECL_KINDS = ["Class", "ObjectProperty", "DataProperty", "NamedIndividual"]


def main(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh
                 if ln.strip() and not ln.lstrip().startswith("#")]

    decls = {kind: set() for kind in DECL_KINDS}
    decl_re = re.compile(
        r"^Declaration\(\s*(Class|ObjectProperty|DataProperty|NamedIndividual)"
        r"\(\s*([^)\s]+)\s*\)\s*\)")
    logical = {t: 0 for t in LOGICAL_TYPES}
    annotations = 0
    for ln in lines:
        m = decl_re.match(ln)
        if m:
            decls[m.group(1)].add(m.group(2))
            continue
        if ln.startswith("AnnotationAssertion("):
            annotations += 1
            continue
        for t in LOGICAL_TYPES:
            if ln.startswith(t + "("):
                logical[t] += 1
                break

    n_logical = sum(logical.values())
    n_decl = sum(len(s) for s in decls.values())

    body = "\n".join(lines)
    expressivity = "S"
    if re.search(r"\b(Irreflexive|Asymmetric)ObjectProperty\(", body) or \
            re.search(r"\bSubObjectPropertyOf\(", body):
        expressivity += "R"
    if re.search(r"\bInverseObjectProperties\(", body):
        expressivity += "I"
    if re.search(r"\b(InverseFunctional|Functional)ObjectProperty\(", body):
        expressivity += "F"
    if decls["DataProperty"]:
        expressivity += "(D)"

    rows = [
        ("Axiom", n_logical + n_decl + annotations),
        ("Logical axiom count", n_logical),
        ("Declaration axioms count", n_decl),
        ("Annotation axiom count", annotations),
        ("Class count", len(decls["Class"])),
        ("Object property count", len(decls["ObjectProperty"])),
        ("Data property count", len(decls["DataProperty"])),
        ("Individual count", len(decls["NamedIndividual"])),
        ("DL expressivity", expressivity),
    ]
    rows.extend((t, logical[t]) for t in LOGICAL_TYPES)
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        print(f"{key:<{width}}  {value}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        print("usage: count_ofn.py ONTOLOGY.ofn", file=sys.stderr)
        raise SystemExit(2)
    main(sys.argv[1])
