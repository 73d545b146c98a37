"""Forward-chaining materialization of ground consequences.

``saturate`` computes the least fixpoint of rules R1-R10 over the ontology's
assertions, keeping one derivation per fact for explanations, then scans the
closure for axiom violations (disjointness breaches, irreflexive loops,
asymmetry breaches, functional fan-out, unsatisfiable classes).  Violations
are collected as data, never raised.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

from .model import (
    Characteristic,
    ClassAssertion,
    DisjointClasses,
    DisjointUnion,
    EntityKind,
    EquivalentClasses,
    InverseObjectProperties,
    Name,
    ObjectPropertyAssertion,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    Ontology,
    PropertyCharacteristic,
    SubClassOf,
    SubObjectPropertyOf,
    UndeclaredEntity,
    UnionOf,
)


@dataclass(frozen=True)
class IsA:
    individual: Name
    cls: Name

    def __str__(self):
        return f"IsA({self.individual}, {self.cls})"


@dataclass(frozen=True)
class Rel:
    prop: Name
    subject: Name
    object: Name

    def __str__(self):
        return f"Rel({self.prop}, {self.subject}, {self.object})"


@dataclass(frozen=True)
class Sub:
    sub: Name
    sup: Name

    def __str__(self):
        return f"Sub({self.sub}, {self.sup})"


Fact = Union[IsA, Rel, Sub]


@dataclass(frozen=True)
class Derivation:
    fact: Fact
    rule: str  # "asserted" or R1..R10 (R3b for equivalence-union members)
    premises: tuple


@dataclass(frozen=True)
class Violation:
    kind: str
    involved: tuple
    witnesses: tuple


@dataclass(frozen=True)
class InferredStore:
    ontology: Ontology
    facts: frozenset
    derivations: dict
    violations: tuple
    disjoint_pairs: frozenset  # of (Name, Name), sorted pairs


class UnknownFact(Exception):
    pass


class _Engine:
    def __init__(self, o: Ontology, domain_range: bool = True):
        self.o = o
        self.domain_range = domain_range
        self.facts: set = set()
        self.derivations: dict = {}
        self.queue: deque = deque()
        # indexes
        self.subs_of: dict = {}    # A -> {B : Sub(A,B)}
        self.sups_of: dict = {}    # B -> {A : Sub(A,B)}
        self.isa_by_ind: dict = {} # a -> {C}
        self.isa_by_cls: dict = {} # C -> {a}
        self.rel_out: dict = {}    # (p, a) -> {b}
        self.rel_in: dict = {}     # (p, b) -> {a}
        # property metadata
        self.domain: dict = {}
        self.range: dict = {}
        self.inverse: dict = {}
        self.superprops: dict = {}
        self.symmetric: set = set()
        self.transitive: set = set()
        self.irreflexive: set = set()
        self.asymmetric: set = set()
        self.functional: set = set()
        self.inverse_functional: set = set()
        self.disjoint_pairs: set = set()

    def _pair(self, a: Name, b: Name):
        return (a, b) if a <= b else (b, a)

    def add(self, fact: Fact, rule: str, premises: tuple = ()):
        if fact in self.facts:
            return
        self.facts.add(fact)
        self.derivations[fact] = Derivation(fact, rule, premises)
        self.queue.append(fact)
        if isinstance(fact, Sub):
            self.subs_of.setdefault(fact.sub, set()).add(fact.sup)
            self.sups_of.setdefault(fact.sup, set()).add(fact.sub)
        elif isinstance(fact, IsA):
            self.isa_by_ind.setdefault(fact.individual, set()).add(fact.cls)
            self.isa_by_cls.setdefault(fact.cls, set()).add(fact.individual)
        else:
            self.rel_out.setdefault((fact.prop, fact.subject), set()).add(fact.object)
            self.rel_in.setdefault((fact.prop, fact.object), set()).add(fact.subject)

    def seed(self):
        o = self.o
        for ax in o.axioms:
            if isinstance(ax, ObjectPropertyDomain) and isinstance(ax.cls, Name):
                self.domain[ax.prop] = ax.cls
            elif isinstance(ax, ObjectPropertyRange) and isinstance(ax.cls, Name):
                self.range[ax.prop] = ax.cls
            elif isinstance(ax, InverseObjectProperties):
                self.inverse.setdefault(ax.a, set()).add(ax.b)
                self.inverse.setdefault(ax.b, set()).add(ax.a)
            elif isinstance(ax, SubObjectPropertyOf):
                self.superprops.setdefault(ax.sub, set()).add(ax.sup)
            elif isinstance(ax, PropertyCharacteristic):
                {
                    Characteristic.SYMMETRIC: self.symmetric,
                    Characteristic.TRANSITIVE: self.transitive,
                    Characteristic.IRREFLEXIVE: self.irreflexive,
                    Characteristic.ASYMMETRIC: self.asymmetric,
                    Characteristic.FUNCTIONAL: self.functional,
                    Characteristic.INVERSE_FUNCTIONAL: self.inverse_functional,
                }[ax.characteristic].add(ax.prop)
            elif isinstance(ax, DisjointClasses):
                for i, c in enumerate(ax.classes):
                    for d in ax.classes[i + 1:]:
                        self.disjoint_pairs.add(self._pair(c, d))
        for ax in o.axioms:
            if isinstance(ax, SubClassOf):
                if isinstance(ax.sup, Name):
                    # a union on the left means every member is subsumed
                    for sub in (ax.sub,) if isinstance(ax.sub, Name) else ax.sub.members:
                        if sub != ax.sup:
                            self.add(Sub(sub, ax.sup), "asserted")
                # named-to-union subsumption is disjunctive: no ground consequence
            elif isinstance(ax, EquivalentClasses):
                a, b = ax.a, ax.b
                if isinstance(a, Name) and isinstance(b, Name):
                    self.add(Sub(a, b), "R2")
                    self.add(Sub(b, a), "R2")
                elif isinstance(a, Name) and isinstance(b, UnionOf):
                    for m in b.members:
                        if m != a:
                            self.add(Sub(m, a), "R3b")
                elif isinstance(b, Name) and isinstance(a, UnionOf):
                    for m in a.members:
                        if m != b:
                            self.add(Sub(m, b), "R3b")
            elif isinstance(ax, DisjointUnion):
                for i, p in enumerate(ax.parts):
                    if p != ax.whole:
                        self.add(Sub(p, ax.whole), "R3")
                    for q in ax.parts[i + 1:]:
                        self.disjoint_pairs.add(self._pair(p, q))
            elif isinstance(ax, ClassAssertion):
                if isinstance(ax.cls, Name):
                    self.add(IsA(ax.individual, ax.cls), "asserted")
                # union membership is disjunctive: no ground consequence
            elif isinstance(ax, ObjectPropertyAssertion):
                self.add(Rel(ax.prop, ax.subject, ax.object), "asserted")

    def run(self):
        while self.queue:
            fact = self.queue.popleft()
            if isinstance(fact, Sub):
                self._fire_sub(fact)
            elif isinstance(fact, IsA):
                self._fire_isa(fact)
            else:
                self._fire_rel(fact)

    def _fire_sub(self, f: Sub):
        # R1: transitivity, both directions of the join
        for x in sorted(self.sups_of.get(f.sub, ())):
            if x != f.sup:
                self.add(Sub(x, f.sup), "R1", (Sub(x, f.sub), f))
        for y in sorted(self.subs_of.get(f.sup, ())):
            if y != f.sub:
                self.add(Sub(f.sub, y), "R1", (f, Sub(f.sup, y)))
        # R4 with existing memberships
        for a in sorted(self.isa_by_cls.get(f.sub, ())):
            self.add(IsA(a, f.sup), "R4", (IsA(a, f.sub), f))

    def _fire_isa(self, f: IsA):
        # R4 with existing subsumptions
        for b in sorted(self.subs_of.get(f.cls, ())):
            self.add(IsA(f.individual, b), "R4", (f, Sub(f.cls, b)))

    def _fire_rel(self, f: Rel):
        p, a, b = f.prop, f.subject, f.object
        if self.domain_range:
            dom = self.domain.get(p)
            if dom is not None:
                self.add(IsA(a, dom), "R5", (f,))
            rng = self.range.get(p)
            if rng is not None:
                self.add(IsA(b, rng), "R6", (f,))
        for q in sorted(self.inverse.get(p, ())):
            self.add(Rel(q, b, a), "R7", (f,))
        if p in self.symmetric:
            self.add(Rel(p, b, a), "R8", (f,))
        if p in self.transitive:
            for c in sorted(self.rel_out.get((p, b), ())):
                self.add(Rel(p, a, c), "R9", (f, Rel(p, b, c)))
            for x in sorted(self.rel_in.get((p, a), ())):
                self.add(Rel(p, x, b), "R9", (Rel(p, x, a), f))
        for q in sorted(self.superprops.get(p, ())):
            self.add(Rel(q, a, b), "R10", (f,))

    # -- violation scan (after fixpoint) --

    def collect_violations(self) -> list:
        violations = []
        for c, d in sorted(self.disjoint_pairs):
            both = self.isa_by_cls.get(c, set()) & self.isa_by_cls.get(d, set())
            for a in sorted(both):
                violations.append(Violation(
                    "DisjointMembership", (a, c, d),
                    (IsA(a, c), IsA(a, d))))
        for p in sorted(self.irreflexive):
            for (prop, a), objs in sorted(self.rel_out.items()):
                if prop == p and a in objs:
                    violations.append(Violation(
                        "IrreflexiveLoop", (p, a), (Rel(p, a, a),)))
        for p in sorted(self.asymmetric):
            seen = set()
            for (prop, a), objs in sorted(self.rel_out.items()):
                if prop != p:
                    continue
                for b in sorted(objs):
                    if a != b and a in self.rel_out.get((p, b), ()):
                        key = self._pair(a, b)
                        if key not in seen:
                            seen.add(key)
                            violations.append(Violation(
                                "AsymmetryBreach", (p,) + key,
                                (Rel(p, key[0], key[1]), Rel(p, key[1], key[0]))))
        for p in sorted(self.functional):
            for (prop, a), objs in sorted(self.rel_out.items()):
                if prop == p and len(objs) > 1:
                    targets = tuple(sorted(objs))
                    violations.append(Violation(
                        "FunctionalFanout", (p, a) + targets,
                        tuple(Rel(p, a, b) for b in targets)))
        for p in sorted(self.inverse_functional):
            for (prop, b), subjs in sorted(self.rel_in.items()):
                if prop == p and len(subjs) > 1:
                    sources = tuple(sorted(subjs))
                    violations.append(Violation(
                        "FunctionalFanout", (p, b) + sources,
                        tuple(Rel(p, a, b) for a in sources)))
        for c, d in sorted(self.disjoint_pairs):
            unsat = self.sups_of.get(c, set()) & self.sups_of.get(d, set())
            for x in sorted(unsat):
                violations.append(Violation(
                    "UnsatisfiableClass", (x, c, d),
                    (Sub(x, c), Sub(x, d))))
        return violations


def saturate(o: Ontology, strict: bool = False) -> InferredStore:
    """Materialize the rule closure and scan it for violations.

    With ``strict`` set, any domain/range-derived membership that is not
    already entailed without R5/R6 is additionally reported as a
    ``StrictDomainRange`` violation (closed-world reading of the constraint).
    """
    engine = _Engine(o)
    engine.seed()
    engine.run()
    violations = engine.collect_violations()
    if strict:
        base = _Engine(o, domain_range=False)
        base.seed()
        base.run()
        for fact in sorted(engine.facts, key=str):
            der = engine.derivations[fact]
            if der.rule in ("R5", "R6") and fact not in base.facts:
                violations.append(Violation(
                    "StrictDomainRange",
                    (fact.individual, fact.cls),
                    der.premises + (fact,)))
    violations.sort(key=lambda v: (v.kind, tuple(map(str, v.involved))))
    return InferredStore(
        ontology=o,
        facts=frozenset(engine.facts),
        derivations=engine.derivations,
        violations=tuple(violations),
        disjoint_pairs=frozenset(engine.disjoint_pairs),
    )


def instances_of(store: InferredStore, c: Name) -> frozenset:
    """All asserted or derived members of class ``c``."""
    if not store.ontology.is_declared(c, EntityKind.CLASS):
        raise UndeclaredEntity(f"{c} is not a declared class")
    return frozenset(
        f.individual for f in store.facts
        if isinstance(f, IsA) and f.cls == c
    )


@dataclass(frozen=True)
class ExplanationNode:
    fact: Fact
    rule: str
    premises: tuple

    def leaves(self):
        if not self.premises:
            return (self,)
        out = []
        for p in self.premises:
            out.extend(p.leaves())
        return tuple(out)


def explain(store: InferredStore, fact: Fact) -> ExplanationNode:
    """Derivation tree for ``fact``; leaves carry no premises."""
    if fact not in store.facts:
        raise UnknownFact(str(fact))
    der = store.derivations[fact]
    return ExplanationNode(
        fact, der.rule,
        tuple(explain(store, p) for p in der.premises))


@dataclass(frozen=True)
class Taxonomy:
    """Direct sub/superclass structure from the transitive reduction."""

    direct_supers: dict
    direct_subs: dict
    merged_groups: tuple  # equivalence cycles, each a frozenset of >=2 names


def classify(store: InferredStore) -> Taxonomy:
    classes = sorted(store.ontology.names_of_kind(EntityKind.CLASS))
    subs = {c: set() for c in classes}
    for f in store.facts:
        if isinstance(f, Sub) and f.sub in subs and f.sup in subs:
            subs[f.sub].add(f.sup)
    # merge mutually subsuming classes into one node
    group_of = {}
    groups = []
    for c in classes:
        if c in group_of:
            continue
        group = {c} | {d for d in subs[c] if c in subs.get(d, ())}
        for m in group:
            group_of[m] = frozenset(group)
        groups.append(frozenset(group))
    rep = {g: min(g) for g in groups}
    edges = {rep[g]: set() for g in groups}
    for c in classes:
        for d in subs[c]:
            a, b = rep[group_of[c]], rep[group_of[d]]
            if a != b:
                edges[a].add(b)
    # transitive reduction on the group DAG
    def reachable(x, y):
        stack, seen = [x], set()
        while stack:
            z = stack.pop()
            if z == y:
                return True
            if z in seen:
                continue
            seen.add(z)
            stack.extend(edges[z])
        return False

    direct = {}
    for a, sups in edges.items():
        direct[a] = {b for b in sups
                     if not any(c != b and reachable(c, b) for c in sups)}
    direct_supers = {}
    direct_subs = {c: set() for c in classes}
    for c in classes:
        g = rep[group_of[c]]
        direct_supers[c] = frozenset().union(
            *[group_of[hrep] for hrep in direct[g]]) if direct[g] else frozenset()
    for c in classes:
        for s in direct_supers[c]:
            direct_subs[s].add(c)
    return Taxonomy(
        direct_supers=direct_supers,
        direct_subs={c: frozenset(v) for c, v in direct_subs.items()},
        merged_groups=tuple(sorted((g for g in groups if len(g) > 1),
                                   key=sorted)),
    )
