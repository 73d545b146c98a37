"""Dirichlet forest prior encoding must-link / cannot-link constraints.

Must-link closure components share a high-weight internal node (root edge
``|M| * beta``, leaf edges ``eta * beta``).  Components connected by
cannot-links form regions; each maximal clique of the region's complement
graph yields one candidate branch per topic, with out-of-clique words
attached directly under the branch root at the suppressed weight
``epsilon * beta``.  Unconstrained words sit under the global root with
weight ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constraints import ConstraintSet, _must_closure


class TooManyCliques(Exception):
    pass


class ConflictingConstraints(Exception):
    pass


@dataclass(frozen=True)
class Region:
    """Connected group of components with at least one cannot-link edge."""

    component_ids: tuple      # indices into DirichletForest.components
    words: tuple              # all word ids in the region, sorted
    cliques: tuple            # per branch: tuple of component ids


@dataclass(frozen=True)
class DirichletForest:
    vocab_size: int
    beta: float
    eta: float
    epsilon: float
    components: tuple         # tuples of word ids; multi-word or in-region
    regions: tuple            # of Region

    @property
    def is_flat(self) -> bool:
        return not self.components and not self.regions

    def component_of(self) -> dict:
        out = {}
        for i, comp in enumerate(self.components):
            for w in comp:
                out[w] = i
        return out


def maximal_cliques(n: int, edges: set) -> list:
    """Deterministic Bron-Kerbosch with pivoting over vertices 0..n-1.

    ``edges`` holds undirected pairs (a, b), a < b.  Cliques come out sorted,
    in lexicographic order.
    """
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    cliques = []

    def expand(r, p, x):
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            return
        pivot = max(sorted(p | x), key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(n)), set())
    return sorted(cliques)


def build_forest(cs: ConstraintSet, vocabulary, beta: float = 0.01,
                 eta: float = 100.0, epsilon: float = 1e-6,
                 max_cliques: int = 128) -> DirichletForest:
    if beta <= 0:
        raise ValueError("beta must be positive")
    if eta < 1:
        raise ValueError("eta must be >= 1")
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    n_words = len(vocabulary)

    # (1) must-link closure components
    find = _must_closure(cs.must_links, n_words)
    members: dict = {}
    for w in range(n_words):
        members.setdefault(find(w), []).append(w)
    comp_words = sorted(tuple(ws) for ws in members.values() if len(ws) > 1)
    comp_of_word = {}
    for i, comp in enumerate(comp_words):
        for w in comp:
            comp_of_word[w] = i

    # (2) cannot-link graph over components (singletons materialized lazily)
    def comp_key(w):
        return ("m", comp_of_word[w]) if w in comp_of_word else ("s", w)

    cl_edges = set()
    for a, b in cs.cannot_links:
        ka, kb = comp_key(a), comp_key(b)
        if ka == kb:
            raise ConflictingConstraints(
                f"cannot-link inside a must-link component: "
                f"{vocabulary[a]}/{vocabulary[b]}")
        cl_edges.add(tuple(sorted((ka, kb))))

    # connected components of the cannot-link graph = regions
    nbrs: dict = {}
    for ka, kb in cl_edges:
        nbrs.setdefault(ka, set()).add(kb)
        nbrs.setdefault(kb, set()).add(ka)
    seen = set()
    region_keys = []
    for k in sorted(nbrs):
        if k in seen:
            continue
        stack, group = [k], set()
        while stack:
            u = stack.pop()
            if u in group:
                continue
            group.add(u)
            stack.extend(nbrs[u])
        seen |= group
        region_keys.append(sorted(group))

    components = list(comp_words)
    comp_index = {("m", i): i for i in range(len(comp_words))}

    def materialize(key):
        if key in comp_index:
            return comp_index[key]
        assert key[0] == "s"
        comp_index[key] = len(components)
        components.append((key[1],))
        return comp_index[key]

    regions = []
    for keys in region_keys:
        ids = [materialize(k) for k in keys]
        local = {k: j for j, k in enumerate(keys)}
        # complement graph of the cannot-link edges within the region
        forbidden = {tuple(sorted((local[a], local[b]))) for a, b in cl_edges
                     if a in local and b in local}
        comp_edges = {(i, j) for i in range(len(keys))
                      for j in range(i + 1, len(keys))
                      if (i, j) not in forbidden}
        cliques = maximal_cliques(len(keys), comp_edges)
        if len(cliques) > max_cliques:
            raise TooManyCliques(
                f"region has {len(cliques)} branches (> {max_cliques}); "
                f"thin the constraint set")
        words = sorted(w for k in keys for w in components[comp_index[k]])
        regions.append(Region(
            component_ids=tuple(ids),
            words=tuple(words),
            cliques=tuple(tuple(ids[j] for j in cl) for cl in cliques),
        ))

    return DirichletForest(
        vocab_size=n_words,
        beta=beta,
        eta=eta,
        epsilon=epsilon,
        components=tuple(components),
        regions=tuple(regions),
    )


def flat_forest(vocab_size: int, beta: float) -> DirichletForest:
    """Degenerate forest: every word directly under the root with weight beta."""
    return DirichletForest(vocab_size=vocab_size, beta=beta, eta=1.0,
                           epsilon=1.0, components=(), regions=())
