"""Collapsed Gibbs samplers: plain LDA and the Dirichlet-forest variant.

Both samplers share one kernel so that with a flat forest (no constraints)
they consume randomness identically and produce bit-identical assignments.
The RNG is numpy's PCG64 (a permuted-congruential generator); the seed fully
determines every assignment and branch choice.  Changing the generator is a
breaking change.

Token step: p(z_i = k) is proportional to (alpha + n_dk) times the product,
over internal nodes on the root-to-leaf path of the word in topic k's
selected tree, of (gamma_child + n_child) / sum_children (gamma + n).  With
a flat tree this collapses to (beta + n_kw) / (V*beta + n_k).  Once per
sweep each (topic, region) resamples its branch from the Dirichlet
multinomial marginal of the region's counts under each candidate branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, exp
from typing import Optional

import numpy as np

from .corpus import Corpus
from .forest import DirichletForest, flat_forest


class InvalidHyperparameter(Exception):
    pass


class ForestVocabMismatch(Exception):
    pass


@dataclass
class TopicModelState:
    K: int
    alpha: float
    beta: float
    z: list                 # per doc: list of topic ids
    n_dk: list              # doc x topic counts
    n_kw: list              # topic x word counts
    n_k: list               # per-topic totals
    seed: int
    iters: int
    forest: Optional[DirichletForest] = None
    q: Optional[list] = None        # topic x region branch selections
    n_comp: Optional[list] = None   # topic x component counts
    n_region: Optional[list] = None # topic x region counts


class _TreeIndex:
    """Static sampling structure derived from a DirichletForest."""

    def __init__(self, forest: DirichletForest):
        self.forest = forest
        beta, eta, eps = forest.beta, forest.eta, forest.epsilon
        self.eta_beta = eta * beta
        self.eps_beta = eps * beta
        self.comp_size = [len(c) for c in forest.components]
        # word -> ("free",) | ("ml", comp) | ("region", r, comp)
        self.role = [("free",)] * forest.vocab_size
        region_of_comp = {}
        for r, region in enumerate(forest.regions):
            for m in region.component_ids:
                region_of_comp[m] = r
        for m, comp in enumerate(forest.components):
            r = region_of_comp.get(m)
            for w in comp:
                self.role[w] = ("ml", m) if r is None else ("region", r, m)
        # per region: root edge weight (constant across branches) and per
        # branch the gamma total of the branch root's children
        self.region_gamma = [beta * len(reg.words) for reg in forest.regions]
        self.branch_gamma = []
        self.branch_members = []  # per region, per branch: set of comp ids
        for r, region in enumerate(forest.regions):
            gammas, members = [], []
            total_words = len(region.words)
            for clique in region.cliques:
                in_words = sum(len(forest.components[m]) for m in clique)
                gammas.append(beta * in_words
                              + self.eps_beta * (total_words - in_words))
                members.append(frozenset(clique))
            self.branch_gamma.append(gammas)
            self.branch_members.append(members)


def _validate(corpus: Corpus, K, alpha, beta, iters):
    if K < 1:
        raise InvalidHyperparameter("K must be >= 1")
    if alpha <= 0 or beta <= 0:
        raise InvalidHyperparameter("alpha and beta must be positive")
    if iters < 1:
        raise InvalidHyperparameter("iters must be >= 1")


def lda_gibbs(corpus: Corpus, K: int, alpha: float, beta: float,
              iters: int, seed: int) -> TopicModelState:
    """Plain collapsed Gibbs LDA; exactly ``iters`` full sweeps."""
    _validate(corpus, K, alpha, beta, iters)
    return _run(corpus, None, K, alpha, beta, iters, seed)


def dflda_gibbs(corpus: Corpus, forest: DirichletForest, K: int, alpha: float,
                iters: int, seed: int) -> TopicModelState:
    """Dirichlet-forest collapsed Gibbs; beta comes from the forest."""
    _validate(corpus, K, alpha, forest.beta, iters)
    if forest.vocab_size != len(corpus.vocabulary):
        raise ForestVocabMismatch(
            f"forest built for {forest.vocab_size} words, corpus has "
            f"{len(corpus.vocabulary)}")
    if forest.is_flat:
        # exact algebraic reduction; also keeps the randomness stream
        # identical to lda_gibbs
        state = _run(corpus, None, K, alpha, forest.beta, iters, seed)
        state.forest = forest
        return state
    return _run(corpus, forest, K, alpha, forest.beta, iters, seed)


def _run(corpus, forest, K, alpha, beta, iters, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    V = len(corpus.vocabulary)
    docs = corpus.documents
    D = len(docs)
    tree = _TreeIndex(forest) if forest is not None else None
    n_regions = len(forest.regions) if forest is not None else 0
    n_comps = len(forest.components) if forest is not None else 0

    z = [[0] * len(doc) for doc in docs]
    n_dk = [[0] * K for _ in range(D)]
    n_kw = [[0] * V for _ in range(K)]
    n_k = [0] * K
    n_comp = [[0] * n_comps for _ in range(K)]
    n_region = [[0] * n_regions for _ in range(K)]
    q = [[0] * n_regions for _ in range(K)]

    for d, doc in enumerate(docs):
        zd = z[d]
        for i, w in enumerate(doc):
            k = int(rng.integers(K))
            zd[i] = k
            n_dk[d][k] += 1
            n_kw[k][w] += 1
            n_k[k] += 1
            if tree is not None:
                role = tree.role[w]
                if role[0] == "ml":
                    n_comp[k][role[1]] += 1
                elif role[0] == "region":
                    n_comp[k][role[2]] += 1
                    n_region[k][role[1]] += 1

    vbeta = V * beta
    weights = [0.0] * K

    for _ in range(iters):
        for d, doc in enumerate(docs):
            zd = z[d]
            ndk = n_dk[d]
            for i, w in enumerate(doc):
                k_old = zd[i]
                ndk[k_old] -= 1
                n_kw[k_old][w] -= 1
                n_k[k_old] -= 1
                if tree is None:
                    total = 0.0
                    for k in range(K):
                        total += (alpha + ndk[k]) * (beta + n_kw[k][w]) \
                            / (vbeta + n_k[k])
                        weights[k] = total
                else:
                    role = tree.role[w]
                    if role[0] == "ml":
                        n_comp[k_old][role[1]] -= 1
                    elif role[0] == "region":
                        n_comp[k_old][role[2]] -= 1
                        n_region[k_old][role[1]] -= 1
                    total = 0.0
                    for k in range(K):
                        total += (alpha + ndk[k]) * _path_prob(
                            tree, role, w, beta, vbeta,
                            n_kw[k], n_k[k], n_comp[k], n_region[k], q[k])
                        weights[k] = total
                    role_new = role
                u = rng.random() * total
                k_new = K - 1
                for k in range(K):
                    if u < weights[k]:
                        k_new = k
                        break
                zd[i] = k_new
                ndk[k_new] += 1
                n_kw[k_new][w] += 1
                n_k[k_new] += 1
                if tree is not None:
                    if role_new[0] == "ml":
                        n_comp[k_new][role_new[1]] += 1
                    elif role_new[0] == "region":
                        n_comp[k_new][role_new[2]] += 1
                        n_region[k_new][role_new[1]] += 1
        if tree is not None:
            for k in range(K):
                for r in range(n_regions):
                    q[k][r] = _sample_branch(tree, r, n_kw[k], n_comp[k], rng)

    return TopicModelState(
        K=K, alpha=alpha, beta=beta, z=z, n_dk=n_dk, n_kw=n_kw, n_k=n_k,
        seed=seed, iters=iters, forest=forest,
        q=q if forest is not None else None,
        n_comp=n_comp if forest is not None else None,
        n_region=n_region if forest is not None else None)


def _path_prob(tree, role, w, beta, vbeta, nkw, nk, ncomp, nregion, qk):
    """Posterior word weight for one topic: product along the tree path."""
    forest = tree.forest
    root_den = vbeta + nk
    if role[0] == "free":
        return (beta + nkw[w]) / root_den
    if role[0] == "ml":
        m = role[1]
        size = tree.comp_size[m]
        return ((size * beta + ncomp[m]) / root_den
                * (tree.eta_beta + nkw[w])
                / (size * tree.eta_beta + ncomp[m]))
    r, m = role[1], role[2]
    p = (tree.region_gamma[r] + nregion[r]) / root_den
    j = qk[r]
    den = tree.branch_gamma[r][j] + nregion[r]
    if m in tree.branch_members[r][j]:
        size = tree.comp_size[m]
        if size == 1:
            return p * (beta + nkw[w]) / den
        return (p * (size * beta + ncomp[m]) / den
                * (tree.eta_beta + nkw[w])
                / (size * tree.eta_beta + ncomp[m]))
    return p * (tree.eps_beta + nkw[w]) / den


def _branch_log_score(tree, r, j, nkw, ncomp):
    """Dirichlet-multinomial marginal of one candidate branch (log)."""
    forest = tree.forest
    region = forest.regions[r]
    beta = forest.beta
    members = tree.branch_members[r][j]
    gamma_sum = 0.0
    n_sum = 0
    score = 0.0
    for m in region.component_ids:
        comp = forest.components[m]
        if m in members:
            g = len(comp) * beta
            n = ncomp[m]
            score += lgamma(g + n) - lgamma(g)
            gamma_sum += g
            n_sum += n
            if len(comp) > 1:
                # internal must-link node below the branch root
                gsub = tree.eta_beta
                sub_gamma = sub_n = 0.0
                for w in comp:
                    score += lgamma(gsub + nkw[w]) - lgamma(gsub)
                    sub_gamma += gsub
                    sub_n += nkw[w]
                score += lgamma(sub_gamma) - lgamma(sub_gamma + sub_n)
        else:
            for w in comp:
                g = tree.eps_beta
                n = nkw[w]
                score += lgamma(g + n) - lgamma(g)
                gamma_sum += g
                n_sum += n
    score += lgamma(gamma_sum) - lgamma(gamma_sum + n_sum)
    return score


def _sample_branch(tree, r, nkw, ncomp, rng):
    cliques = tree.forest.regions[r].cliques
    if len(cliques) == 1:
        return 0
    scores = [_branch_log_score(tree, r, j, nkw, ncomp)
              for j in range(len(cliques))]
    mx = max(scores)
    probs = [exp(s - mx) for s in scores]
    total = sum(probs)
    u = rng.random() * total
    acc = 0.0
    for j, p in enumerate(probs):
        acc += p
        if u < acc:
            return j
    return len(cliques) - 1


def sample_branch(forest: DirichletForest, region: int, topic_word_counts,
                  rng) -> int:
    """Resample one region's branch for fixed per-word topic counts."""
    tree = _TreeIndex(forest)
    ncomp = [0] * len(forest.components)
    for m, comp in enumerate(forest.components):
        ncomp[m] = sum(topic_word_counts[w] for w in comp)
    return _sample_branch(tree, region, topic_word_counts, ncomp, rng)


# --- posterior summaries ----------------------------------------------------


def phi_matrix(state: TopicModelState):
    """Posterior-mean word distributions, one row per topic."""
    V = len(state.n_kw[0])
    beta = state.beta
    vbeta = V * beta
    forest = state.forest
    if forest is None or forest.is_flat:
        return [[(beta + state.n_kw[k][w]) / (vbeta + state.n_k[k])
                 for w in range(V)] for k in range(state.K)]
    tree = _TreeIndex(forest)
    return [[_path_prob(tree, tree.role[w], w, beta, vbeta,
                        state.n_kw[k], state.n_k[k], state.n_comp[k],
                        state.n_region[k], state.q[k])
             for w in range(V)] for k in range(state.K)]


def top_words(state: TopicModelState, corpus: Corpus, n: int):
    """Per-topic ranked (word, probability) lists; ties break by word id."""
    if n < 1:
        raise ValueError("n must be >= 1")
    phi = phi_matrix(state)
    out = []
    for k in range(state.K):
        ranked = sorted(range(len(corpus.vocabulary)),
                        key=lambda w: (-phi[k][w], w))[:n]
        out.append([(corpus.vocabulary[w], phi[k][w]) for w in ranked])
    return out


def tag_topics(state: TopicModelState, corpus: Corpus, lexicon: dict,
               n: int = 10):
    """Rank ontology concepts against each topic's top words.

    score(concept, topic) = sum of phi over the concept tokens that appear
    in the topic's top-n words, normalized by the concept's token count.
    """
    phi = phi_matrix(state)
    index = corpus.vocab_index
    tops = top_words(state, corpus, n)
    out = []
    for k in range(state.K):
        topn = {w for w, _ in tops[k]}
        scored = []
        for concept in sorted(lexicon, key=str):
            tokens = lexicon[concept]
            hit = [t for t in tokens if t in topn]
            if not hit:
                continue
            score = sum(phi[k][index[t]] for t in hit) / len(tokens)
            scored.append((concept, score))
        scored.sort(key=lambda cs: (-cs[1], str(cs[0])))
        out.append(scored)
    return out


def log_likelihood(state: TopicModelState, corpus: Corpus) -> float:
    """Joint log p(w, z) under the current counts (flat or tree form)."""
    K, alpha, beta = state.K, state.alpha, state.beta
    V = len(corpus.vocabulary)
    total = 0.0
    for d, doc in enumerate(corpus.documents):
        total += lgamma(K * alpha) - lgamma(K * alpha + len(doc))
        for k in range(K):
            total += lgamma(alpha + state.n_dk[d][k]) - lgamma(alpha)
    forest = state.forest
    if forest is None or forest.is_flat:
        for k in range(K):
            total += lgamma(V * beta) - lgamma(V * beta + state.n_k[k])
            row = state.n_kw[k]
            for w in range(V):
                if row[w]:
                    total += lgamma(beta + row[w]) - lgamma(beta)
        return total
    tree = _TreeIndex(forest)
    for k in range(K):
        total += _tree_log_marginal(tree, state, k, beta, V)
    return total


def _tree_log_marginal(tree, state, k, beta, V):
    forest = tree.forest
    nkw, ncomp, nregion = state.n_kw[k], state.n_comp[k], state.n_region[k]
    in_structure = set()
    for comp in forest.components:
        in_structure.update(comp)
    # root node
    gamma_sum = n_sum = 0.0
    score = 0.0
    for w in range(V):
        if w not in in_structure:
            score += lgamma(beta + nkw[w]) - lgamma(beta)
            gamma_sum += beta
            n_sum += nkw[w]
    region_comp = set()
    for region in forest.regions:
        region_comp.update(region.component_ids)
    for m, comp in enumerate(forest.components):
        if m in region_comp:
            continue
        g = len(comp) * beta
        score += lgamma(g + ncomp[m]) - lgamma(g)
        gamma_sum += g
        n_sum += ncomp[m]
        # must-link node
        sub_gamma = sub_n = 0.0
        for w in comp:
            score += lgamma(tree.eta_beta + nkw[w]) - lgamma(tree.eta_beta)
            sub_gamma += tree.eta_beta
            sub_n += nkw[w]
        score += lgamma(sub_gamma) - lgamma(sub_gamma + sub_n)
    for r in range(len(forest.regions)):
        g = tree.region_gamma[r]
        score += lgamma(g + nregion[r]) - lgamma(g)
        gamma_sum += g
        n_sum += nregion[r]
        score += _branch_log_score(tree, r, state.q[k][r], nkw, ncomp)
    score += lgamma(gamma_sum) - lgamma(gamma_sum + n_sum)
    return score
