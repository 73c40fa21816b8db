"""Tensor products of trees as unions of shuffles.

A shuffle of trees S and T is a maximal interleaving: a tree whose edges
are pairs (edge of S, edge of T) and whose every vertex is a copy of a
vertex of exactly one factor.  Interleavings are generated recursively:
above a state (s, t) one may place the vertex sitting above s (its copy,
advancing the first coordinate), or the one above t, or end the branch.
Placing a stump ends the branch and discards whatever remains of the
other factor, which is why interleavings are filtered down to the
containment-maximal ones.

The percolation order: an interleaving moves up by exchanging a vertex
copy of a later factor sitting directly below a full rank of copies of
an earlier-factor vertex.  The minimal shuffle stacks the first factor
on top of the last.  ``shuffles`` returns the maximal interleavings in a
linear order extending percolation (rank, then canonical key).
"""

from __future__ import annotations

import itertools

from .dendsets import FinDendSet, LabeledDendrex, members
from .trees import Tree

SEP = "|"


def _edge_namer(factors: list[Tree]) -> dict[tuple[str, ...], str]:
    """Names for product states.  Joined names can collide once factor edges
    themselves contain the separator (iterated tensors), in which case the
    whole state space falls back to enumerated names."""
    states = list(itertools.product(*(list(F.nodes) for F in factors)))
    names = {s: SEP.join(s) for s in states}
    if len(set(names.values())) < len(states):
        names = {s: f"x{i}" for i, s in enumerate(sorted(states))}
    return names


def _combined_site(sites) -> str:
    sites = set(sites)
    if sites == {"closed"}:
        return "closed"
    if sites == {"open"}:
        return "open"
    return "all"


def _tree_site(T: Tree) -> str:
    if T.is_closed:
        return "closed"
    if T.is_open:
        return "open"
    return "all"


def interleavings(factors: list[Tree]) -> list[LabeledDendrex]:
    """Every interleaving of the factors, deduplicated up to labelled iso."""
    name = _edge_namer(factors)
    memo: dict[tuple[str, ...], list] = {}

    def plans(state: tuple[str, ...]) -> list:
        if state in memo:
            return memo[state]
        out = []
        if all(factors[i].nodes[state[i]] is None for i in range(len(state))):
            out.append(None)  # leaf: every factor is exhausted by a leaf
        for i, F in enumerate(factors):
            v = F.nodes[state[i]]
            if v is None:
                continue
            children = [state[:i] + (c,) + state[i + 1 :] for c in v]
            for combo in itertools.product(*(plans(c) for c in children)):
                out.append(tuple(zip(children, combo)))
        seen = set()
        uniq = []
        for p in out:
            if p not in seen:
                seen.add(p)
                uniq.append(p)
        memo[state] = uniq
        return uniq

    root = tuple(F.root for F in factors)
    result: dict[str, LabeledDendrex] = {}
    for plan in plans(root):
        nodes: dict[str, tuple[str, ...] | None] = {}
        labels: dict[str, tuple[str, ...]] = {}

        def build(state, p):
            labels[name[state]] = state
            nodes[name[state]] = None if p is None else tuple(
                build(c, q) for c, q in p
            )
            return name[state]

        build(root, plan)
        d = LabeledDendrex(Tree(name[root], nodes), labels)
        result[d.key] = d
    return [result[k] for k in sorted(result)]


def _maximal(dendrices: list[LabeledDendrex], site: str) -> list[LabeledDendrex]:
    covered: set[str] = set()
    for d in dendrices:
        for k in members(d, site):
            if k != d.key:
                covered.add(k)
    return [d for d in dendrices if d.key not in covered]


def minimal_shuffle(factors: list[Tree]) -> LabeledDendrex:
    """Greedy stack: later factors at the bottom, stumps only at the end,
    so the first factor ends up on top of the last."""
    name = _edge_namer(factors)
    nodes: dict[str, tuple[str, ...] | None] = {}
    labels: dict[str, tuple[str, ...]] = {}

    def build(state) -> str:
        labels[name[state]] = state
        for i in reversed(range(len(factors))):
            v = factors[i].nodes[state[i]]
            if v:  # a real vertex of the latest unfinished factor
                nodes[name[state]] = tuple(
                    build(state[:i] + (c,) + state[i + 1 :]) for c in v
                )
                return name[state]
        if any(factors[i].nodes[state[i]] == () for i in range(len(factors))):
            nodes[name[state]] = ()
        else:
            nodes[name[state]] = None
        return name[state]

    root = tuple(F.root for F in factors)
    build(root)
    return LabeledDendrex(Tree(name[root], nodes), labels)


def _vertex_factor(d: LabeledDendrex, g: str) -> int | None:
    """Which factor the vertex above g copies; None for stumps."""
    v = d.shape.nodes[g]
    if not v:
        return None
    child = d.labels[v[0]]
    state = d.labels[g]
    for i, (a, b) in enumerate(zip(state, child)):
        if a != b:
            return i
    raise AssertionError("child state equals parent state")


def up_moves(d: LabeledDendrex, factors: list[Tree]) -> list[LabeledDendrex]:
    """One percolation step: push an earlier-factor vertex down past a
    later-factor vertex sitting directly below a full rank of its copies."""
    name = _edge_namer(factors)
    out = []
    for g in d.shape.vertices:
        w = d.shape.nodes[g]
        if not w:
            continue
        j = _vertex_factor(d, g)
        uppers = {_vertex_factor(d, c) for c in w}
        if len(uppers) != 1:
            continue
        (i,) = uppers
        if i is None or i == j or i > j:
            continue
        sigma = d.labels[g]
        v_inputs = factors[i].nodes[sigma[i]]
        w_inputs = factors[j].nodes[sigma[j]]
        # all copies above the children must be copies of the same vertex,
        # which holds automatically: their factor-i coordinate is sigma[i]
        nodes = dict(d.shape.nodes)
        labels = dict(d.labels)
        for c in w:
            del nodes[c]
            del labels[c]
        tau = [sigma[:i] + (a,) + sigma[i + 1 :] for a in v_inputs]
        nodes[g] = tuple(name[t] for t in tau)
        for t in tau:
            labels[name[t]] = t
            grand = [t[:j] + (b,) + t[j + 1 :] for b in w_inputs]
            nodes[name[t]] = tuple(name[u] for u in grand)
        out.append(LabeledDendrex(Tree(d.shape.root, nodes), labels))
    return out


def shuffle_ranks(factors: list[Tree]) -> list[tuple[int, LabeledDendrex]]:
    """Maximal interleavings with their percolation rank (longest chain of
    up-moves from the minimal shuffle), ordered by rank then canonical key."""
    site = _combined_site(_tree_site(F) for F in factors)
    maximal = _maximal(interleavings(factors), site)
    keys = {d.key for d in maximal}
    mini = minimal_shuffle(factors)
    if mini.key not in keys:
        raise AssertionError("minimal interleaving is not maximal")
    rank = {mini.key: 0}
    # longest path from the minimum; the move relation is acyclic
    changed = True
    while changed:
        changed = False
        for d in maximal:
            if d.key not in rank:
                continue
            for m in up_moves(d, factors):
                if m.key in keys and rank.get(m.key, -1) < rank[d.key] + 1:
                    rank[m.key] = rank[d.key] + 1
                    changed = True
    missing = [k for k in keys if k not in rank]
    if missing:
        raise AssertionError(f"{len(missing)} shuffles unreachable by percolation")
    return sorted(((rank[d.key], d) for d in maximal), key=lambda p: (p[0], p[1].key))


def shuffles(factors: list[Tree]) -> list[LabeledDendrex]:
    """Maximal interleavings, linearly ordered extending percolation."""
    return [d for _, d in shuffle_ranks(factors)]


# -- tensors of dendroidal sets ----------------------------------------------


def _flat(label) -> tuple:
    return label if isinstance(label, tuple) else (label,)


def nfold_tensor(factors: list[Tree]) -> FinDendSet:
    """Union of all shuffles, with n-tuple labels."""
    site = _combined_site(_tree_site(F) for F in factors)
    tag = "(x)".join(F.canonical_key({e: e for e in F.nodes}) for F in factors)
    mem: dict[str, LabeledDendrex] = {}
    for d in shuffles(factors):
        mem.update(members(d, site))
    return FinDendSet(site, mem, f"tensor:{tag}")


def tensor_trees(S: Tree, T: Tree) -> FinDendSet:
    return nfold_tensor([S, T])


def tensor_sets(X: FinDendSet, Y: FinDendSet) -> FinDendSet:
    """Member-wise tensor of two subobjects; labels concatenate."""
    site = _combined_site([X.site, Y.site])
    amb = None
    if X.ambient is not None and Y.ambient is not None:
        amb = f"({X.ambient})(x)({Y.ambient})"
    mem: dict[str, LabeledDendrex] = {}
    for mx in X.maximal_members():
        for my in Y.maximal_members():
            for d in shuffles([mx.shape, my.shape]):
                relabeled = d.relabel(
                    lambda st: _flat(mx.labels[st[0]]) + _flat(my.labels[st[1]])
                )
                mem.update(members(relabeled, site))
    return FinDendSet(site, mem, amb)


def left_assoc_tensor(factors: list[Tree]) -> FinDendSet:
    """Iterated binary tensor ((F1 (x) F2) (x) F3) ..., flattened labels."""
    from .dendsets import representable

    if len(factors) < 2:
        raise ValueError("need at least two factors")
    acc = representable(factors[0], _tree_site(factors[0]))
    for F in factors[1:]:
        acc = tensor_sets(acc, representable(F, _tree_site(F)))
    tag = "(x)".join(F.canonical_key({e: e for e in F.nodes}) for F in factors)
    return FinDendSet(acc.site, acc.members, f"tensor:{tag}")


class PushoutProduct:
    """The corner inclusion (U(x)Y ∪ X(x)V) into X(x)Y and its mono test.

    The corner map from the pushout is mono exactly when the two corner
    pieces intersect in U(x)V.
    """

    __slots__ = ("corner", "full", "overlap", "expected_overlap", "is_mono")

    def __init__(self, U: FinDendSet, X: FinDendSet, V: FinDendSet, Y: FinDendSet):
        if not U.issubset(X):
            raise ValueError("U is not a subobject of X")
        if not V.issubset(Y):
            raise ValueError("V is not a subobject of Y")
        UY = tensor_sets(U, Y)
        XV = tensor_sets(X, V)
        self.full = tensor_sets(X, Y)
        self.corner = UY.union(XV)
        self.overlap = UY.intersect(XV)
        self.expected_overlap = tensor_sets(U, V)
        self.is_mono = (
            self.overlap == self.expected_overlap
            and self.corner.issubset(self.full)
        )


def pushout_product(U: FinDendSet, X: FinDendSet, V: FinDendSet, Y: FinDendSet) -> PushoutProduct:
    return PushoutProduct(U, X, V, Y)
