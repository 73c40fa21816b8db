"""Rooted trees with named edges, leaves and stumps.

A tree is stored as its set of edges together with, for every edge, the
vertex sitting on top of that edge: a tuple of input edge names, the
empty tuple for a nullary vertex (a stump), or ``None`` when nothing sits
there (a leaf).  The tree consisting of a single edge and no vertex has
its root edge marked as a leaf.

Trees are immutable.  Input order is kept as presentation data but never
enters identity: ``canonical_key`` and the isomorphism helpers compare
trees up to renaming and reordering.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache


class Tree:
    """A finite rooted tree.

    ``nodes`` maps each edge name to the inputs of the vertex above it
    (``None`` for a leaf).  ``root`` names the lowest edge.
    """

    __slots__ = ("root", "nodes", "_parent", "_order", "_shape_key")

    def __init__(self, root: str, nodes: dict[str, tuple[str, ...] | None]):
        if root not in nodes:
            raise ValueError(f"root edge {root!r} not among the edges")
        seen: dict[str, str] = {}
        for e, inputs in nodes.items():
            if inputs is None:
                continue
            for c in inputs:
                if c not in nodes:
                    raise ValueError(f"input edge {c!r} of {e!r} is not an edge")
                if c in seen:
                    raise ValueError(f"edge {c!r} is an input of both {seen[c]!r} and {e!r}")
                if c == root:
                    raise ValueError(f"root edge {root!r} cannot be an input")
                seen[c] = e
        if set(seen) != set(nodes) - {root}:
            missing = sorted(set(nodes) - {root} - set(seen))
            raise ValueError(f"edges not attached to any vertex: {missing}")
        self.root = root
        self.nodes = dict(nodes)
        self._parent = seen
        # depth-first presentation order, root first
        order: list[str] = []
        stack = [root]
        while stack:
            e = stack.pop()
            order.append(e)
            inputs = nodes[e]
            if inputs:
                stack.extend(reversed(inputs))
        if len(order) != len(nodes):
            unreachable = sorted(set(nodes) - set(order))
            raise ValueError(f"edges unreachable from the root: {unreachable}")
        self._order = tuple(order)
        self._shape_key: str | None = None

    # -- basic queries ---------------------------------------------------

    @property
    def edges(self) -> tuple[str, ...]:
        """Edges in depth-first order from the root."""
        return self._order

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(e for e in self._order if self.nodes[e] is None)

    @property
    def stumps(self) -> tuple[str, ...]:
        return tuple(e for e in self._order if self.nodes[e] == ())

    @property
    def vertices(self) -> tuple[str, ...]:
        """Output edges of the vertices, in depth-first order."""
        return tuple(e for e in self._order if self.nodes[e] is not None)

    def parent(self, e: str) -> str | None:
        """The edge directly below ``e``, or ``None`` for the root."""
        if e == self.root:
            return None
        return self._parent[e]

    @property
    def inner_edges(self) -> tuple[str, ...]:
        return tuple(
            e for e in self._order if e != self.root and self.nodes[e] is not None
        )

    def is_inner(self, e: str) -> bool:
        return e != self.root and self.nodes[e] is not None

    @property
    def is_closed(self) -> bool:
        return not any(v is None for v in self.nodes.values())

    @property
    def is_open(self) -> bool:
        return not any(v == () for v in self.nodes.values())

    def above(self, e: str) -> set[str]:
        """All edges weakly above ``e``, including ``e`` itself."""
        out = set()
        stack = [e]
        while stack:
            f = stack.pop()
            out.add(f)
            inputs = self.nodes[f]
            if inputs:
                stack.extend(inputs)
        return out

    def weakly_above(self, a: str, b: str) -> bool:
        """True iff ``b`` lies on the path from ``a`` down to the root."""
        f: str | None = a
        while f is not None:
            if f == b:
                return True
            f = self.parent(f)
        return False

    # -- identity up to isomorphism --------------------------------------

    def canonical_key(self, labels: dict[str, object] | None = None) -> str:
        """Invariant encoding: equal keys iff isomorphic (label-respecting).

        With ``labels`` omitted the key describes the bare shape and any
        two renamings of the same tree agree; passing a map from edge
        names to labels makes the key separate trees that are carried to
        each other only by label-breaking bijections.
        """
        if labels is None and self._shape_key is not None:
            return self._shape_key
        key = _enc(self, self.root, labels)
        if labels is None:
            self._shape_key = key
        return key

    def relabel(self, mapping: dict[str, str]) -> "Tree":
        """Rename edges; names absent from ``mapping`` are kept."""
        re = lambda e: mapping.get(e, e)
        nodes = {
            re(e): (None if v is None else tuple(re(c) for c in v))
            for e, v in self.nodes.items()
        }
        if len(nodes) != len(self.nodes):
            raise ValueError("relabelling collapses edge names")
        return Tree(re(self.root), nodes)

    def __repr__(self) -> str:
        return f"Tree({self.root!r}, {self.nodes!r})"

    def __eq__(self, other: object) -> bool:
        """Presentation equality: same names, same input order."""
        if not isinstance(other, Tree):
            return NotImplemented
        return self.root == other.root and self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash((self.root, tuple(sorted(
            (e, v) for e, v in self.nodes.items()
        ))))


def _enc(T: Tree, e: str, labels: dict[str, object] | None) -> str:
    lab = "" if labels is None else repr(labels[e])
    inputs = T.nodes[e]
    if inputs is None:
        return f"L[{lab}]"
    parts = sorted(_enc(T, c, labels) for c in inputs)
    return f"V[{lab}]({','.join(parts)})"


def isomorphisms(S: Tree, T: Tree, labels_s=None, labels_t=None):
    """Yield every edge bijection S -> T commuting with the structure.

    When label maps are given only label-preserving bijections come out.
    """
    if len(S.nodes) != len(T.nodes):
        return
    if S.canonical_key(labels_s) != T.canonical_key(labels_t):
        return
    yield from _match(S, T, S.root, T.root, labels_s, labels_t)


def _match(S, T, es, et, ls, lt):
    if ls is not None and repr(ls[es]) != repr(lt[et]):
        return
    a, b = S.nodes[es], T.nodes[et]
    if (a is None) != (b is None):
        return
    if a is None or a == () == b:
        if a == b or a == ():
            yield {es: et}
        return
    if len(a) != len(b):
        return
    keys_a = [_enc(S, c, ls) for c in a]
    keys_b = [_enc(T, c, lt) for c in b]
    for perm in itertools.permutations(range(len(b))):
        if any(keys_a[i] != keys_b[perm[i]] for i in range(len(a))):
            continue
        pools = [list(_match(S, T, a[i], b[perm[i]], ls, lt)) for i in range(len(a))]
        if any(not p for p in pools):
            continue
        for combo in itertools.product(*pools):
            out = {es: et}
            for d in combo:
                out.update(d)
            yield out


def find_isomorphism(S: Tree, T: Tree) -> dict[str, str] | None:
    return next(isomorphisms(S, T), None)


def automorphisms(T: Tree) -> list[dict[str, str]]:
    return list(isomorphisms(T, T))


# -- constructions --------------------------------------------------------


def eta(name: str = "e") -> Tree:
    """The tree with a single edge and no vertex."""
    return Tree(name, {name: None})


def eta_closed(name: str = "e") -> Tree:
    """A single edge capped by a stump."""
    return Tree(name, {name: ()})


def corolla(root: str, inputs: tuple[str, ...], closed: bool = False) -> Tree:
    """One vertex with the given inputs; ``closed`` puts a stump on each."""
    nodes: dict[str, tuple[str, ...] | None] = {root: tuple(inputs)}
    for c in inputs:
        nodes[c] = () if closed else None
    return Tree(root, nodes)


def linear_closed(n: int, labels: list[str] | None = None) -> Tree:
    """The linear closed tree with n unary vertices, n+1 edges, stump on top."""
    if labels is None:
        labels = [str(i) for i in range(n + 1)]
    if len(labels) != n + 1:
        raise ValueError(f"need {n + 1} labels, got {len(labels)}")
    nodes: dict[str, tuple[str, ...] | None] = {}
    for i in range(n):
        nodes[labels[i]] = (labels[i + 1],)
    nodes[labels[n]] = ()
    return Tree(labels[0], nodes)


def closure(T: Tree) -> Tree:
    """Cap every leaf with a stump.  Adds no edges; idempotent."""
    return Tree(T.root, {e: (() if v is None else v) for e, v in T.nodes.items()})


def chop_stumps(T: Tree) -> Tree:
    """Remove every stump, turning its edge into a leaf."""
    return Tree(T.root, {e: (None if v == () else v) for e, v in T.nodes.items()})


def contract(T: Tree, edges: set[str] | frozenset[str] | tuple[str, ...]) -> Tree:
    """Contract the given edges, merging each vertex pair.

    Every requested edge must carry a vertex on top and must not be the
    root.  Contracting an edge under a stump deletes that input slot.
    """
    nodes = dict(T.nodes)
    root = T.root
    for e in sorted(edges):
        if e == root:
            raise ValueError(f"cannot contract the root edge {e!r}")
        if e not in nodes:
            raise ValueError(f"{e!r} is not an edge")
        up = nodes[e]
        if up is None:
            raise ValueError(f"cannot contract the leaf edge {e!r}")
        # splice the upper vertex into the parent slot
        for f, v in nodes.items():
            if v and e in v:
                i = v.index(e)
                nodes[f] = v[:i] + up + v[i + 1 :]
                break
        del nodes[e]
    return Tree(root, nodes)


def graft(base: Tree, leaf: str, top: Tree) -> Tree:
    """Glue the root of ``top`` onto the leaf ``leaf`` of ``base``.

    The joint edge keeps the name of the leaf; any other name of ``top``
    clashing with ``base`` is freshened with a prime suffix.
    """
    if base.nodes.get(leaf, ()) is not None:
        raise ValueError(f"{leaf!r} is not a leaf of the base tree")
    taken = set(base.nodes)
    rename = {top.root: leaf}
    for e in top.edges:
        if e == top.root:
            continue
        name = e
        while name in taken:
            name += "'"
        rename[e] = name
        taken.add(name)
    nodes = dict(base.nodes)
    for e, v in top.nodes.items():
        nodes[rename[e]] = None if v is None else tuple(rename[c] for c in v)
    return Tree(base.root, nodes)


# -- enumeration -----------------------------------------------------------


@lru_cache(maxsize=None)
def _closed_shapes(n: int) -> tuple[tuple, ...]:
    # shape = tuple of child shapes, sorted; a closed tree with n vertices
    # has n edges, the root edge carrying a vertex whose children are
    # closed trees with sizes summing to n - 1
    if n <= 0:
        return ()
    out = []
    for forest in _forests(n - 1):
        out.append(forest)
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(total: int) -> tuple[tuple, ...]:
    # multisets of closed shapes with sizes summing to total, sorted
    if total == 0:
        return ((),)
    out = set()
    for k in range(1, total + 1):
        for shape in _closed_shapes(k):
            for rest in _forests(total - k):
                out.add(tuple(sorted(((k, shape),) + rest)))
    return tuple(sorted(out))


def _build_closed(shape_entry, counter, nodes) -> str:
    k, shape = shape_entry
    name = f"e{next(counter)}"
    children = tuple(_build_closed(c, counter, nodes) for c in shape)
    nodes[name] = children
    return name


def all_closed_trees(max_vertices: int) -> list[Tree]:
    """All closed trees with at most ``max_vertices`` vertices, up to iso.

    A closed tree with n vertices has exactly n edges.  Edges are named
    e0, e1, ... in depth-first order.
    """
    out = []
    for n in range(1, max_vertices + 1):
        for shape in _closed_shapes(n):
            counter = itertools.count()
            nodes: dict[str, tuple[str, ...] | None] = {}
            _build_closed((n, shape), counter, nodes)
            out.append(Tree("e0", nodes))
    return out


@lru_cache(maxsize=None)
def _open_shapes(n_edges: int) -> tuple[tuple, ...]:
    # shapes of trees without stumps: a tree is a leaf (0 further edges)
    # or a vertex with >= 1 child subtree
    if n_edges == 1:
        return (("leaf",),)
    out = set()
    for forest in _open_forests(n_edges - 1):
        if forest:
            out.add(("vertex", forest))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _open_forests(total: int) -> tuple[tuple, ...]:
    if total == 0:
        return ((),)
    out = set()
    for k in range(1, total + 1):
        for shape in _open_shapes(k):
            for rest in _open_forests(total - k):
                out.add(tuple(sorted(((k, shape),) + rest)))
    return tuple(sorted(out))


def _build_open(shape_entry, counter, nodes) -> str:
    _, shape = shape_entry
    name = f"e{next(counter)}"
    if shape[0] == "leaf":
        nodes[name] = None
    else:
        nodes[name] = tuple(_build_open(c, counter, nodes) for c in shape[1])
    return name


def all_open_trees(max_edges: int) -> list[Tree]:
    """All stump-free trees with at most ``max_edges`` edges, up to iso."""
    out = []
    for n in range(1, max_edges + 1):
        for shape in _open_shapes(n):
            counter = itertools.count()
            nodes: dict[str, tuple[str, ...] | None] = {}
            _build_open((n, shape), counter, nodes)
            out.append(Tree("e0", nodes))
    return out


def all_trees(max_edges: int) -> list[Tree]:
    """All trees (leaves and stumps both allowed) with at most ``max_edges``
    edges, up to iso."""
    seen: dict[str, Tree] = {}
    # decorate each open shape's leaf set with every leaf/stump pattern
    for T in all_open_trees(max_edges):
        for pattern in itertools.product((None, ()), repeat=len(T.leaves)):
            nodes = dict(T.nodes)
            for leaf, mark in zip(T.leaves, pattern):
                nodes[leaf] = mark
            cand = Tree(T.root, nodes)
            seen.setdefault(cand.canonical_key(), cand)
    return sorted(seen.values(), key=lambda t: (len(t.nodes), t.canonical_key()))


# -- interchange -----------------------------------------------------------


def to_json_obj(T: Tree, e: str | None = None) -> dict:
    """Nested record: {"edge": name, "vertex": {"inputs": [...]}} with
    {"edge": name, "leaf": true} and {"edge": name, "stump": true} at the
    extremities."""
    if e is None:
        e = T.root
    v = T.nodes[e]
    if v is None:
        return {"edge": e, "leaf": True}
    if v == ():
        return {"edge": e, "stump": True}
    return {"edge": e, "vertex": {"inputs": [to_json_obj(T, c) for c in v]}}


def from_json_obj(obj: dict) -> Tree:
    nodes: dict[str, tuple[str, ...] | None] = {}

    def walk(rec) -> str:
        e = rec["edge"]
        if rec.get("leaf"):
            nodes[e] = None
        elif rec.get("stump"):
            nodes[e] = ()
        else:
            v = rec.get("vertex")
            if v is None:
                raise ValueError(f"record for edge {e!r} has no vertex/leaf/stump")
            nodes[e] = tuple(walk(c) for c in v["inputs"])
        return e

    return Tree(walk(obj), nodes)


def to_json(T: Tree) -> str:
    return json.dumps(to_json_obj(T), indent=2)


def from_json(text: str) -> Tree:
    return from_json_obj(json.loads(text))


def to_dot(T: Tree, marked: set[str] | frozenset[str] = frozenset()) -> str:
    """Graphviz rendering: filled circles for vertices, open circles for
    the vertices listed in ``marked``, bare line stubs for leaves and the
    root."""
    lines = [
        "graph tree {",
        "  rankdir=BT;",
        '  node [shape=circle, width=0.14, label="", fixedsize=true];',
    ]
    for v in T.vertices:
        fill = "white" if v in marked else "black"
        lines.append(f'  "v_{v}" [style=filled, fillcolor={fill}];')
    lines.append('  "anchor_root" [style=invis, width=0.01];')
    for leaf in T.leaves:
        lines.append(f'  "anchor_{leaf}" [style=invis, width=0.01];')
    for e in T.edges:
        top = f"v_{e}" if T.nodes[e] is not None else f"anchor_{e}"
        p = T.parent(e)
        bottom = f"v_{p}" if p is not None else "anchor_root"
        lines.append(f'  "{bottom}" -- "{top}" [label="{e}"];')
    lines.append("}")
    return "\n".join(lines)
