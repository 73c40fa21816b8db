"""Finite dendroidal sets, presented by their non-degenerate dendrices.

A labelled dendrex is a tree shape together with a label on every edge.
For subobjects of a single tree T the labels are edges of T; for tensor
products they are tuples of edges, one per factor.  Identity of dendrices
is up to label-preserving isomorphism of shapes.

A ``FinDendSet`` is a face-closed finite set of labelled dendrices inside
one of the three sites: ``all`` trees, ``open`` trees (no stumps), or
``closed`` trees (no leaves).  Unions, intersections and the functors
moving between the sites are all computed member-wise.
"""

from __future__ import annotations

import itertools
import json

from .trees import Tree, chop_stumps, closure, contract, from_json_obj, to_json_obj

SITES = ("all", "open", "closed")


def _check_site(site: str) -> str:
    if site not in SITES:
        raise ValueError(f"unknown site {site!r}")
    return site


def tree_in_site(T: Tree, site: str) -> bool:
    if site == "closed":
        return T.is_closed
    if site == "open":
        return T.is_open
    return True


class LabeledDendrex:
    """A tree with a label attached to every edge.

    Unary vertices whose input and output carry the same label are
    collapsed on construction, so only non-degenerate dendrices exist.
    """

    __slots__ = ("shape", "labels", "key")

    def __init__(self, shape: Tree, labels: dict[str, object]):
        missing = set(shape.nodes) - set(labels)
        if missing:
            raise ValueError(f"edges without labels: {sorted(missing)}")
        shape, labels = _normalize(shape, {e: labels[e] for e in shape.nodes})
        self.shape = shape
        self.labels = labels
        self.key = shape.canonical_key(labels)

    @classmethod
    def identity(cls, T: Tree) -> "LabeledDendrex":
        return cls(T, {e: e for e in T.nodes})

    def relabel(self, fn) -> "LabeledDendrex":
        return LabeledDendrex(self.shape, {e: fn(l) for e, l in self.labels.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledDendrex):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"LabeledDendrex({self.shape!r}, {self.labels!r})"

    def size(self) -> int:
        return len(self.shape.nodes)

    def to_json_obj(self) -> dict:
        return {
            "shape": to_json_obj(self.shape),
            "labels": {e: _label_json(l) for e, l in self.labels.items()},
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LabeledDendrex":
        shape = from_json_obj(obj["shape"])
        labels = {e: _label_unjson(l) for e, l in obj["labels"].items()}
        return cls(shape, labels)


def _label_json(l):
    return list(l) if isinstance(l, tuple) else l


def _label_unjson(l):
    return tuple(l) if isinstance(l, list) else l


def _normalize(shape: Tree, labels: dict[str, object]):
    # collapse unary vertices repeating the label below them
    while True:
        for e, v in shape.nodes.items():
            if v is not None and len(v) == 1 and labels[e] == labels[v[0]]:
                g = v[0]
                if shape.nodes[g] is None:
                    nodes = dict(shape.nodes)
                    del nodes[g]
                    nodes[e] = None
                    shape = Tree(shape.root, nodes)
                else:
                    shape = contract(shape, {g})
                del labels[g]
                break
        else:
            return shape, labels


# -- member enumeration ----------------------------------------------------
#
# The non-degenerate dendrices of a tree T are the pairs (R, E): a
# subtree R of T, given by a root edge and the antichain of edges where
# R stops, plus a set E of retained edges of R containing the root and
# all the cut points.  The dendrex shape is R with every other edge
# contracted; branches ending in stumps collapse into the vertex below.

_MEMBER_CACHE: dict[tuple[str, str], dict[str, LabeledDendrex]] = {}


def members(dendrex: LabeledDendrex, site: str) -> dict[str, LabeledDendrex]:
    """All iterated faces of the dendrex in the site, itself included."""
    _check_site(site)
    cached = _MEMBER_CACHE.get((site, dendrex.key))
    if cached is not None:
        return cached
    T, labels = dendrex.shape, dendrex.labels
    if not tree_in_site(T, site):
        raise ValueError(f"dendrex shape does not lie in site {site!r}")
    out: dict[str, LabeledDendrex] = {}
    for e in T.edges:
        for X in _cut_antichains(T, e, site):
            region = _region(T, e, X)
            optional = [f for f in region if f != e and f not in X]
            for picked in _subsets(optional):
                E = {e} | X | picked
                shape = _contracted_shape(T, e, region, X, E)
                m = LabeledDendrex(shape, {f: labels[f] for f in shape.nodes})
                out[m.key] = m
    _MEMBER_CACHE[(site, dendrex.key)] = out
    return out


def _subsets(items):
    for r in range(len(items) + 1):
        yield from (set(c) for c in itertools.combinations(items, r))


def _cut_antichains(T: Tree, e: str, site: str) -> list[frozenset[str]]:
    """Antichains of edges above ``e`` where the subtree stops.

    Every leaf of T above ``e`` must sit at or above a cut; in the closed
    site no cuts are allowed at all (a closed tree has no leaves to
    cover, and cutting would create one).
    """
    if site == "closed":
        return [frozenset()]

    def rec(f: str) -> list[frozenset[str]]:
        opts = [frozenset({f})]
        v = T.nodes[f]
        if v is None:
            return opts  # a leaf must be a cut point
        if site == "open" and v == ():
            raise ValueError("stump encountered in the open site")
        combos = [frozenset()]
        for c in v:
            combos = [a | b for a in combos for b in rec(c)]
        opts.extend(combos)
        return opts

    v = T.nodes[e]
    if v is None:
        return [frozenset({e})]
    below = [frozenset()]
    for c in v:
        below = [a | b for a in below for b in rec(c)]
    return [frozenset({e})] + below


def _region(T: Tree, e: str, X: frozenset[str]) -> set[str]:
    out = set()
    stack = [e]
    while stack:
        f = stack.pop()
        out.add(f)
        if f in X:
            continue
        v = T.nodes[f]
        if v:
            stack.extend(v)
    return out


def _contracted_shape(T, e, region, X, E) -> Tree:
    def frontier(f: str) -> list[str]:
        if f in E:
            return [f]
        v = T.nodes[f]
        if not v:  # a stump outside E collapses into the vertex below
            return []
        return [g for c in v for g in frontier(c)]

    nodes: dict[str, tuple[str, ...] | None] = {}
    for f in E:
        v = T.nodes[f]
        if f in X or v is None:
            nodes[f] = None
        else:
            nodes[f] = tuple(g for c in v for g in frontier(c))
    return Tree(e, nodes)


# -- finite dendroidal sets -------------------------------------------------


class FinDendSet:
    """A face-closed set of labelled dendrices in a fixed site."""

    __slots__ = ("site", "members", "ambient")

    def __init__(
        self,
        site: str,
        members_: dict[str, LabeledDendrex],
        ambient: str | None = None,
    ):
        self.site = _check_site(site)
        self.members = dict(members_)
        self.ambient = ambient

    @property
    def member_list(self) -> list[LabeledDendrex]:
        return [self.members[k] for k in sorted(self.members)]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, dendrex) -> bool:
        key = dendrex.key if isinstance(dendrex, LabeledDendrex) else dendrex
        return key in self.members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinDendSet):
            return NotImplemented
        return self.site == other.site and self.members.keys() == other.members.keys()

    def __hash__(self) -> int:
        return hash((self.site, frozenset(self.members)))

    def _joint_ambient(self, other: "FinDendSet") -> str | None:
        if self.site != other.site:
            raise ValueError(f"site mismatch: {self.site} vs {other.site}")
        a, b = self.ambient, other.ambient
        if a is not None and b is not None and a != b:
            raise ValueError(f"ambient mismatch: {a!r} vs {b!r}")
        return a if a is not None else b

    def union(self, other: "FinDendSet") -> "FinDendSet":
        amb = self._joint_ambient(other)
        mem = dict(self.members)
        mem.update(other.members)
        return FinDendSet(self.site, mem, amb)

    def intersect(self, other: "FinDendSet") -> "FinDendSet":
        amb = self._joint_ambient(other)
        mem = {k: v for k, v in self.members.items() if k in other.members}
        return FinDendSet(self.site, mem, amb)

    def issubset(self, other: "FinDendSet") -> bool:
        return self.members.keys() <= other.members.keys()

    def map_labels(self, fn) -> "FinDendSet":
        mem = {}
        for m in self.members.values():
            n = m.relabel(fn)
            mem[n.key] = n
        return FinDendSet(self.site, mem, None)

    def maximal_members(self) -> list[LabeledDendrex]:
        """Members contained in no other member."""
        covered: set[str] = set()
        for m in self.members.values():
            for k in members(m, self.site):
                if k != m.key:
                    covered.add(k)
        return [m for k, m in sorted(self.members.items()) if k not in covered]

    def validate_face_closed(self) -> None:
        for m in self.members.values():
            for k in members(m, self.site):
                if k not in self.members:
                    raise AssertionError(
                        f"face {k} of member {m.key} is missing"
                    )

    def to_json_obj(self) -> dict:
        return {
            "site": self.site,
            "ambient": self.ambient,
            "members": [m.to_json_obj() for m in self.member_list],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FinDendSet":
        mem = {}
        for rec in obj["members"]:
            m = LabeledDendrex.from_json_obj(rec)
            mem[m.key] = m
        return cls(obj["site"], mem, obj.get("ambient"))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FinDendSet":
        return cls.from_json_obj(json.loads(text))


def empty(site: str, ambient: str | None = None) -> FinDendSet:
    return FinDendSet(site, {}, ambient)


def union_all(site: str, sets, ambient: str | None = None) -> FinDendSet:
    mem: dict[str, LabeledDendrex] = {}
    for s in sets:
        if s.site != site:
            raise ValueError(f"site mismatch: {s.site} vs {site}")
        mem.update(s.members)
    return FinDendSet(site, mem, ambient)


def ambient_tag(T: Tree, site: str) -> str:
    return f"{site}:{T.canonical_key({e: e for e in T.nodes})}"


def representable(
    T: Tree,
    site: str,
    labels: dict[str, object] | None = None,
    ambient: str | None = None,
) -> FinDendSet:
    """All faces of T, as labelled dendrices; identity labels by default."""
    d = LabeledDendrex(T, labels or {e: e for e in T.nodes})
    if ambient is None and labels is None:
        ambient = ambient_tag(T, site)
    return FinDendSet(site, members(d, site), ambient)


def generate(site: str, dendrices, ambient: str | None = None) -> FinDendSet:
    """The face closure of the given dendrices."""
    mem: dict[str, LabeledDendrex] = {}
    for d in dendrices:
        mem.update(members(d, site))
    return FinDendSet(site, mem, ambient)


# -- functors between the sites ---------------------------------------------


def u_shriek(X: FinDendSet) -> FinDendSet:
    """Re-read a closed-site object in the site of all trees, closing up
    under the extra faces (the ones chopping stumps off)."""
    if X.site != "closed":
        raise ValueError("u_shriek takes a closed-site object")
    mem: dict[str, LabeledDendrex] = {}
    for m in X.members.values():
        mem.update(members(m, "all"))
    return FinDendSet("all", mem, X.ambient)


def closed_image(X: FinDendSet) -> FinDendSet:
    """The image of X under closure: every member gets its leaves capped,
    then the result is closed under closed-site faces.

    The passage from X to this image is not injective in general; the
    image is the subobject the capped members generate.
    """
    if X.site == "closed":
        raise ValueError("X already lives in the closed site")
    mem: dict[str, LabeledDendrex] = {}
    for m in X.members.values():
        capped = LabeledDendrex(closure(m.shape), m.labels)
        mem.update(members(capped, "closed"))
    return FinDendSet("closed", mem, X.ambient)


def _upsets(T: Tree) -> list[frozenset[str]]:
    # upward-closed sets of non-root edges: a set containing an edge
    # contains everything above it
    def rec(f: str) -> list[frozenset[str]]:
        whole = frozenset(T.above(f))
        partial = [frozenset()]
        v = T.nodes[f]
        if v:
            for c in v:
                partial = [a | b for a in partial for b in rec(c)]
        return [whole] + partial

    v = T.nodes[T.root]
    out = [frozenset()]
    if v:
        for c in v:
            out = [a | b for a in out for b in rec(c)]
    seen = set()
    uniq = []
    for A in out:
        if A not in seen:
            seen.add(A)
            uniq.append(A)
    return uniq


def interior(T: Tree) -> FinDendSet:
    """The open part of a closed tree: the union, over upward-closed sets
    A of non-root edges, of the open trees obtained by contracting A and
    chopping all stumps.  Labels are edges of T."""
    if not T.is_closed:
        raise ValueError("interior is defined for closed trees")
    mem: dict[str, LabeledDendrex] = {}
    for A in _upsets(T):
        S = chop_stumps(contract(T, A)) if A else chop_stumps(T)
        d = LabeledDendrex(S, {e: e for e in S.nodes})
        mem.update(members(d, "open"))
    return FinDendSet("open", mem, ambient_tag(T, "closed"))


def interior_part(X: FinDendSet, T: Tree) -> FinDendSet:
    """Restrict the interior of T to a closed subobject X of T: keep the
    open dendrices whose closure lands in X."""
    if X.site != "closed":
        raise ValueError("X must be a closed-site subobject")
    mem = {}
    for m in interior(T).members.values():
        capped = LabeledDendrex(closure(m.shape), m.labels)
        if capped.key in X.members:
            mem[m.key] = m
    return FinDendSet("open", mem, ambient_tag(T, "closed"))
