"""Elementary faces of trees, and the subobjects they generate.

The face taxonomy, per site:

* inner(e): contract an inner edge e, merging its end vertices.
* top(f): delete a vertex all of whose inputs are leaves (a stump
  qualifies vacuously), named by its output edge f.  Not available in
  the closed site, where removing a vertex would create a leaf.
* root: delete the root vertex together with the root edge and the
  root vertex's leaf inputs; exists when exactly one input carries a
  vertex, so that a single subtree remains.  For closed trees this is
  the unary-root case.
* edge(e): for a tree with exactly one vertex and at least one input,
  the single edges are the elementary faces (sites with leaves only).

A face index is the pair (kind, edge name); the root face is indexed by
the root edge.  Horns, boundaries and spines are returned as
``FinDendSet`` subobjects with identity labels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dendsets import (
    FinDendSet,
    LabeledDendrex,
    ambient_tag,
    generate,
    members,
    tree_in_site,
    union_all,
)
from .trees import Tree, contract

FaceIndex = tuple[str, str]


@dataclass(frozen=True)
class Face:
    kind: str
    index: str
    source: Tree

    @property
    def face_index(self) -> FaceIndex:
        return (self.kind, self.index)

    @property
    def embedding(self) -> dict[str, str]:
        # faces keep the ambient edge names
        return {e: e for e in self.source.nodes}


def is_very_inner(T: Tree, e: str) -> bool:
    """Inner, and the vertex above it is not a stump.  The vertex below
    an inner edge has at least one input, so it is never a stump."""
    if e not in T.nodes:
        raise ValueError(f"{e!r} is not an edge")
    return T.is_inner(e) and T.nodes[e] != ()


def very_inner_edges(T: Tree) -> tuple[str, ...]:
    return tuple(e for e in T.inner_edges if T.nodes[e] != ())


def _top_source(T: Tree, f: str) -> Tree:
    nodes = {e: v for e, v in T.nodes.items() if e not in T.nodes[f]}
    nodes[f] = None
    return Tree(T.root, nodes)


def _root_source(T: Tree, keep: str) -> Tree:
    above = T.above(keep)
    return Tree(keep, {e: T.nodes[e] for e in above})


def _root_keep(T: Tree) -> str | None:
    # the unique input of the root vertex carrying a vertex, if it exists
    v = T.nodes[T.root]
    if not v:
        return None
    grown = [c for c in v if T.nodes[c] is not None]
    return grown[0] if len(grown) == 1 else None


def elementary_faces(T: Tree, site: str) -> list[Face]:
    """Complete, duplicate-free face list admitted by the site."""
    if not tree_in_site(T, site):
        raise ValueError(f"tree does not lie in site {site!r}")
    n_vertices = len(T.vertices)
    if n_vertices == 0:
        return []
    out: list[Face] = []
    if n_vertices == 1:
        inputs = T.nodes[T.root]
        if site == "closed":
            return []  # a lone stump has no closed faces
        if inputs == ():
            return [Face("top", T.root, Tree(T.root, {T.root: None}))]
        return [Face("edge", e, Tree(e, {e: None})) for e in T.edges]
    for e in T.inner_edges:
        out.append(Face("inner", e, contract(T, {e})))
    if site != "closed":
        for f in T.vertices:
            v = T.nodes[f]
            if f != T.root and all(T.nodes[c] is None for c in v):
                out.append(Face("top", f, _top_source(T, f)))
    keep = _root_keep(T)
    if keep is not None:
        out.append(Face("root", T.root, _root_source(T, keep)))
    return out


def face_by_index(T: Tree, index: FaceIndex, site: str) -> Face:
    for f in elementary_faces(T, site):
        if f.face_index == index:
            return f
    raise ValueError(f"{index} does not index an elementary face")


def parse_face_index(T: Tree, token: str) -> FaceIndex:
    """CLI syntax: 'inner:e', 'top:f', 'edge:e', 'root', or a bare edge
    name (the inner face there, or the root face for the root edge)."""
    if token == "root":
        return ("root", T.root)
    if ":" in token:
        kind, _, name = token.partition(":")
        return (kind, name)
    if token == T.root:
        return ("root", token)
    return ("inner", token)


def _resolve_omit(T: Tree, omit, site: str) -> set[FaceIndex]:
    available = {f.face_index for f in elementary_faces(T, site)}
    out: set[FaceIndex] = set()
    for o in omit:
        idx = parse_face_index(T, o) if isinstance(o, str) else tuple(o)
        if idx not in available:
            raise ValueError(f"{idx} does not index an elementary face")
        out.add(idx)
    return out


def boundary(T: Tree, site: str) -> FinDendSet:
    """Union of all elementary faces: the largest proper subobject."""
    faces = elementary_faces(T, site)
    sets = [generate(site, [LabeledDendrex.identity(f.source)]) for f in faces]
    return union_all(site, sets, ambient_tag(T, site))


def horn(T: Tree, omit, site: str) -> FinDendSet:
    """Union of all elementary faces except the omitted ones."""
    omitted = _resolve_omit(T, omit, site)
    if not omitted:
        raise ValueError("omit set is empty; use boundary instead")
    sets = [
        generate(site, [LabeledDendrex.identity(f.source)])
        for f in elementary_faces(T, site)
        if f.face_index not in omitted
    ]
    return union_all(site, sets, ambient_tag(T, site))


def spine(T: Tree, site: str) -> FinDendSet:
    """Union of the corollas of all vertices (closed corollas in the
    closed site), glued along shared edges."""
    from .trees import corolla

    if not tree_in_site(T, site):
        raise ValueError(f"tree does not lie in site {site!r}")
    if not T.vertices:
        return generate(site, [LabeledDendrex.identity(T)], ambient_tag(T, site))
    sets = []
    for f in T.vertices:
        C = corolla(f, T.nodes[f], closed=(site == "closed"))
        sets.append(generate(site, [LabeledDendrex.identity(C)]))
    return union_all(site, sets, ambient_tag(T, site))


# -- faces of labelled dendrices -------------------------------------------


def dendrex_faces(d: LabeledDendrex, site: str) -> list[tuple[FaceIndex, LabeledDendrex]]:
    """Elementary faces of a dendrex, with induced labels.  Indices refer
    to the shape's edge names."""
    out = []
    for f in elementary_faces(d.shape, site):
        labels = {e: d.labels[e] for e in f.source.nodes}
        out.append((f.face_index, LabeledDendrex(f.source, labels)))
    return out


def dendrex_horn_members(d: LabeledDendrex, omit, site: str) -> dict[str, LabeledDendrex]:
    """Member set of the horn of a dendrex's shape, omitting the given
    face indices, with induced labels."""
    omitted = _resolve_omit(d.shape, omit, site)
    if not omitted:
        raise ValueError("omit set is empty")
    mem: dict[str, LabeledDendrex] = {}
    for idx, face_dx in dendrex_faces(d, site):
        if idx not in omitted:
            mem.update(members(face_dx, site))
    return mem
