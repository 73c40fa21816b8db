"""Named example trees.

Small trees that demonstrate each feature of the face/tensor/certificate
machinery: forks with stumps, a fork carrying a stem, a three-input
vertex with mixed caps, and the open elbow whose two faces intersect in
a disjoint pair of edges.
"""

from __future__ import annotations

from .trees import Tree, corolla, eta, eta_closed, linear_closed


def linear_open(n: int, labels: list[str] | None = None) -> Tree:
    """Open chain with n unary vertices and n+1 edges; leaf on top."""
    if labels is None:
        labels = [str(i) for i in range(n + 1)]
    if len(labels) != n + 1:
        raise ValueError(f"need {n + 1} labels, got {len(labels)}")
    nodes: dict[str, tuple[str, ...] | None] = {labels[n]: None}
    for i in range(n):
        nodes[labels[i]] = (labels[i + 1],)
    return Tree(labels[0], nodes)


def fork_closed() -> Tree:
    """Closed binary corolla: root r, inputs d and e, both capped."""
    return corolla("r", ("d", "e"), closed=True)


def stem_fork() -> Tree:
    """Unary vertex under a capped fork: edges r, a, b, c."""
    return Tree("r", {"r": ("a",), "a": ("b", "c"), "b": (), "c": ()})


def elbow_open() -> Tree:
    """Open tree with a binary root vertex and one stem: the two outer
    faces of this tree intersect in two disjoint edges."""
    return Tree("a", {"a": ("b", "d"), "b": ("c",), "c": None, "d": None})


def wide_fork() -> Tree:
    """Three-input root vertex, two inputs capped, the third carrying a
    capped fork: edges x, a, y, b, c, d."""
    return Tree(
        "x",
        {"x": ("a", "y", "b"), "a": (), "y": (), "b": ("c", "d"), "c": (), "d": ()},
    )


def double_fork() -> Tree:
    """Fork over a fork: root a, one input capped, the other carrying a
    second capped fork: edges a, b, c, d, e."""
    return Tree(
        "a", {"a": ("b", "c"), "b": (), "c": ("d", "e"), "d": (), "e": ()}
    )


def named_trees() -> dict[str, Tree]:
    return {
        "eta": eta("e"),
        "etabar": eta_closed("e"),
        "c1bar": linear_closed(1, ["r", "t"]),
        "c2bar": fork_closed(),
        "c3bar": corolla("r", ("a", "b", "c"), closed=True),
        "c2": corolla("r", ("a", "b")),
        "c3": corolla("r", ("a", "b", "c")),
        "interval": linear_open(1),
        "l2bar": linear_closed(2),
        "l3bar": linear_closed(3),
        "stem-fork": stem_fork(),
        "elbow-open": elbow_open(),
        "wide-fork": wide_fork(),
        "double-fork": double_fork(),
    }
