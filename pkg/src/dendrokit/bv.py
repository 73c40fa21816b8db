"""Cube-length resolutions of trees.

A tree presents an operad whose colours are its edges; the resolution
replaces each operation space by a cube that assigns a length in [0,1]
to certain edges of the spanned subtree.  Two index conventions exist:
the open one puts a length on every inner edge, the closed one only on
inner edges lying below one of the listed leaves.  Composition grafts
subtrees, gives length 1 to edges that newly acquire one, and erases
lengths that the index set of the grafted profile no longer contains.

Coordinates are exact rationals, so the associativity, unit, and
equivariance laws are checked by equality, not tolerance.  The closed
convention also admits a comparison into an open resolution on a
contracted tree (:func:`canonical_subforest`), and the interval-closure
tower of glued cubes is exposed via :func:`interval_cube_tower`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .trees import Tree, chop_stumps, contract

OPEN = "open"
CLOSED = "closed"

Profile = tuple[tuple[str, ...], str]


class BVError(ValueError):
    pass


def spanned_subtree(T: Tree, inputs, output: str) -> Tree | None:
    """The unique subtree of ``T`` with leaf set ``inputs`` and root
    ``output``, or None when no such subtree exists.

    Growth from the root stops exactly at the listed edges; every other
    edge must carry a vertex of ``T`` (a stump closes a branch without
    creating a leaf).
    """
    wanted = set(inputs)
    if len(wanted) != len(tuple(inputs)):
        return None
    if output not in T.nodes:
        return None
    nodes: dict[str, tuple[str, ...] | None] = {}
    stack = [output]
    while stack:
        e = stack.pop()
        if e in wanted:
            nodes[e] = None
            continue
        up = T.nodes[e]
        if up is None:
            return None
        nodes[e] = up
        stack.extend(up)
    if not wanted <= set(nodes):
        return None
    return Tree(output, nodes)


def cube_index(T: Tree, inputs, output: str, variant: str) -> tuple[str, ...]:
    """The sorted set of subtree edges carrying a length coordinate.

    Open variant: all inner edges of the spanned subtree.  Closed
    variant (``T`` must be closed): only those inner edges with at
    least one listed leaf above them.
    """
    if variant not in (OPEN, CLOSED):
        raise BVError(f"unknown variant {variant!r}")
    if variant == CLOSED and not T.is_closed:
        raise BVError("the closed index convention needs a closed tree")
    S = spanned_subtree(T, inputs, output)
    if S is None:
        raise BVError(f"({', '.join(inputs)}; {output}) spans no subtree")
    inner = S.inner_edges
    if variant == OPEN:
        return tuple(sorted(inner))
    listed = set(inputs)
    return tuple(sorted(d for d in inner if S.above(d) & listed))


def profile_table(T: Tree, variant: str = OPEN) -> list[tuple[Profile, int]]:
    """Every profile with a nonempty operation space, with its cube
    dimension, sorted with inputs in canonical order."""
    rows = []
    for e in sorted(T.edges):
        for leaves in _leaf_sets(T, e):
            inputs = tuple(sorted(leaves))
            rows.append(((inputs, e), len(cube_index(T, inputs, e, variant))))
    return sorted(rows)


def _leaf_sets(T: Tree, e: str) -> list[frozenset[str]]:
    out = [frozenset([e])]
    up = T.nodes[e]
    if up is not None:
        for combo in product(*[_leaf_sets(T, c) for c in up]):
            out.append(frozenset().union(*combo))
    return out


@dataclass(frozen=True)
class CubeOperation:
    """A point of one operation cube: an input sequence and output edge
    spanning a subtree, plus a length for every index edge.

    ``coords`` is a sorted tuple of (edge, value) pairs; build through
    :meth:`create`, which computes the index set and checks totality.
    """

    tree: Tree
    variant: str
    inputs: tuple[str, ...]
    output: str
    coords: tuple[tuple[str, Fraction], ...]

    @classmethod
    def create(cls, tree, inputs, output, coords, variant=CLOSED) -> "CubeOperation":
        inputs = tuple(inputs)
        index = cube_index(tree, inputs, output, variant)
        given = {e: Fraction(v) for e, v in dict(coords).items()}
        if set(given) != set(index):
            raise BVError(
                f"coordinates {sorted(given)} do not match the index {list(index)}"
            )
        if not all(0 <= v <= 1 for v in given.values()):
            raise BVError("lengths must lie in [0, 1]")
        return cls(tree, variant, inputs, output, tuple(sorted(given.items())))

    @classmethod
    def unit(cls, tree: Tree, e: str, variant: str = CLOSED) -> "CubeOperation":
        return cls.create(tree, (e,), e, {}, variant)

    @classmethod
    def constant(cls, tree: Tree, e: str) -> "CubeOperation":
        """The point of the empty-input space at ``e`` in the closed
        convention, where the index set of a constant is always empty."""
        return cls.create(tree, (), e, {}, CLOSED)

    @property
    def index(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.coords)

    @property
    def profile(self) -> Profile:
        return (self.inputs, self.output)

    def coord(self, e: str) -> Fraction:
        return dict(self.coords)[e]

    def compose(self, i: int, g: "CubeOperation") -> "CubeOperation":
        """Substitute ``g`` into input slot ``i`` (1-based): graft the
        subtrees, keep inherited lengths, set 1 on index edges that have
        none, and drop coordinates outside the recomputed index."""
        if self.tree != g.tree or self.variant != g.variant:
            raise BVError("composition needs a common tree and variant")
        if not 1 <= i <= len(self.inputs):
            raise BVError(f"no input slot {i}")
        if g.output != self.inputs[i - 1]:
            raise BVError(
                f"edge mismatch: slot {i} is {self.inputs[i - 1]!r}, not {g.output!r}"
            )
        inputs = self.inputs[: i - 1] + g.inputs + self.inputs[i:]
        index = cube_index(self.tree, inputs, self.output, self.variant)
        mine, theirs = dict(self.coords), dict(g.coords)
        coords = {
            d: mine.get(d, theirs.get(d, Fraction(1))) for d in index
        }
        return CubeOperation.create(self.tree, inputs, self.output, coords, self.variant)

    def act(self, perm: tuple[int, ...]) -> "CubeOperation":
        """Reorder the input sequence; lengths are attached to edges and
        do not move."""
        if sorted(perm) != list(range(len(self.inputs))):
            raise BVError(f"{perm} is not a permutation of the inputs")
        inputs = tuple(self.inputs[perm[t]] for t in range(len(self.inputs)))
        return CubeOperation(self.tree, self.variant, inputs, self.output, self.coords)

    def to_json_obj(self) -> dict:
        return {
            "profile": [list(self.inputs), self.output],
            "index_edges": list(self.index),
            "coords": {e: [v.numerator, v.denominator] for e, v in self.coords},
            "variant": self.variant,
        }


def vertex_operations(T: Tree, inputs, output, variant=CLOSED):
    """All cube vertices (0/1-valued operations) of one profile."""
    index = cube_index(T, inputs, output, variant)
    for bits in product((Fraction(0), Fraction(1)), repeat=len(index)):
        yield CubeOperation.create(T, inputs, output, dict(zip(index, bits)), variant)


def canonical_subforest(T: Tree, inputs, output: str):
    """The largest upward-closed edge forest whose contraction turns the
    closed-convention cube of a profile into an open-convention one.

    Returns ``(A, opened)`` where ``A`` consists of every edge neither
    on a path from a listed leaf down to ``output`` nor on the path from
    ``output`` to the root, and ``opened`` is the contraction of ``A``
    with all stumps chopped.  On ``opened``, the same profile spans a
    subtree whose full inner-edge index coincides with the closed-
    convention index on ``T``; the constructor verifies this.
    """
    if not T.is_closed:
        raise BVError("the comparison starts from a closed tree")
    if not inputs:
        raise BVError(
            "empty-input profiles have no open-convention counterpart"
        )
    if spanned_subtree(T, inputs, output) is None:
        raise BVError(f"({', '.join(inputs)}; {output}) spans no subtree")
    hull: set[str] = {output}
    for e in inputs:
        f: str | None = e
        while f is not None and f != output:
            hull.add(f)
            f = T.parent(f)
        if f is None:
            raise BVError(f"{e!r} does not sit above {output!r}")
    root_path = set()
    f = T.parent(output)
    while f is not None:
        root_path.add(f)
        f = T.parent(f)
    A = frozenset(set(T.edges) - hull - root_path)
    opened = chop_stumps(contract(T, A)) if A else chop_stumps(T)
    closed_index = set(cube_index(T, inputs, output, CLOSED))
    open_index = set(cube_index(opened, inputs, output, OPEN))
    if open_index != closed_index:
        raise BVError(
            f"index mismatch after contraction: {sorted(open_index)} "
            f"vs {sorted(closed_index)}"
        )
    return A, opened


def check_cube_laws(T: Tree, variant: str = CLOSED, rng=None) -> int:
    """Exhaustively check unit, associativity and equivariance laws on
    all 0/1 cube vertices of every profile of ``T``; with ``rng``, also
    on one random rational point per profile.  Raises :class:`BVError`
    on the first violation, returns the number of composites checked.
    """
    by_output: dict[str, list[CubeOperation]] = {}
    for (inputs, out), _ in profile_table(T, variant):
        ops = list(vertex_operations(T, inputs, out, variant))
        if rng is not None:
            coords = {
                e: Fraction(rng.randrange(0, 7), 6)
                for e in cube_index(T, inputs, out, variant)
            }
            ops.append(CubeOperation.create(T, inputs, out, coords, variant))
        by_output.setdefault(out, []).extend(ops)
    everything = [op for ops in by_output.values() for op in ops]
    checked = 0
    for f in everything:
        for i, e in enumerate(f.inputs, start=1):
            if f.compose(i, CubeOperation.unit(T, e, variant)) != f:
                raise BVError(f"right unit law fails at {f.profile} slot {i}")
        if CubeOperation.unit(T, f.output, variant).compose(1, f) != f:
            raise BVError(f"left unit law fails at {f.profile}")
        for i in range(1, len(f.inputs) + 1):
            for g in by_output.get(f.inputs[i - 1], ()):
                fg = f.compose(i, g)
                checked += 1
                _check_equivariant(f, i, g, fg)
                # sequential substitution into the grafted factor
                for k in range(1, len(g.inputs) + 1):
                    for h in by_output.get(g.inputs[k - 1], ()):
                        if fg.compose(i - 1 + k, h) != f.compose(i, g.compose(k, h)):
                            raise BVError(
                                f"associativity fails at {f.profile} "
                                f"{g.profile} {h.profile}"
                            )
                        checked += 1
                # parallel substitution into a later slot of f
                for j in range(i + 1, len(f.inputs) + 1):
                    for h in by_output.get(f.inputs[j - 1], ()):
                        lhs = fg.compose(j + len(g.inputs) - 1, h)
                        rhs = f.compose(j, h).compose(i, g)
                        if lhs != rhs:
                            raise BVError(
                                f"parallel substitution fails at {f.profile} "
                                f"{g.profile} {h.profile}"
                            )
                        checked += 1
    return checked


def _check_equivariant(f: CubeOperation, i: int, g: CubeOperation, fg) -> None:
    from itertools import permutations

    n = len(f.inputs)
    for s in permutations(range(n)):
        j = s.index(i - 1) + 1
        lhs = f.act(s).compose(j, g)
        expected = (
            f.act(s).inputs[: j - 1] + g.inputs + f.act(s).inputs[j:]
        )
        if dict(lhs.coords) != dict(fg.coords) or lhs.inputs != expected:
            raise BVError(f"equivariance fails at {f.profile} perm {s}")


# -- the interval-closure tower ----------------------------------------------
#
# The endomorphism space of an interval endpoint is a growing union of
# cubes, one per stage; the stage-k cube has dimension 2k - 1 and is
# glued along the subspace where some coordinate vanishes.  A vanishing
# coordinate collapses into the previous cube by one of three rules:
# dropping a prefix or suffix pair, or joining the two neighbours of an
# interior zero.


@dataclass(frozen=True)
class TowerStage:
    dim: int

    def alpha(self, coords, at: int | None = None) -> tuple[Fraction, ...]:
        """Collapse one zero coordinate (1-based position ``at``,
        default the leftmost zero) into the previous stage's cube."""
        ts = tuple(Fraction(v) for v in coords)
        if len(ts) != self.dim:
            raise BVError(f"expected {self.dim} coordinates, got {len(ts)}")
        if at is None:
            at = next((i + 1 for i, v in enumerate(ts) if v == 0), 0)
        if not 1 <= at <= self.dim or ts[at - 1] != 0:
            raise BVError("the collapse position must hold a zero")
        if at == 1:
            return ts[2:]
        if at == self.dim:
            return ts[:-2]
        return ts[: at - 2] + (max(ts[at - 2], ts[at]),) + ts[at + 1 :]


def interval_cube_tower(n: int) -> tuple[TowerStage, ...]:
    """Stages of the endpoint-endomorphism tower: cubes of dimensions
    1, 3, ..., 2n - 1 over the initial point."""
    if n < 1:
        raise BVError("the tower needs at least one stage")
    return tuple(TowerStage(2 * k - 1) for k in range(1, n + 1))


def tower_normal_form(coords) -> tuple[Fraction, ...]:
    """Fully collapse zeros, always at the leftmost position; the result
    is zero-free (possibly the empty tuple, the base point)."""
    ts = tuple(Fraction(v) for v in coords)
    while any(v == 0 for v in ts):
        ts = TowerStage(len(ts)).alpha(ts)
    return ts
