"""Horn-pushout certificates for the anodyne classes.

An inclusion of finite subobjects is witnessed by an ordered trace of
single-horn attachments.  Within a fixed ambient object every pushout
along a horn inclusion is a plain union, so a step is checkable: the
running union must meet the members of the attached dendrex in exactly
the horn omitting one declared face.  The omitted face arrives together
with the attachment; every other face must already be present.

Step classes:

* ``via``: closed shape, omitted face contracts a very inner edge.
* ``inner-anodyne``: omitted face contracts any inner edge.
* ``root-horn``: omitted face is the unary root face.  Checked like the
  others but it lies outside the via class, and a certificate containing
  one is classified separately.

Builders cover multi-edge very inner horns, horns with extra omitted
inner faces, spine inclusions, tensor corner maps, partial horns missing
some stumps, grafting closures, and the tower of capped alternating
interval chains.  All of them drive one engine,
:func:`attach_along_missing`, which attaches a target dendrex after
recursively attaching whatever faces are still missing.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .catalog import linear_open
from .dendsets import (
    FinDendSet,
    LabeledDendrex,
    members,
    representable,
)
from .faces import (
    FaceIndex,
    boundary,
    dendrex_faces,
    dendrex_horn_members,
    horn,
    is_very_inner,
)
from .faces import spine as spine_of
from .tensor import shuffle_ranks, tensor_sets, tensor_trees
from .trees import Tree, closure, contract, linear_closed

VIA = "via"
INNER = "inner-anodyne"
ROOT_HORN = "root-horn"
_CLASSES = (VIA, INNER, ROOT_HORN)


class CertBuildError(ValueError):
    """A builder's side condition failed or its induction got stuck."""


@dataclass(frozen=True)
class CertStep:
    """One horn attachment: a dendrex, the omitted face, and the class
    the step claims."""

    dendrex: LabeledDendrex
    omit: tuple[FaceIndex, ...]
    step_class: str

    def to_json_obj(self) -> dict:
        obj = self.dendrex.to_json_obj()
        obj["omit"] = [list(idx) for idx in self.omit]
        obj["class"] = self.step_class
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CertStep":
        dendrex = LabeledDendrex.from_json_obj(obj)
        omit = tuple((k, n) for k, n in obj["omit"])
        return cls(dendrex, omit, obj["class"])


@dataclass(frozen=True)
class AnodyneCertificate:
    """An ordered trace of attachments from ``start`` up to ``end``.

    ``prelims`` are boundary pushouts performed before the horn steps;
    the grafting builder uses them to cap leaves.  ``end`` may be None,
    in which case the final union is only reported, not compared; the
    serialized form never carries it.
    """

    ambient: FinDendSet
    start: FinDendSet
    steps: tuple[CertStep, ...]
    prelims: tuple[LabeledDendrex, ...] = ()
    end: FinDendSet | None = None

    @property
    def overall_class(self) -> str:
        classes = {s.step_class for s in self.steps}
        if ROOT_HORN in classes:
            return ROOT_HORN
        return VIA if classes <= {VIA} else INNER

    def to_json_obj(self) -> dict:
        obj = {
            "ambient": self.ambient.to_json_obj(),
            "start": self.start.to_json_obj(),
            "steps": [s.to_json_obj() for s in self.steps],
        }
        if self.prelims:
            obj["prelims"] = [p.to_json_obj() for p in self.prelims]
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "AnodyneCertificate":
        return cls(
            FinDendSet.from_json_obj(obj["ambient"]),
            FinDendSet.from_json_obj(obj["start"]),
            tuple(CertStep.from_json_obj(s) for s in obj["steps"]),
            tuple(LabeledDendrex.from_json_obj(p) for p in obj.get("prelims", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "AnodyneCertificate":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    reason: str = ""
    step: int | None = None
    prelim: int | None = None
    end: FinDendSet | None = None


def verify(cert: AnodyneCertificate) -> VerifyReport:
    """Check every attachment against the running union.

    Failure is a report, not an exception: the first failing step (or
    preliminary attachment) is pinpointed, with the union accumulated up
    to that point in ``end``.
    """
    site = cert.ambient.site
    tag = cert.ambient.ambient

    def fail(reason, current, step=None, prelim=None):
        return VerifyReport(False, reason, step, prelim, FinDendSet(site, current, tag))

    if cert.start.site != site:
        return fail("start and ambient sites differ", {})
    if not cert.start.issubset(cert.ambient):
        return fail("start is not contained in the ambient", dict(cert.start.members))

    current = dict(cert.start.members)
    for i, p in enumerate(cert.prelims):
        if p.key not in cert.ambient.members:
            return fail("attachment lies outside the ambient", current, prelim=i)
        if p.key in current:
            return fail("attached dendrex is already present", current, prelim=i)
        mem = members(p, site)
        have = {k for k in mem if k in current}
        if have != set(mem) - {p.key}:
            return fail("not a boundary pushout", current, prelim=i)
        current.update(mem)

    for i, s in enumerate(cert.steps):
        R = s.dendrex
        if s.step_class not in _CLASSES:
            return fail(f"unknown step class {s.step_class!r}", current, step=i)
        if len(s.omit) != 1:
            return fail("omit must be a single face; expand macro steps", current, step=i)
        kind, name = s.omit[0]
        if s.step_class == VIA:
            if kind != "inner" or not R.shape.is_closed or not is_very_inner(R.shape, name):
                return fail(
                    "class via needs a closed shape and a very inner omitted edge",
                    current,
                    step=i,
                )
        elif s.step_class == INNER:
            if kind != "inner":
                return fail("class inner-anodyne omits an inner face", current, step=i)
        elif kind != "root":
            return fail("class root-horn omits the root face", current, step=i)
        if R.key in current:
            return fail("attached dendrex is already present", current, step=i)
        if R.key not in cert.ambient.members:
            return fail("attachment lies outside the ambient", current, step=i)
        try:
            horn_mem = dendrex_horn_members(R, [s.omit[0]], site)
        except ValueError as exc:
            return fail(str(exc), current, step=i)
        mem = members(R, site)
        have = {k for k in mem if k in current}
        if have != horn_mem.keys():
            return fail(
                "intersection with the running union is not the declared horn",
                current,
                step=i,
            )
        current.update(mem)

    final = FinDendSet(site, current, tag)
    if cert.end is not None and final != cert.end:
        return fail("final union differs from the declared end", current)
    return VerifyReport(True, "", None, None, final)


def concatenate(first: AnodyneCertificate, second: AnodyneCertificate) -> AnodyneCertificate:
    """Join two certificates whose end and start agree."""
    if first.end is None:
        raise ValueError("the first certificate does not declare its end")
    if second.prelims:
        raise ValueError("cannot concatenate past preliminary attachments")
    if first.end != second.start:
        raise ValueError("certificates do not abut")
    return AnodyneCertificate(
        first.ambient.union(second.ambient),
        first.start,
        first.steps + second.steps,
        first.prelims,
        second.end,
    )


# -- the attachment engine ---------------------------------------------------


def attach_along_missing(
    current: dict[str, LabeledDendrex],
    target: LabeledDendrex,
    site: str,
    step_class: str,
) -> list[CertStep]:
    """Attach ``target`` to the running union by single-horn steps.

    Finds the faces of ``target`` whose sources are absent, keeps one of
    them as the omitted face (the least missing very inner face when one
    exists, otherwise the least missing inner face), recursively
    attaches the sources of the others, and emits the step for
    ``target`` itself after checking the horn condition.  ``current`` is
    updated in place.  Raises :class:`CertBuildError` when no face can
    be kept or the intersection fails, leaving ``current`` partially
    extended.

    The other missing faces are attached in rounds: one may only become
    attachable after a second arrives as the omitted face of a third, so
    a failed attempt is rolled back and retried once the round makes
    progress.
    """
    if target.key in current:
        return []
    faces = dendrex_faces(target, site)
    missing = [(idx, src) for idx, src in faces if src.key not in current]
    if not missing:
        raise CertBuildError(f"every face of {target.key} is already present")
    kept = _pick_kept(target, missing, step_class)
    steps: list[CertStep] = []
    # tops before the root face before inner faces, matching the order
    # the filtrations are stated in
    pending = [
        src
        for idx, src in sorted(missing, key=lambda it: it[0], reverse=True)
        if idx != kept
    ]
    while pending:
        stalled = []
        failure = None
        for src in pending:
            snapshot = dict(current)
            try:
                steps.extend(attach_along_missing(current, src, site, step_class))
            except CertBuildError as err:
                current.clear()
                current.update(snapshot)
                stalled.append(src)
                failure = err
        if len(stalled) == len(pending):
            raise failure
        pending = stalled
    mem = members(target, site)
    horn_mem = dendrex_horn_members(target, [kept], site)
    have = {k for k in mem if k in current}
    if have != horn_mem.keys():
        raise CertBuildError(f"attaching {target.key} along {kept} is not a horn pushout")
    steps.append(CertStep(target, (kept,), step_class))
    current.update(mem)
    return steps


def _pick_kept(target, missing, step_class) -> FaceIndex:
    inner = [idx for idx, _ in missing if idx[0] == "inner"]
    very = [idx for idx in inner if is_very_inner(target.shape, idx[1])]
    if step_class == VIA:
        if not very or not target.shape.is_closed:
            raise CertBuildError(f"no very inner face is missing from {target.key}")
        return min(very)
    if not inner:
        raise CertBuildError(f"no inner face is missing from {target.key}")
    return min(very) if very else min(inner)


def _certificate(ambient, start, steps, prelims=()) -> AnodyneCertificate:
    return AnodyneCertificate(ambient, start, tuple(steps), tuple(prelims), ambient)


# -- builders, closed site ---------------------------------------------------


def multi_horn_certificate(T: Tree, edges) -> AnodyneCertificate:
    """Fill the closed-site horn omitting the inner faces at a nonempty
    set of very inner edges."""
    E = sorted(set(edges))
    if not E:
        raise CertBuildError("need at least one edge")
    if not T.is_closed:
        raise CertBuildError("multi-horn certificates live in the closed site")
    for e in E:
        if not is_very_inner(T, e):
            raise CertBuildError(f"{e!r} is not very inner")
    start = horn(T, [("inner", e) for e in E], "closed")
    ambient = representable(T, "closed")
    current = dict(start.members)
    steps = attach_along_missing(current, LabeledDendrex.identity(T), "closed", VIA)
    return _certificate(ambient, start, steps)


def _extension_violation(T: Tree, E: list[str], D: list[str]) -> str | None:
    if not E:
        return "need at least one edge"
    if not T.is_closed:
        return "extended-horn certificates live in the closed site"
    for e in E:
        if not is_very_inner(T, e):
            return f"{e!r} is not very inner"
    for d in D:
        if d in E:
            return f"{d!r} appears on both sides"
        if not T.is_inner(d):
            return f"{d!r} is not inner"
        for e in E:
            if d in T.nodes[e]:
                return f"{d!r} sits immediately above {e!r}"
    if len(T.nodes[T.root]) > 1:
        for n in range(1, len(D) + 1):
            for sub in itertools.combinations(D, n):
                collapsed = contract(T, sub)
                if len(collapsed.nodes[collapsed.root]) == 1:
                    return (
                        f"contracting {list(sub)} leaves a unary root vertex, "
                        "whose root face the horn lacks"
                    )
    return None


def extended_horn_admissible(T: Tree, edges, extra) -> bool:
    """Whether :func:`extended_horn_certificate` accepts the pair."""
    return _extension_violation(T, sorted(set(edges)), sorted(set(extra))) is None


def extended_horn_certificate(T: Tree, edges, extra) -> AnodyneCertificate:
    """Like :func:`multi_horn_certificate`, but the horn additionally
    omits the inner faces at ``extra``.

    The extra edges must be inner, disjoint from the filled set, and
    none may sit immediately above a filled edge; contracting one would
    otherwise plant a stump on it.  No subset of them may contract the
    root vertex down to a single input either, unless it already has
    one.  Such a contraction creates a root face that the horn does not
    contain, and the inclusion genuinely fails to be via: a nerve can
    fill every very inner horn yet leave this one unfilled.
    """
    E = sorted(set(edges))
    D = sorted(set(extra))
    reason = _extension_violation(T, E, D)
    if reason is not None:
        raise CertBuildError(reason)
    start = horn(T, [("inner", x) for x in E + D], "closed")
    ambient = representable(T, "closed")
    current = dict(start.members)
    steps = attach_along_missing(current, LabeledDendrex.identity(T), "closed", VIA)
    return _certificate(ambient, start, steps)


def spine_certificate(T: Tree) -> AnodyneCertificate:
    """Fill a closed tree from its spine.

    Every member is completed only after its faces at non-very-inner
    indices are, so each attachment reduces to very inner horns.
    """
    if not T.is_closed:
        raise CertBuildError("spine certificates live in the closed site")
    start = spine_of(T, "closed")
    ambient = representable(T, "closed")
    current = dict(start.members)

    def complete(d: LabeledDendrex) -> list[CertStep]:
        if d.key in current:
            return []
        out: list[CertStep] = []
        for idx, src in sorted(dendrex_faces(d, "closed"), key=lambda it: it[0]):
            if idx[0] == "inner" and is_very_inner(d.shape, idx[1]):
                continue
            out.extend(complete(src))
        out.extend(attach_along_missing(current, d, "closed", VIA))
        return out

    steps = complete(LabeledDendrex.identity(T))
    return _certificate(ambient, start, steps)


def corner_certificate(S: Tree, e: str, T: Tree) -> AnodyneCertificate:
    """Fill the corner of a very inner horn of S tensored with the
    closed boundary of T.

    Runs over the shuffles of S with T in percolation order.  In each
    shuffle the special edges are the copies of ``e`` followed upward by
    a vertex of S; the faces contracting every non-special inner edge
    outside a set H are attached by growing H one edge at a time.
    """
    if not (S.is_closed and T.is_closed):
        raise CertBuildError("corner certificates need closed factors")
    if not is_very_inner(S, e):
        raise CertBuildError(f"{e!r} is not very inner")
    full = tensor_trees(S, T)
    left = tensor_sets(horn(S, [("inner", e)], "closed"), representable(T, "closed"))
    right = tensor_sets(representable(S, "closed"), boundary(T, "closed"))
    start = FinDendSet("closed", {**left.members, **right.members}, full.ambient)
    current = dict(start.members)
    steps: list[CertStep] = []
    for _rank, R in shuffle_ranks([S, T]):
        special = {
            n for n in R.shape.nodes if R.labels[n][0] == e and _advances_first(R, n)
        }
        rest = sorted(n for n in R.shape.inner_edges if n not in special)
        for H in _subsets_by_size(rest):
            away = set(rest) - set(H)
            shape = contract(R.shape, away) if away else R.shape
            dx = LabeledDendrex(shape, {n: R.labels[n] for n in shape.nodes})
            if dx.key in current:
                continue
            steps.extend(attach_along_missing(current, dx, "closed", VIA))
    if current.keys() != full.members.keys():
        raise CertBuildError("shuffle filtration did not exhaust the tensor")
    return _certificate(full, start, steps)


def _advances_first(R: LabeledDendrex, n: str) -> bool:
    kids = R.shape.nodes[n]
    return bool(kids) and R.labels[kids[0]][0] != R.labels[n][0]


def _subsets_by_size(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


# -- builders, all-trees site ------------------------------------------------


def partial_horn_certificate(S: Tree, e: str, missing_stumps=()) -> AnodyneCertificate:
    """Fill the subobject omitting one inner face and the top faces at
    the given stumps, in the site of all trees.

    Each missing stump is named by its output edge, which must differ
    from the filled edge: a stump sitting immediately on it would turn
    it into a leaf in the face that the induction adjoins first.
    """
    stumps = sorted(set(missing_stumps))
    if not S.is_inner(e):
        raise CertBuildError(f"{e!r} is not inner")
    for f in stumps:
        if S.nodes.get(f) != ():
            raise CertBuildError(f"no stump sits on {f!r}")
        if f == e:
            raise CertBuildError(f"the stump on {f!r} sits immediately above the filled edge")
    omit = [("inner", e)] + [("top", f) for f in stumps]
    start = horn(S, omit, "all")
    ambient = representable(S, "all")
    current = dict(start.members)
    steps = attach_along_missing(current, LabeledDendrex.identity(S), "all", INNER)
    return _certificate(ambient, start, steps)


def grafting_certificate(S: Tree) -> AnodyneCertificate:
    """Factor a tree's closure: preliminary boundary pushouts cap every
    leaf, then inner horns at the capped edges fill the rest.

    A member of the closure qualifies for direct attachment when it
    shows some capped leaf with its stump and a vertex below; everything
    else arrives as an omitted face.  Members are attached smallest
    first, rescanning until the pool is exhausted, since an attachment
    can unlock earlier skips.
    """
    Sbar = closure(S)
    ambient = representable(Sbar, "all")
    ident = LabeledDendrex.identity(S)
    start = FinDendSet("all", members(ident, "all"), ambient.ambient)
    prelims = tuple(
        LabeledDendrex(Tree(l, {l: ()}), {l: l}) for l in sorted(S.leaves)
    )
    current = dict(start.members)
    for p in prelims:
        current.update(members(p, "all"))
    leaves = set(S.leaves)
    pool = [
        m
        for k, m in sorted(ambient.members.items())
        if k not in current and _shows_capped_leaf(m, leaves)
    ]
    pool.sort(key=lambda m: (m.size(), len(m.shape.vertices), m.key))
    steps: list[CertStep] = []
    progress = True
    while progress:
        progress = False
        for m in pool:
            if m.key in current:
                continue
            miss = [
                (idx, src)
                for idx, src in dendrex_faces(m, "all")
                if src.key not in current
            ]
            if len(miss) != 1 or miss[0][0][0] != "inner":
                continue
            steps.extend(attach_along_missing(current, m, "all", INNER))
            progress = True
    if current.keys() != ambient.members.keys():
        raise CertBuildError("grafting filtration stalled")
    return _certificate(ambient, start, steps, prelims)


def _shows_capped_leaf(m: LabeledDendrex, leaves: set[str]) -> bool:
    return any(
        l in m.shape.nodes and m.shape.nodes[l] == () and l != m.shape.root
        for l in leaves
    )


def interval_tower_certificate(n: int) -> AnodyneCertificate:
    """Tower of capped alternating chains over the open ones.

    Stage m attaches the capped chain of m+1 edges, colours alternating
    with 0 on top, along the horn at its top inner edge; the omitted
    face is the capped chain starting from 1, and the root face is the
    previous stage.
    """
    if n < 1:
        raise CertBuildError("the tower needs at least one stage")
    tag = f"interval-tower:{n}"

    def chain_open(k: int, phase: int) -> LabeledDendrex:
        shape = linear_open(k)
        return LabeledDendrex(shape, {str(j): str((k - j + phase) % 2) for j in range(k + 1)})

    def chain_capped(m: int) -> LabeledDendrex:
        shape = linear_closed(m)
        return LabeledDendrex(shape, {str(j): str((m - j) % 2) for j in range(m + 1)})

    opens = [chain_open(k, p) for k in range(n + 1) for p in (0, 1)]
    mem: dict[str, LabeledDendrex] = {}
    for d in opens + [chain_capped(0)]:
        mem.update(members(d, "all"))
    start = FinDendSet("all", mem, tag)
    current = dict(mem)
    steps: list[CertStep] = []
    for m in range(1, n + 1):
        new = attach_along_missing(current, chain_capped(m), "all", INNER)
        if len(new) != 1 or new[0].omit != (("inner", str(m)),):
            raise CertBuildError("tower stage did not reduce to its top inner horn")
        steps.extend(new)
    ambient = FinDendSet("all", current, tag)
    return _certificate(ambient, start, steps)


# -- goal dispatch ------------------------------------------------------------

_VIA_GOALS = {
    "multi-horn": multi_horn_certificate,
    "extended-horn": extended_horn_certificate,
    "spine": spine_certificate,
    "corner": corner_certificate,
}

_INNER_GOALS = {
    "partial-horn": partial_horn_certificate,
    "grafting": grafting_certificate,
    "interval-tower": interval_tower_certificate,
}


def build_via(goal: str, *args, **kwargs) -> AnodyneCertificate:
    """Build a certificate for one of the closed-site goals:
    multi-horn, extended-horn, spine, or corner."""
    try:
        fn = _VIA_GOALS[goal]
    except KeyError:
        raise CertBuildError(f"unknown via goal {goal!r}; have {sorted(_VIA_GOALS)}") from None
    return fn(*args, **kwargs)


def build_inner_anodyne(goal: str, *args, **kwargs) -> AnodyneCertificate:
    """Build a certificate for one of the all-trees goals: partial-horn,
    grafting, or interval-tower."""
    try:
        fn = _INNER_GOALS[goal]
    except KeyError:
        raise CertBuildError(
            f"unknown inner-anodyne goal {goal!r}; have {sorted(_INNER_GOALS)}"
        ) from None
    return fn(*args, **kwargs)
