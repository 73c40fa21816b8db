"""Finite symmetric coloured operads in sets.

Operations live in finite sets indexed by signatures (input colours,
output colour), with explicit unit, substitution, and symmetric-action
structure, all bounded by a maximal arity.  A signature not listed is
empty; a signature beyond the arity bound is undefined and raises.

The module provides the three adjunctions between open operads (no
nullary operations) and closed ones (exactly one constant per colour):
restriction, the closed coreflection with its unit and retraction, and
the bounded closure computed as a truncated colimit with a
stabilization report.  On top of these sit matching objects and their
comparison maps, corolla operads with boundaries and pushforwards, the
black/white-tree enumeration describing operation-adjoining pushouts,
and dendroidal nerves with face restriction and horn filling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .dendsets import LabeledDendrex, members
from .faces import Face, elementary_faces
from .trees import Tree

Perm = tuple[int, ...]
Signature = tuple[tuple[str, ...], str]


class OperadError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Operation:
    """One operation: input colours, output colour, and a name unique
    within its signature."""

    inputs: tuple[str, ...]
    output: str
    name: str

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def signature(self) -> Signature:
        return (self.inputs, self.output)


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose_perm(s: Perm, t: Perm) -> Perm:
    # act(act(p, s), t) == act(p, compose_perm(s, t))
    return tuple(s[t[i]] for i in range(len(t)))


def _splice(outer: tuple, i: int, inner: tuple) -> tuple:
    return outer[: i - 1] + inner + outer[i:]


class FiniteOperad:
    """Finite coloured operad with explicit operation tables.

    ``ops`` maps signatures to operation tuples; ``compose`` and ``act``
    are callables realizing substitution and the symmetric action, and
    the action is materialized into a full table on construction.
    Substitution is single-slot (position is 1-based); simultaneous
    composition is derived from it.
    """

    def __init__(self, colours, ops, units, compose, act, arity_bound, *, validate=True):
        self.colours = tuple(sorted(set(colours)))
        self.arity_bound = arity_bound
        self._ops: dict[Signature, tuple[Operation, ...]] = {}
        for sig, items in ops.items():
            if len(sig[0]) > arity_bound:
                raise OperadError(f"signature {sig} exceeds the arity bound")
            if items:
                self._ops[sig] = tuple(sorted(items))
        self._opset = {p for items in self._ops.values() for p in items}
        self.units = dict(units)
        self._compose = compose
        self._sym: dict[tuple[Operation, Perm], Operation] = {}
        for p in sorted(self._opset):
            for perm in itertools.permutations(range(p.arity)):
                q = act(p, perm)
                self._sym[(p, perm)] = q
                if validate and (
                    q not in self._opset
                    or q.output != p.output
                    or q.inputs != tuple(p.inputs[perm[t]] for t in range(p.arity))
                ):
                    raise OperadError(f"symmetric action leaves the operad at {p} {perm}")
        if validate:
            for c in self.colours:
                u = self.units[c]
                if u not in self.ops((c,), c):
                    raise OperadError(f"unit of {c!r} is not a unary operation")

    def ops(self, inputs, output) -> tuple[Operation, ...]:
        inputs = tuple(inputs)
        if len(inputs) > self.arity_bound:
            raise OperadError(f"arity {len(inputs)} exceeds the bound {self.arity_bound}")
        return self._ops.get((inputs, output), ())

    def signatures(self) -> list[Signature]:
        return sorted(self._ops)

    def op_table(self) -> dict[Signature, tuple[str, ...]]:
        return {sig: tuple(p.name for p in items) for sig, items in sorted(self._ops.items())}

    def compose(self, p: Operation, i: int, q: Operation) -> Operation:
        if not 1 <= i <= p.arity:
            raise OperadError(f"no input slot {i} on {p.name}")
        if q.output != p.inputs[i - 1]:
            raise OperadError(f"colour mismatch substituting {q.name} into {p.name}")
        if p.arity + q.arity - 1 > self.arity_bound:
            raise OperadError("composite exceeds the arity bound")
        r = self._compose(p, i, q)
        if r not in self._opset or r.inputs != _splice(p.inputs, i, q.inputs):
            raise OperadError(f"composition left the operad at {p.name} o_{i} {q.name}")
        return r

    def act(self, p: Operation, perm: Perm) -> Operation:
        return self._sym[(p, perm)]

    def unit(self, c: str) -> Operation:
        return self.units[c]

    @property
    def is_closed(self) -> bool:
        return all(len(self.ops((), c)) == 1 for c in self.colours)

    @property
    def is_open(self) -> bool:
        return all(len(self.ops((), c)) == 0 for c in self.colours)

    def constant(self, c: str) -> Operation:
        nullary = self.ops((), c)
        if len(nullary) != 1:
            raise OperadError(f"colour {c!r} has no unique constant")
        return nullary[0]

    def all_operations(self) -> list[Operation]:
        return sorted(self._opset)

    def to_json_obj(self) -> dict:
        comp = []
        for p in self.all_operations():
            for i in range(1, p.arity + 1):
                for sig in self.signatures():
                    if sig[1] != p.inputs[i - 1]:
                        continue
                    for q in self._ops[sig]:
                        if p.arity + q.arity - 1 > self.arity_bound:
                            continue
                        r = self.compose(p, i, q)
                        comp.append([_op_ref(p), i, _op_ref(q), _op_ref(r)])
        return {
            "colours": list(self.colours),
            "arity_bound": self.arity_bound,
            "operations": [_op_ref(p) for p in self.all_operations()],
            "units": {c: u.name for c, u in sorted(self.units.items())},
            "symmetries": [
                [_op_ref(p), list(perm), _op_ref(q)]
                for (p, perm), q in sorted(self._sym.items())
                if perm != identity_perm(p.arity)
            ],
            "composition": comp,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FiniteOperad":
        ops: dict[Signature, list[Operation]] = {}
        for ref in obj["operations"]:
            p = _op_unref(ref)
            ops.setdefault(p.signature, []).append(p)
        units = {c: Operation((c,), c, name) for c, name in obj["units"].items()}
        comp_table = {
            (_op_unref(p), i, _op_unref(q)): _op_unref(r)
            for p, i, q, r in obj["composition"]
        }
        sym_table = {
            (_op_unref(p), tuple(perm)): _op_unref(q)
            for p, perm, q in obj["symmetries"]
        }

        def compose(p, i, q):
            return comp_table[(p, i, q)]

        def act(p, perm):
            if perm == identity_perm(p.arity):
                return p
            return sym_table[(p, perm)]

        return cls(obj["colours"], ops, units, compose, act, obj["arity_bound"])


def _op_ref(p: Operation) -> list:
    return [list(p.inputs), p.output, p.name]


def _op_unref(ref) -> Operation:
    return Operation(tuple(ref[0]), ref[1], ref[2])


# -- the axiom checker -------------------------------------------------------


def check_axioms(P: FiniteOperad) -> None:
    """Exhaustively check unit, associativity, symmetric-group-action
    and equivariance laws, skipping composites beyond the arity bound.
    Raises :class:`OperadError` on the first violation."""
    ops = P.all_operations()
    for p in ops:
        n = p.arity
        if P.act(p, identity_perm(n)) != p:
            raise OperadError(f"identity permutation moves {p.name}")
        for s in itertools.permutations(range(n)):
            for t in itertools.permutations(range(n)):
                if P.act(P.act(p, s), t) != P.act(p, compose_perm(s, t)):
                    raise OperadError(f"action is not functorial at {p.name}")
        for i in range(1, n + 1):
            if P.compose(p, i, P.unit(p.inputs[i - 1])) != p:
                raise OperadError(f"right unit law fails at {p.name} slot {i}")
        if P.compose(P.unit(p.output), 1, p) != p:
            raise OperadError(f"left unit law fails at {p.name}")
    pairs = [
        (p, i, q)
        for p in ops
        for i in range(1, p.arity + 1)
        for q in ops
        if q.output == p.inputs[i - 1] and p.arity + q.arity - 1 <= P.arity_bound
    ]
    for p, i, q in pairs:
        pq = P.compose(p, i, q)
        n, m = p.arity, q.arity
        for j in range(1, pq.arity + 1):
            for r in ops:
                if r.output != pq.inputs[j - 1] or pq.arity + r.arity - 1 > P.arity_bound:
                    continue
                left = P.compose(pq, j, r)
                if j < i:
                    if p.arity + r.arity - 1 <= P.arity_bound:
                        right = P.compose(P.compose(p, j, r), i + r.arity - 1, q)
                        if left != right:
                            raise OperadError(f"associativity fails below slot at {p.name}")
                elif j <= i + m - 1:
                    if q.arity + r.arity - 1 <= P.arity_bound:
                        right = P.compose(p, i, P.compose(q, j - i + 1, r))
                        if left != right:
                            raise OperadError(f"associativity fails inside at {p.name}")
                else:
                    if p.arity + r.arity - 1 <= P.arity_bound:
                        right = P.compose(P.compose(p, j - m + 1, r), i, q)
                        if left != right:
                            raise OperadError(f"associativity fails above slot at {p.name}")
        for s in itertools.permutations(range(n)):
            # slot j of act(p, s) carries p's slot i
            j = _invert(s)[i - 1] + 1
            lhs = P.compose(P.act(p, s), j, q)
            if lhs != P.act(pq, _block_perm_outer(s, j, m)):
                raise OperadError(f"outer equivariance fails at {p.name}")
        for t in itertools.permutations(range(m)):
            inner = _block_perm_inner(n, i, t)
            if P.act(pq, inner) != P.compose(p, i, P.act(q, t)):
                raise OperadError(f"inner equivariance fails at {p.name}")


def _block_perm_outer(s: Perm, i: int, m: int) -> Perm:
    # act(p, s) o_i q == act(p o_{s[i-1]+1} q, this perm)
    n = len(s)
    pivot = s[i - 1]

    def shift(x):
        return x if x < pivot else x + m - 1

    out = []
    for t in range(n + m - 1):
        if t < i - 1:
            out.append(shift(s[t]))
        elif t < i - 1 + m:
            out.append(pivot + (t - (i - 1)))
        else:
            out.append(shift(s[t - m + 1]))
    return tuple(out)


def _block_perm_inner(n: int, i: int, t: Perm) -> Perm:
    m = len(t)
    out = []
    for u in range(n + m - 1):
        if u < i - 1 or u >= i - 1 + m:
            out.append(u)
        else:
            out.append(i - 1 + t[u - (i - 1)])
    return tuple(out)


def _invert(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


# -- operad maps -------------------------------------------------------------


@dataclass(frozen=True)
class OperadMap:
    """Map of operads: a colour function and an operation function,
    which must preserve units, constants, substitution and the
    symmetric actions."""

    source: FiniteOperad
    target: FiniteOperad
    colour_map: dict
    op_map: dict

    def apply(self, p: Operation) -> Operation:
        return self.op_map[p]

    def then(self, other: "OperadMap") -> "OperadMap":
        return OperadMap(
            self.source,
            other.target,
            {c: other.colour_map[v] for c, v in self.colour_map.items()},
            {p: other.op_map[q] for p, q in self.op_map.items()},
        )

    def is_identity(self) -> bool:
        return all(c == v for c, v in self.colour_map.items()) and all(
            p == q for p, q in self.op_map.items()
        )

    def validate(self, *, nullary_composition=True) -> None:
        """Check the map preserves the whole structure, raising on the
        first violation.  ``nullary_composition=False`` skips
        substitution of constants, the one composition a levelwise
        retraction of the closed-coreflection unit does not respect."""
        P, Q = self.source, self.target
        for p in P.all_operations():
            q = self.op_map[p]
            if q.inputs != tuple(self.colour_map[c] for c in p.inputs):
                raise OperadError(f"map breaks the signature of {p.name}")
            if q.output != self.colour_map[p.output]:
                raise OperadError(f"map breaks the output of {p.name}")
            for perm in itertools.permutations(range(p.arity)):
                if self.op_map[P.act(p, perm)] != Q.act(q, perm):
                    raise OperadError(f"map breaks the action at {p.name}")
        for c in P.colours:
            if self.op_map[P.unit(c)] != Q.unit(self.colour_map[c]):
                raise OperadError(f"map breaks the unit of {c!r}")
        if P.is_closed and Q.is_closed:
            for c in P.colours:
                if self.op_map[P.constant(c)] != Q.constant(self.colour_map[c]):
                    raise OperadError(f"map breaks the constant of {c!r}")
        for p in P.all_operations():
            for i in range(1, p.arity + 1):
                for sig in P.signatures():
                    if sig[1] != p.inputs[i - 1]:
                        continue
                    if not sig[0] and not nullary_composition:
                        continue
                    for q in P.ops(*sig):
                        if p.arity + q.arity - 1 > P.arity_bound:
                            continue
                        lhs = self.op_map[P.compose(p, i, q)]
                        rhs = Q.compose(self.op_map[p], i, self.op_map[q])
                        if lhs != rhs:
                            raise OperadError(f"map breaks composition at {p.name}")


# -- basic builders ----------------------------------------------------------


def terminal_closed(colours=("*",), arity_bound=4) -> FiniteOperad:
    """The closed operad with a single operation in every signature."""
    colours = tuple(sorted(set(colours)))
    ops = {}
    for n in range(arity_bound + 1):
        for inputs in itertools.product(colours, repeat=n):
            for c in colours:
                ops[(inputs, c)] = [Operation(inputs, c, "*")]
    units = {c: Operation((c,), c, "*") for c in colours}

    def compose(p, i, q):
        return Operation(_splice(p.inputs, i, q.inputs), p.output, "*")

    def act(p, perm):
        return Operation(tuple(p.inputs[perm[t]] for t in range(p.arity)), p.output, "*")

    return FiniteOperad(colours, ops, units, compose, act, arity_bound)


def initial_closed(colours=("0",), arity_bound=3) -> FiniteOperad:
    """Units and one constant per colour, nothing else.  On a single
    colour this is the smallest unital operad."""
    colours = tuple(sorted(set(colours)))
    ops = {}
    units = {}
    for c in colours:
        units[c] = Operation((c,), c, "1")
        ops[((c,), c)] = [units[c]]
        ops[((), c)] = [Operation((), c, "o")]

    def compose(p, i, q):
        return q if p.name == "1" else p

    def act(p, perm):
        return p

    return FiniteOperad(colours, ops, units, compose, act, arity_bound)


def restrict_open(Q: FiniteOperad) -> FiniteOperad:
    """Forget the constants of a closed operad."""
    if not Q.is_closed:
        raise OperadError("restriction to the open part needs a closed operad")
    ops = {sig: items for sig, items in ((s, Q.ops(*s)) for s in Q.signatures()) if sig[0]}
    return FiniteOperad(
        Q.colours, ops, Q.units, Q.compose, Q.act, Q.arity_bound, validate=False
    )


def pullback_colours(Q: FiniteOperad, f: dict, colours) -> FiniteOperad:
    """Reindex an operad along a colour function: an operation at a
    signature over the new colours is one at the image signature."""
    colours = tuple(sorted(set(colours)))
    if set(f) != set(colours) or not set(f.values()) <= set(Q.colours):
        raise OperadError("colour function does not match the colour sets")

    def back(p, inputs, output):
        return Operation(inputs, output, p.name)

    ops = {}
    for n in range(Q.arity_bound + 1):
        for inputs in itertools.product(colours, repeat=n):
            for c in colours:
                found = Q.ops(tuple(f[d] for d in inputs), f[c])
                if found:
                    ops[(inputs, c)] = [back(p, inputs, c) for p in found]
    units = {c: back(Q.unit(f[c]), (c,), c) for c in colours}

    def compose(p, i, q):
        r = Q.compose(
            Operation(tuple(f[d] for d in p.inputs), f[p.output], p.name),
            i,
            Operation(tuple(f[d] for d in q.inputs), f[q.output], q.name),
        )
        return back(r, _splice(p.inputs, i, q.inputs), p.output)

    def act(p, perm):
        r = Q.act(Operation(tuple(f[d] for d in p.inputs), f[p.output], p.name), perm)
        return back(r, tuple(p.inputs[perm[t]] for t in range(p.arity)), p.output)

    return FiniteOperad(colours, ops, units, compose, act, Q.arity_bound, validate=False)


def subst_constants(P: FiniteOperad, p: Operation, positions) -> Operation:
    """Substitute the constants of a closed operad into the given
    1-based input slots."""
    for i in sorted(set(positions), reverse=True):
        p = P.compose(p, i, P.constant(p.inputs[i - 1]))
    return p


# -- the closed coreflection -------------------------------------------------


def _nonempty_subsets(n: int) -> list[tuple[int, ...]]:
    out = []
    for r in range(1, n + 1):
        out.extend(itertools.combinations(range(1, n + 1), r))
    return sorted(out, key=lambda I: (len(I), I))


def _family_name(fam: dict) -> str:
    parts = [
        "".join(map(str, I)) + ":" + fam[I].name
        for I in sorted(fam, key=lambda I: (len(I), I))
    ]
    return "<" + "|".join(parts) + ">"


def coreflect_closed(P: FiniteOperad, arity_bound=None) -> FiniteOperad:
    """Best closed approximation from the right: an operation is a
    family with one coordinate in P(c_I; c) for every nonempty subset I
    of input slots, with no compatibility imposed.  Substitution acts
    coordinatewise, routing each subset through the slots it meets."""
    if not P.is_open:
        raise OperadError("the closed coreflection starts from an open operad")
    bound = P.arity_bound if arity_bound is None else arity_bound
    fams: dict[Operation, dict] = {}
    ops: dict[Signature, list[Operation]] = {}
    for n in range(bound + 1):
        for inputs in itertools.product(P.colours, repeat=n):
            for c in P.colours:
                subsets = _nonempty_subsets(n)
                factors = [P.ops(tuple(inputs[i - 1] for i in I), c) for I in subsets]
                if not all(factors):
                    continue
                here = []
                for choice in itertools.product(*factors):
                    fam = dict(zip(subsets, choice))
                    op = Operation(inputs, c, _family_name(fam))
                    fams[op] = fam
                    here.append(op)
                ops[(inputs, c)] = here

    def lookup(inputs, c, fam):
        return Operation(inputs, c, _family_name(fam))

    def compose(p, i, q):
        n, k = p.arity, q.arity
        inputs = _splice(p.inputs, i, q.inputs)
        fam: dict = {}
        for J in _nonempty_subsets(n + k - 1):
            old = []
            block = []
            for t in J:
                if t < i:
                    old.append(t)
                elif t < i + k:
                    block.append(t - i + 1)
                else:
                    old.append(t - k + 1)
            if block:
                I = tuple(sorted(old + [i]))
                pos = I.index(i) + 1
                fam[J] = P.compose(fams[p][I], pos, fams[q][tuple(block)])
            else:
                fam[J] = fams[p][tuple(old)]
        return lookup(inputs, p.output, fam)

    def act(p, perm):
        n = p.arity
        inputs = tuple(p.inputs[perm[t]] for t in range(n))
        fam = {}
        for J in _nonempty_subsets(n):
            image = tuple(sorted(perm[j - 1] + 1 for j in J))
            tau = tuple(image.index(perm[j - 1] + 1) for j in J)
            fam[J] = P.act(fams[p][image], tau)
        return lookup(inputs, p.output, fam)

    units = {}
    for c in P.colours:
        fam = {(1,): P.unit(c)}
        units[c] = Operation((c,), c, _family_name(fam))
    G = FiniteOperad(P.colours, ops, units, compose, act, bound, validate=False)
    G.families = fams
    return G


def closed_unit(Q: FiniteOperad, arity_bound=None) -> OperadMap:
    """The canonical map from a closed operad into the coreflection of
    its open part: coordinates are given by substituting constants into
    the omitted slots."""
    G = coreflect_closed(restrict_open(Q), arity_bound)
    op_map = {}
    for p in Q.all_operations():
        if p.arity > G.arity_bound:
            raise OperadError("operad exceeds the coreflection bound")
        fam = {
            I: subst_constants(Q, p, set(range(1, p.arity + 1)) - set(I))
            for I in _nonempty_subsets(p.arity)
        }
        op_map[p] = Operation(p.inputs, p.output, _family_name(fam))
    return OperadMap(Q, G, {c: c for c in Q.colours}, op_map)


def closed_retraction(Q: FiniteOperad, arity_bound=None) -> OperadMap:
    """Projection of a coreflection family onto its full-slot
    coordinate; retracts :func:`closed_unit` levelwise.

    On families outside the unit's image, projecting does not commute
    with substituting constants (validate with
    ``nullary_composition=False``); all other structure is preserved.
    """
    G = coreflect_closed(restrict_open(Q), arity_bound)
    op_map = {}
    for g in G.all_operations():
        n = g.arity
        if n == 0:
            op_map[g] = Q.constant(g.output)
        else:
            op_map[g] = G.families[g][tuple(range(1, n + 1))]
    return OperadMap(G, Q, {c: c for c in Q.colours}, op_map)


# -- the bounded closure -----------------------------------------------------


@dataclass
class ClosureReport:
    """Per-signature stabilization of the truncated closure, plus the
    class structure: a canonical representative for every class and the
    class of every enumerated extended operation."""

    stable: dict
    rep_of: dict
    class_of: dict

    @property
    def all_stable(self) -> bool:
        return all(self.stable.values())


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _closure_classes(P: FiniteOperad, sig: Signature, bound: int) -> dict:
    """Classes of operations with an extension tail of length <= bound,
    under tail permutations and substitutions into tail slots."""
    inputs, c = sig
    n = len(inputs)
    uf = _UnionFind()
    tails = [
        A
        for k in range(0, min(bound, P.arity_bound - n) + 1)
        for A in itertools.product(P.colours, repeat=k)
    ]
    for A in tails:
        for p in P.ops(inputs + A, c):
            uf.add((A, p))
    for A in tails:
        k = len(A)
        for p in P.ops(inputs + A, c):
            for perm in itertools.permutations(range(k)):
                full = identity_perm(n) + tuple(n + perm[t] for t in range(k))
                B = tuple(A[perm[t]] for t in range(k))
                uf.union((A, p), (B, P.act(p, full)))
            for j in range(1, k + 1):
                for qsig in P.signatures():
                    if qsig[1] != A[j - 1]:
                        continue
                    if k - 1 + len(qsig[0]) > bound:
                        continue
                    if n + k - 1 + len(qsig[0]) > P.arity_bound:
                        continue
                    for q in P.ops(*qsig):
                        B = _splice(A, j, q.inputs)
                        uf.union((B, P.compose(p, n + j, q)), (A, p))
    classes: dict = {}
    for x in uf.parent:
        classes.setdefault(uf.find(x), []).append(x)
    return {min(v): sorted(v) for v in classes.values()}


def closure_bounded(P: FiniteOperad, bound: int):
    """Freely cap an open operad: operations are classes of P-operations
    carrying an extension tail of colours, of length at most ``bound``,
    identified along tail permutations and substitutions.  Returns the
    closed operad and a :class:`ClosureReport` comparing against bound
    + 1.
    """
    if not P.is_open:
        raise OperadError("the bounded closure starts from an open operad")

    def class_name(sig, rep):
        A, p = rep
        return f"[{p.name}@{','.join(A)}]"

    reps: dict[Signature, dict] = {}
    ops: dict[Signature, list[Operation]] = {}
    rep_of: dict[Operation, tuple] = {}
    class_of: dict = {}
    signatures = [
        (inputs, c)
        for k in range(P.arity_bound + 1)
        for inputs in itertools.product(P.colours, repeat=k)
        for c in P.colours
    ]
    for sig in signatures:
        classes = _closure_classes(P, sig, bound)
        reps[sig] = classes
        here = []
        for rep, elems in classes.items():
            op = Operation(sig[0], sig[1], class_name(sig, rep))
            here.append(op)
            rep_of[op] = rep
            for e in elems:
                class_of[(sig, e)] = op
        if here:
            ops[sig] = here

    def compose(p, i, q):
        (A, pp), (B, qq) = rep_of[p], rep_of[q]
        n, m = p.arity, q.arity
        if len(A) + len(B) > bound:
            raise OperadError("extension tails exceed the closure bound")
        r = P.compose(pp, i, qq)
        total = n + m - 1 + len(A) + len(B)
        # move q's tail past p's remaining named inputs
        perm = (
            tuple(range(i - 1 + m))
            + tuple(i - 1 + m + len(B) + t for t in range(n - i))
            + tuple(i - 1 + m + t for t in range(len(B)))
            + tuple(range(total - len(A), total))
        )
        r = P.act(r, perm)
        return class_of[((_splice(p.inputs, i, q.inputs), p.output), (B + A, r))]

    def act(p, perm):
        A, pp = rep_of[p]
        full = tuple(perm) + tuple(p.arity + t for t in range(len(A)))
        inputs = tuple(p.inputs[perm[t]] for t in range(p.arity))
        return class_of[((inputs, p.output), (A, P.act(pp, full)))]

    units = {c: class_of[(((c,), c), ((), P.unit(c)))] for c in P.colours}
    Q = FiniteOperad(P.colours, ops, units, compose, act, P.arity_bound, validate=False)

    stable = {}
    for sig in signatures:
        bigger = _closure_classes(P, sig, bound + 1)
        small_of: dict = {}
        surjective = True
        for rep, elems in bigger.items():
            small = [e for e in elems if len(e[0]) <= bound]
            if not small:
                surjective = False
            small_of[rep] = {class_of.get((sig, e)) for e in small}
        injective = all(len(v) <= 1 for v in small_of.values())
        if reps[sig] or bigger:
            stable[sig] = surjective and injective
    return Q, ClosureReport(stable, rep_of, class_of)


def closure_unit(P: FiniteOperad, bound: int) -> OperadMap:
    """Open operad into the open part of its bounded closure: an
    operation is sent to its class with the empty tail."""
    Q, report = closure_bounded(P, bound)
    op_map = {
        p: report.class_of[(p.signature, ((), p))]
        for p in P.all_operations()
    }
    return OperadMap(P, restrict_open(Q), {c: c for c in P.colours}, op_map)


def closure_counit(Q: FiniteOperad, bound: int) -> OperadMap:
    """Bounded closure of the open part back onto a closed operad, by
    substituting constants into the extension tail."""
    if not Q.is_closed:
        raise OperadError("the closure counit lands in a closed operad")
    G, report = closure_bounded(restrict_open(Q), bound)
    op_map = {}
    for g in G.all_operations():
        A, p = report.rep_of[g]
        n = g.arity
        op_map[g] = subst_constants(Q, p, range(n + 1, n + len(A) + 1))
    return OperadMap(G, Q, {c: c for c in Q.colours}, op_map)


# -- matching objects --------------------------------------------------------


def _family_key(fam: dict) -> tuple:
    return tuple(sorted(fam.items(), key=lambda kv: (len(kv[0]), kv[0])))


def matching_object(P: FiniteOperad, sig: Signature):
    """Compatible families over the proper subsets of input slots, with
    coordinates related by constant substitution, together with the
    canonical restriction map from the full signature.  Returns the
    family keys and the map as a dict."""
    if not P.is_closed:
        raise OperadError("matching objects need a closed operad")
    inputs, c = sig
    n = len(inputs)
    proper = [I for I in [()] + _nonempty_subsets(n) if len(I) < n]
    maximal = [I for I in proper if len(I) == n - 1]
    families = []
    if not maximal:
        families.append(_family_key({}))
    else:
        choices = [P.ops(tuple(inputs[i - 1] for i in I), c) for I in maximal]
        for choice in itertools.product(*choices):
            fam = dict(zip(maximal, choice))
            ok = True
            for I in proper:
                vals = set()
                for M, p in zip(maximal, choice):
                    if set(I) <= set(M):
                        drop = [M.index(j) + 1 for j in M if j not in I]
                        vals.add(subst_constants(P, p, drop))
                if len(vals) != 1:
                    ok = False
                    break
                fam[I] = vals.pop()
            if ok:
                families.append(_family_key(fam))
    canonical = {}
    for p in P.ops(*sig):
        fam = {
            I: subst_constants(P, p, set(range(1, n + 1)) - set(I)) for I in proper
        }
        canonical[p] = _family_key(fam)
    return tuple(sorted(families)), canonical


def reedy_comparison(phi: OperadMap, sig: Signature):
    """The comparison from a signature's operations to the pullback of
    its matching object along a map of closed operads.  Returns the
    assignment and the full codomain."""
    Q, P = phi.source, phi.target
    target_sig = (tuple(phi.colour_map[c] for c in sig[0]), phi.colour_map[sig[1]])
    q_families, q_canonical = matching_object(Q, sig)
    _, p_canonical = matching_object(P, target_sig)

    def push(fam_key):
        return _family_key({I: phi.apply(p) for I, p in dict(fam_key).items()})

    codomain = frozenset(
        (fam, p)
        for fam in q_families
        for p in P.ops(*target_sig)
        if push(fam) == p_canonical[p]
    )
    mapping = {q: (q_canonical[q], phi.apply(q)) for q in Q.ops(*sig)}
    return mapping, codomain


# -- corolla operads ---------------------------------------------------------


def _distinct_sequences(pool) -> list[tuple[str, ...]]:
    pool = [str(i) for i in pool]
    out = []
    for r in range(1, len(pool) + 1):
        for I in itertools.combinations(pool, r):
            out.extend(itertools.permutations(I))
    return sorted(out)


def _corolla_like(n: int, X, sequences) -> FiniteOperad:
    colours = tuple(str(i) for i in range(n + 1))
    names = sorted(str(x) for x in X)
    ops: dict[Signature, list[Operation]] = {}
    units = {}
    for c in colours:
        units[c] = Operation((c,), c, "1")
        ops[((c,), c)] = [units[c]]
        ops[((), c)] = [Operation((), c, "o")]
    for s in sequences:
        ops.setdefault((s, "0"), []).extend(Operation(s, "0", x) for x in names)

    def compose(p, i, q):
        if p.name == "1":
            return q
        if q.name == "1":
            return p
        # q is a constant; drop the slot, collapsing to the constant
        s = p.inputs[: i - 1] + p.inputs[i:]
        if not s:
            return Operation((), "0", "o")
        return Operation(s, "0", p.name)

    def act(p, perm):
        return Operation(tuple(p.inputs[perm[t]] for t in range(p.arity)), p.output, p.name)

    return FiniteOperad(colours, ops, units, compose, act, max(n, 1))


def corolla_operad(n: int, X) -> FiniteOperad:
    """Closed operad on colours 0..n, free on a set of operations with
    inputs 1..n and output 0: a copy of X at every sequence of distinct
    source colours, plus units and constants."""
    return _corolla_like(n, X, _distinct_sequences(range(1, n + 1)))


def corolla_boundary_operad(n: int, X) -> FiniteOperad:
    """Same, but only at proper subsets of the source colours."""
    seqs = [s for s in _distinct_sequences(range(1, n + 1)) if len(s) < n]
    return _corolla_like(n, X, seqs)


def open_corolla_operad(n: int, X) -> FiniteOperad:
    """Open operad with X at the full source sequences only."""
    if n < 1:
        raise OperadError("an open corolla needs at least one input")
    colours = tuple(str(i) for i in range(n + 1))
    names = sorted(str(x) for x in X)
    ops: dict[Signature, list[Operation]] = {}
    units = {}
    for c in colours:
        units[c] = Operation((c,), c, "1")
        ops[((c,), c)] = [units[c]]
    for s in itertools.permutations(tuple(str(i) for i in range(1, n + 1))):
        ops[(s, "0")] = [Operation(s, "0", x) for x in names]

    def compose(p, i, q):
        return q if p.name == "1" else p

    def act(p, perm):
        return Operation(tuple(p.inputs[perm[t]] for t in range(p.arity)), p.output, p.name)

    return FiniteOperad(colours, ops, units, compose, act, n)


def wedge_corollas(n: int, X) -> FiniteOperad:
    """Open operad with X at every sequence of distinct source colours:
    the coproduct of one corolla per nonempty subset of 1..n."""
    colours = tuple(str(i) for i in range(n + 1))
    names = sorted(str(x) for x in X)
    ops: dict[Signature, list[Operation]] = {}
    units = {}
    for c in colours:
        units[c] = Operation((c,), c, "1")
        ops[((c,), c)] = [units[c]]
    for s in _distinct_sequences(range(1, n + 1)):
        ops[(s, "0")] = [Operation(s, "0", x) for x in names]

    def compose(p, i, q):
        return q if p.name == "1" else p

    def act(p, perm):
        return Operation(tuple(p.inputs[perm[t]] for t in range(p.arity)), p.output, p.name)

    return FiniteOperad(colours, ops, units, compose, act, max(n, 1))


def corolla_pushforward(n: int, X, phi: dict, colours, *, target=None, size_bound=None):
    """Push a corolla operad along a colour function onto ``colours``.

    When the output colour stays distinct from the source colours this
    is a relabelling (collisions among sources merge signatures and the
    operations carry their original source sequence).  When the output
    colour collides with a source, operations compose with themselves
    and the result is no longer finite: pass ``target`` and
    ``size_bound`` to get the stratified enumeration of that signature
    instead.
    """
    colours = tuple(sorted(set(colours)))
    if set(phi) != set(range(n + 1)) or not set(phi.values()) <= set(colours):
        raise OperadError("colour function must map 0..n into the colours")
    merging = phi[0] in {phi[i] for i in range(1, n + 1)}
    if merging:
        if target is None or size_bound is None:
            raise OperadError(
                "output colour collides with a source; pass target and size_bound"
            )
        P = initial_closed(colours, arity_bound=max(n, len(target[0]), 1))
        sig = (tuple(phi[i] for i in range(1, n + 1)), phi[0])
        return adjoin_operations(P, sig, (), X, {}, target, size_bound)
    names = sorted(str(x) for x in X)
    ops: dict[Signature, list[Operation]] = {}
    units = {}
    for c in colours:
        units[c] = Operation((c,), c, "1")
        ops[((c,), c)] = [units[c]]
        ops[((), c)] = [Operation((), c, "o")]
    for s in _distinct_sequences(range(1, n + 1)):
        sig = (tuple(phi[int(i)] for i in s), phi[0])
        ops.setdefault(sig, []).extend(
            Operation(sig[0], sig[1], f"{x}@{''.join(s)}") for x in names
        )

    def compose(p, i, q):
        if p.name == "1":
            return q
        if q.name == "1":
            return p
        x, s = p.name.split("@")
        s = s[: i - 1] + s[i:]
        if not s:
            return Operation((), phi[0], "o")
        return Operation(tuple(phi[int(j)] for j in s), phi[0], f"{x}@{s}")

    def act(p, perm):
        inputs = tuple(p.inputs[perm[t]] for t in range(p.arity))
        if "@" not in p.name:
            return Operation(inputs, p.output, p.name)
        x, s = p.name.split("@")
        s = tuple(s[perm[t]] for t in range(p.arity))
        return Operation(inputs, p.output, f"{x}@{''.join(s)}")

    return FiniteOperad(colours, ops, units, compose, act, max(n, 1))


# -- random operads ----------------------------------------------------------
#
# Randomized operads are suboperads of the endomorphism operad of the
# two-element pointed set at each colour, generated by random maps and
# saturated under substitution, permutation, units and (for the closed
# variant) basepoint constants.  The laws then hold by construction and
# the axiom checker provides an independent confirmation.


def _graph_name(graph) -> str:
    return "f" + "".join(map(str, graph))


def _graph_of(name) -> tuple[int, ...]:
    return tuple(int(ch) for ch in name[1:])


def _endo_compose(p: Operation, i: int, q: Operation) -> Operation:
    gp, gq = _graph_of(p.name), _graph_of(q.name)
    n, m = p.arity, q.arity
    out = []
    for xs in itertools.product((0, 1), repeat=n + m - 1):
        inner = gq[_lex_index(xs[i - 1 : i - 1 + m])]
        outer = xs[: i - 1] + (inner,) + xs[i - 1 + m :]
        out.append(gp[_lex_index(outer)])
    return Operation(_splice(p.inputs, i, q.inputs), p.output, _graph_name(tuple(out)))


def _endo_act(p: Operation, perm: Perm) -> Operation:
    g = _graph_of(p.name)
    n = p.arity
    inv = _invert(perm)
    out = []
    for ys in itertools.product((0, 1), repeat=n):
        zs = tuple(ys[inv[u]] for u in range(n))
        out.append(g[_lex_index(zs)])
    return Operation(
        tuple(p.inputs[perm[t]] for t in range(n)), p.output, _graph_name(tuple(out))
    )


def _lex_index(xs) -> int:
    idx = 0
    for x in xs:
        idx = idx * 2 + x
    return idx


def _saturate_endo(colours, seeds, arity_bound, closed):
    ops: dict[Signature, set[Operation]] = {}

    def add(p):
        got = ops.setdefault(p.signature, set())
        if p in got:
            return False
        got.add(p)
        return True

    units = {}
    for c in colours:
        units[c] = Operation((c,), c, _graph_name((0, 1)))
        add(units[c])
        if closed:
            add(Operation((), c, _graph_name((0,))))
    queue = list(seeds)
    for p in seeds:
        add(p)
    while queue:
        p = queue.pop()
        for perm in itertools.permutations(range(p.arity)):
            q = _endo_act(p, perm)
            if add(q):
                queue.append(q)
        for sig in list(ops):
            for q in list(ops[sig]):
                if q.output in p.inputs and p.arity + q.arity - 1 <= arity_bound:
                    for i in range(1, p.arity + 1):
                        if p.inputs[i - 1] == q.output:
                            r = _endo_compose(p, i, q)
                            if add(r):
                                queue.append(r)
                if p.output in q.inputs and q.arity + p.arity - 1 <= arity_bound:
                    for i in range(1, q.arity + 1):
                        if q.inputs[i - 1] == p.output:
                            r = _endo_compose(q, i, p)
                            if add(r):
                                queue.append(r)
    return FiniteOperad(
        colours,
        {sig: sorted(items) for sig, items in ops.items()},
        units,
        _endo_compose,
        _endo_act,
        arity_bound,
        validate=False,
    )


def _random_seeds(rng, colours, arity_bound, n_generators, closed):
    seeds = []
    for _ in range(n_generators):
        n = rng.randint(1, arity_bound)
        inputs = tuple(rng.choice(colours) for _ in range(n))
        c = rng.choice(colours)
        graph = [rng.randint(0, 1) for _ in range(2**n)]
        if closed:
            graph[0] = 0  # keep the basepoint
        seeds.append(Operation(inputs, c, _graph_name(tuple(graph))))
    return seeds


def random_closed_operad(rng, n_colours=2, arity_bound=2, n_generators=3) -> FiniteOperad:
    colours = tuple(f"c{i}" for i in range(n_colours))
    seeds = _random_seeds(rng, colours, arity_bound, n_generators, True)
    return _saturate_endo(colours, seeds, arity_bound, True)


def random_open_operad(rng, n_colours=2, arity_bound=2, n_generators=3) -> FiniteOperad:
    colours = tuple(f"c{i}" for i in range(n_colours))
    seeds = _random_seeds(rng, colours, arity_bound, n_generators, False)
    return _saturate_endo(colours, seeds, arity_bound, False)


# -- operation-adjoining pushouts --------------------------------------------
#
# Adjoining a set Y of operations at one signature to a closed operad,
# while identifying a subset X with operations already present, yields
# an operad whose new operations are equivalence classes of planar
# trees with two kinds of vertices: white ones carrying Y-labels with
# the adjoined signature, and black ones carrying non-identity
# operations of the base.  The conditions:
#
# * every internal edge touches a white vertex,
# * above every input of every white vertex there is at least one leaf,
# * leaves are numbered and coloured by the target signature,
#
# exclude black-on-black composites (already present in the base) and
# constant substitutions into white slots (identified into the base by
# the pushout).  Classes are orbits under permuting inputs of black
# vertices while acting on their labels.


def adjoin_operations(P, signature, X, Y, f, target, size_bound):
    """Stratified new operations of the pushout adjoining ``Y`` at
    ``signature``, at one ``target`` signature, keyed by vertex count.
    Members of ``X`` identify with base operations via ``f`` and
    contribute nothing new."""
    if not P.is_closed:
        raise OperadError("operations are adjoined to a closed operad")
    X = sorted(str(x) for x in X)
    Y = sorted(str(y) for y in Y)
    if not set(X) <= set(Y):
        raise OperadError("X must be a subset of Y")
    for x in X:
        if f.get(x) not in P.ops(*signature):
            raise OperadError(f"attachment of {x!r} is not an operation at the signature")
    (c_in, c_out) = signature
    (d_in, d_out) = target
    units = set(P.units.values())

    def grow(colour, budget):
        # (node, vertex count, leaf colours in planar order)
        yield ("leaf",), 0, (colour,)
        if budget < 1:
            return
        if colour == c_out:
            for kids, used, leaves in _forests(c_in, budget - 1, grow, white_inputs=True):
                for y in Y:
                    yield ("w", y, kids), used + 1, leaves
        for sig in P.signatures():
            if sig[1] != colour or not sig[0]:
                continue
            for q in P.ops(*sig):
                if q in units:
                    continue
                for kids, used, leaves in _forests(sig[0], budget - 1, grow, black=True):
                    yield ("b", q, kids), used + 1, leaves

    strata: dict[int, set] = {k: set() for k in range(1, size_bound + 1)}
    for node, used, leaves in grow(d_out, size_bound):
        if used == 0 or not _has_white(node):
            continue
        if len(leaves) != len(d_in):
            continue
        for numbering in _leaf_numberings(leaves, d_in):
            tree = _number_leaves(node, iter(numbering))
            if _all_white_labels_in(tree, set(X)):
                continue
            strata[used].add(_aut_canonical(tree, P))
    return {k: tuple(sorted(v)) for k, v in strata.items()}


def _forests(colours, budget, grow, white_inputs=False, black=False):
    if not colours:
        yield (), 0, ()
        return
    head, tail = colours[0], colours[1:]
    for node, used, leaves in grow(head, budget):
        if white_inputs and not leaves:
            continue  # every white input needs a leaf above it
        if black and node[0] == "b":
            continue  # internal edges must touch a white vertex
        for rest, used2, leaves2 in _forests(tail, budget - used, grow, white_inputs, black):
            yield (node,) + rest, used + used2, leaves + leaves2


def _has_white(node):
    if node[0] == "leaf":
        return False
    if node[0] == "w":
        return True
    return any(_has_white(k) for k in node[2])


def _leaf_numberings(leaves, d_in):
    # bijections leaf position -> slot number, respecting colours
    slots_by_colour: dict[str, list[int]] = {}
    for i, d in enumerate(d_in, start=1):
        slots_by_colour.setdefault(d, []).append(i)
    groups = []
    for colour in leaves:
        groups.append(colour)
    by_colour: dict[str, list[int]] = {}
    for pos, colour in enumerate(groups):
        by_colour.setdefault(colour, []).append(pos)
    if {c: len(v) for c, v in by_colour.items()} != {
        c: len(v) for c, v in slots_by_colour.items()
    }:
        return
    colour_list = sorted(by_colour)
    perms = [itertools.permutations(slots_by_colour[c]) for c in colour_list]
    for combo in itertools.product(*perms):
        numbering = [0] * len(leaves)
        for c, assigned in zip(colour_list, combo):
            for pos, num in zip(by_colour[c], assigned):
                numbering[pos] = num
        yield tuple(numbering)


def _number_leaves(node, numbers):
    if node[0] == "leaf":
        return ("leaf", next(numbers))
    return (node[0], node[1], tuple(_number_leaves(k, numbers) for k in node[2]))


def _aut_canonical(tree, P):
    """Orbit minimum under permuting black-vertex inputs with the
    matching action on their labels."""
    seen = {tree}
    queue = [tree]
    while queue:
        t = queue.pop()
        for t2 in _black_moves(t, P):
            if t2 not in seen:
                seen.add(t2)
                queue.append(t2)
    return min(_serialize(t) for t in seen)


def _black_moves(node, P):
    if node[0] == "leaf":
        return
    kind, label, kids = node
    for idx, k in enumerate(kids):
        for k2 in _black_moves(k, P):
            yield (kind, label, kids[:idx] + (k2,) + kids[idx + 1 :])
    if kind == "b" and len(kids) > 1:
        for perm in itertools.permutations(range(len(kids))):
            if perm == identity_perm(len(kids)):
                continue
            yield ("b", P.act(label, perm), tuple(kids[perm[t]] for t in range(len(kids))))


def _serialize(node):
    if node[0] == "leaf":
        return ("leaf", node[1])
    kind, label, kids = node
    label_key = label if kind == "w" else (label.inputs, label.output, label.name)
    return (kind, label_key, tuple(_serialize(k) for k in kids))


def _all_white_labels_in(node, allowed):
    if node[0] == "leaf":
        return True
    kind, label, kids = node
    if kind == "w" and label not in allowed:
        return False
    return all(_all_white_labels_in(k, allowed) for k in kids)


# -- dendroidal nerves -------------------------------------------------------


@dataclass(frozen=True)
class NerveDendrex:
    """A tree's worth of operad data: a colour per edge, an operation
    per vertex matching the colours around it."""

    colour_items: tuple
    op_items: tuple

    @classmethod
    def build(cls, colours: dict, ops: dict) -> "NerveDendrex":
        return cls(tuple(sorted(colours.items())), tuple(sorted(ops.items())))

    @property
    def colours(self) -> dict:
        return dict(self.colour_items)

    @property
    def vertex_ops(self) -> dict:
        return dict(self.op_items)


def nerve_dendrices(P: FiniteOperad, T: Tree) -> tuple[NerveDendrex, ...]:
    """All operad-data decorations of a tree.  Stumps require a closed
    operad; leaves are free colour choices."""
    if T.stumps and not P.is_closed:
        raise OperadError("stumps need constants")
    if any(len(v) > P.arity_bound for v in T.nodes.values() if v):
        raise OperadError("tree exceeds the operad's arity bound")
    edges = list(T.edges)
    out = []
    for choice in itertools.product(P.colours, repeat=len(edges)):
        colours = dict(zip(edges, choice))
        pools = []
        for v in T.vertices:
            found = P.ops(tuple(colours[e] for e in T.nodes[v]), colours[v])
            if not found:
                break
            pools.append((v, found))
        else:
            for combo in itertools.product(*(found for _, found in pools)):
                ops = {v: op for (v, _), op in zip(pools, combo)}
                out.append(NerveDendrex.build(colours, ops))
    return tuple(out)


def nerve_restrict(P: FiniteOperad, T: Tree, d: NerveDendrex, face: Face) -> NerveDendrex:
    """Restrict a dendrex along one elementary face of its tree."""
    colours = d.colours
    ops = d.vertex_ops
    if face.kind == "inner":
        e = face.index
        below = T.parent(e)
        pos = T.nodes[below].index(e) + 1
        merged = P.compose(ops[below], pos, ops[e])
        new_ops = {v: ops[v] for v in face.source.nodes if face.source.nodes[v] is not None}
        new_ops[below] = merged
    else:
        new_ops = {v: ops[v] for v in face.source.nodes if face.source.nodes[v] is not None}
    new_colours = {e: colours[e] for e in face.source.nodes}
    return NerveDendrex.build(new_colours, new_ops)


def _restrict_to_member(P, T: Tree, d: NerveDendrex, target_key: str, site: str):
    current_tree, current = T, d
    while LabeledDendrex.identity(current_tree).key != target_key:
        for face in elementary_faces(current_tree, site):
            src = LabeledDendrex.identity(face.source)
            if target_key in members(src, site):
                current = nerve_restrict(P, current_tree, current, face)
                current_tree = face.source
                break
        else:
            raise OperadError("not a member of the tree's subobject lattice")
    return current


def horn_filling(P, T: Tree, omit, assignment: dict, site="closed") -> tuple:
    """Dendrices on T restricting to a given compatible family on the
    horn's faces.  ``assignment`` maps face indices (kind, name) to
    :class:`NerveDendrex` data on the face source; compatibility on
    intersections is checked first."""
    omitted = {tuple(o) for o in omit}
    all_indices = {f.face_index for f in elementary_faces(T, site)}
    if not omitted <= all_indices:
        raise OperadError(f"no such faces to omit: {sorted(omitted - all_indices)}")
    faces = [f for f in elementary_faces(T, site) if f.face_index not in omitted]
    if {f.face_index for f in faces} != set(assignment):
        raise OperadError("assignment must cover exactly the horn's faces")
    _check_compatible(P, faces, assignment, site)
    fillers = []
    for d in nerve_dendrices(P, T):
        if all(
            nerve_restrict(P, T, d, f) == assignment[f.face_index] for f in faces
        ):
            fillers.append(d)
    return tuple(fillers)


def _check_compatible(P, faces, assignment, site):
    for f1, f2 in itertools.combinations(faces, 2):
        mem1 = members(LabeledDendrex.identity(f1.source), site)
        mem2 = members(LabeledDendrex.identity(f2.source), site)
        shared = set(mem1) & set(mem2)
        for key in shared:
            if any(key != other and key in members(mem1[other], site) for other in shared):
                continue  # only compare on maximal shared members
            r1 = _restrict_to_member(P, f1.source, assignment[f1.face_index], key, site)
            r2 = _restrict_to_member(P, f2.source, assignment[f2.face_index], key, site)
            if r1 != r2:
                raise OperadError("incompatible assignment")


def horn_assignments(P, T: Tree, omit, site="closed") -> list[dict]:
    """All compatible families on the horn's faces, by backtracking
    with pairwise compatibility pruning."""
    omitted = {tuple(o) for o in omit}
    faces = [f for f in elementary_faces(T, site) if f.face_index not in omitted]
    per_face = [(f, nerve_dendrices(P, f.source)) for f in faces]
    out: list[dict] = []

    def place(idx, chosen):
        if idx == len(per_face):
            out.append({f.face_index: d for f, d in chosen.items()})
            return
        face, candidates = per_face[idx]
        for d in candidates:
            trial = dict(chosen)
            trial[face] = d
            try:
                _check_compatible(P, list(trial), trial_assignment(trial), site)
            except OperadError:
                continue
            place(idx + 1, trial)

    def trial_assignment(trial):
        return {f.face_index: d for f, d in trial.items()}

    place(0, {})
    return out
