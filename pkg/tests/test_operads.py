import random

import pytest

from dendrokit.catalog import named_trees
from dendrokit.faces import elementary_faces
from dendrokit.operads import (
    FiniteOperad,
    OperadError,
    OperadMap,
    Operation,
    adjoin_operations,
    check_axioms,
    closed_retraction,
    closed_unit,
    closure_bounded,
    closure_counit,
    closure_unit,
    compose_perm,
    coreflect_closed,
    corolla_boundary_operad,
    corolla_operad,
    corolla_pushforward,
    horn_assignments,
    horn_filling,
    initial_closed,
    matching_object,
    nerve_dendrices,
    nerve_restrict,
    open_corolla_operad,
    pullback_colours,
    random_closed_operad,
    random_open_operad,
    reedy_comparison,
    restrict_open,
    subst_constants,
    terminal_closed,
    wedge_corollas,
)
from dendrokit.trees import Tree, closure, corolla

CAT = named_trees()


def example_operad():
    """Binary p, its transpose, the two one-slot cappings, and the
    constants they cap with; the smallest operad whose symmetric action
    genuinely interacts with substitution of constants."""
    colours = ("a", "b", "c", "c1", "c2")
    units = {c: Operation((c,), c, "1") for c in colours}
    consts = {c: Operation((), c, "o") for c in colours}
    p = Operation(("a", "b"), "c2", "p")
    ps = Operation(("b", "a"), "c2", "ps")
    pa = Operation(("b",), "c2", "pa")
    pb = Operation(("a",), "c2", "pb")
    ops = {}
    for c in colours:
        ops[((c,), c)] = [units[c]]
        ops[((), c)] = [consts[c]]
    ops[(("a", "b"), "c2")] = [p]
    ops[(("b", "a"), "c2")] = [ps]
    ops[(("b",), "c2")] = [pa]
    ops[(("a",), "c2")] = [pb]
    table = {
        (p, 1, consts["a"]): pa,
        (p, 2, consts["b"]): pb,
        (ps, 1, consts["b"]): pb,
        (ps, 2, consts["a"]): pa,
        (pa, 1, consts["b"]): consts["c2"],
        (pb, 1, consts["a"]): consts["c2"],
    }

    def compose(x, i, q):
        if x.name == "1":
            return q
        if q.name == "1":
            return x
        return table[(x, i, q)]

    def act(x, perm):
        if perm == tuple(range(x.arity)):
            return x
        return {p: ps, ps: p}[x]

    return FiniteOperad(colours, ops, units, compose, act, 2)


# -- core ---------------------------------------------------------------------


def test_permutation_composition_convention():
    s, t = (1, 2, 0), (2, 0, 1)
    assert compose_perm(s, t) == tuple(s[t[i]] for i in range(3))
    p = Operation(("a", "b", "c"), "d", "p")
    # acting by s reads inputs through s
    assert tuple(p.inputs[s[i]] for i in range(3)) == ("b", "c", "a")


def test_initial_closed_is_the_point_operad():
    P0 = initial_closed(("0",), arity_bound=2)
    assert P0.op_table() == {((), "0"): ("o",), (("0",), "0"): ("1",)}
    assert P0.is_closed
    check_axioms(P0)


def test_terminal_closed_has_one_operation_per_signature():
    T = terminal_closed(("*",), arity_bound=3)
    assert all(len(T.ops(*sig)) == 1 for sig in T.signatures())
    assert len(T.signatures()) == 4
    check_axioms(T)


def test_example_operad_satisfies_the_axioms():
    check_axioms(example_operad())


def test_axiom_checker_rejects_a_broken_unit_law():
    unit = Operation(("z",), "z", "1")
    g = Operation(("z",), "z", "g")
    const = Operation((), "z", "o")
    ops = {(("z",), "z"): [unit, g], ((), "z"): [const]}

    def compose(p, i, q):
        if p.name == "1":
            return q
        if q.name == "o":
            return const
        return unit  # g composed with anything unary collapses, killing g o 1 = g

    P = FiniteOperad(("z",), ops, {"z": unit}, compose, lambda p, s: p, 1)
    with pytest.raises(OperadError, match="unit law"):
        check_axioms(P)


def test_symmetric_action_is_validated_at_construction():
    p = Operation(("a", "b"), "c", "p")
    units = {c: Operation((c,), c, "1") for c in ("a", "b", "c")}
    ops = {((c,), c): [u] for c, u in units.items()}
    ops[(("a", "b"), "c")] = [p]
    with pytest.raises(OperadError, match="symmetric action"):
        FiniteOperad(("a", "b", "c"), ops, units, lambda x, i, q: x, lambda x, s: x, 2)


def test_random_closed_operads_are_closed_and_lawful():
    sizes = []
    for seed in range(4):
        P = random_closed_operad(random.Random(seed), 2, 2, 3)
        assert P.is_closed
        check_axioms(P)
        sizes.append(len(P.all_operations()))
    assert sizes == [13, 50, 17, 23]


def test_random_open_operad_has_no_constants():
    P = random_open_operad(random.Random(3), 1, 2, 2)
    assert P.is_open
    assert P.op_table() == {(("c0",), "c0"): ("f00", "f01", "f10", "f11")}
    check_axioms(P)


def test_json_round_trip_preserves_tables_and_composition():
    P = random_closed_operad(random.Random(1), 2, 2, 3)
    Q = FiniteOperad.from_json_obj(P.to_json_obj())
    assert Q.op_table() == P.op_table()
    assert Q.units == P.units
    check_axioms(Q)
    for p in P.all_operations():
        for i in range(1, p.arity + 1):
            for sig in P.signatures():
                if sig[1] != p.inputs[i - 1]:
                    continue
                for q in P.ops(*sig):
                    if p.arity + q.arity - 1 > P.arity_bound:
                        continue
                    assert Q.compose(p, i, q) == P.compose(p, i, q)


# -- the closed-open adjunctions ---------------------------------------------


def test_restriction_drops_exactly_the_constants():
    P = random_closed_operad(random.Random(2), 2, 2, 3)
    Po = restrict_open(P)
    assert Po.is_open
    dropped = set(P.all_operations()) - set(Po.all_operations())
    assert dropped == {P.constant(c) for c in P.colours}


def test_coreflection_size_and_laws():
    P = restrict_open(random_closed_operad(random.Random(1), 2, 2, 3))
    G = coreflect_closed(P)
    assert G.is_closed
    assert len(G.all_operations()) == 170
    check_axioms(G)


def test_coreflection_signature_sizes_are_products_over_subsets():
    P = restrict_open(random_closed_operad(random.Random(1), 2, 2, 3))
    G = coreflect_closed(P)
    c1, c2 = G.colours
    n_unary1 = len(P.ops((c1,), c1))
    n_unary2 = len(P.ops((c2,), c1))
    n_binary = len(P.ops((c1, c2), c1))
    assert len(G.ops((c1, c2), c1)) == n_unary1 * n_unary2 * n_binary == 20


def test_unit_into_the_coreflection_is_a_map_and_is_retracted():
    Q = random_closed_operad(random.Random(1), 2, 2, 3)
    alpha = closed_unit(Q)
    alpha.validate()
    rho = closed_retraction(Q)
    assert all(rho.op_map[alpha.op_map[p]] == p for p in Q.all_operations())


def test_retraction_preserves_all_structure_except_nullary_substitution():
    Q = random_closed_operad(random.Random(1), 2, 2, 3)
    rho = closed_retraction(Q)
    rho.validate(nullary_composition=False)
    # projecting a family whose coordinates are unrelated by capping does
    # not commute with substituting a constant
    with pytest.raises(OperadError, match="breaks composition"):
        rho.validate()


def test_coreflection_of_a_closed_restriction_differs_from_the_operad():
    # the unit is injective but not surjective once P has several
    # operations per signature
    Q = random_closed_operad(random.Random(1), 2, 2, 3)
    alpha = closed_unit(Q)
    image = set(alpha.op_map.values())
    assert len(image) == len(Q.all_operations())
    assert len(alpha.target.all_operations()) > len(image)


def test_bounded_closure_of_open_corollas_matches_the_wedge():
    for n in (1, 2, 3):
        C = open_corolla_operad(n, {"x"})
        Q, report = closure_bounded(C, n)
        assert Q.is_closed
        assert report.all_stable
        check_axioms(Q)
        W = wedge_corollas(n, {"x"})
        wt = W.op_table()
        qt = Q.op_table()
        open_sigs = {s for s in qt if s[0]}
        assert open_sigs == set(wt)
        # per-signature counts agree and every class representative is an
        # operation of the free part; composition is trivial on both sides
        # and the action permutes input sequences freely, so matched counts
        # with matched representatives pin the isomorphism
        for sig in wt:
            assert len(qt[sig]) == len(wt[sig])
            for g in Q.ops(*sig):
                rep = report.rep_of[g][1]
                assert rep.name in {"x", "1"}


def test_bounded_closure_stabilizes_at_the_corolla_arity():
    for n in (2, 3):
        C = open_corolla_operad(n, {"x"})
        _, low = closure_bounded(C, n - 2)
        assert not low.all_stable
        _, high = closure_bounded(C, n)
        assert high.all_stable


def test_closure_unit_and_counit_are_maps():
    closure_unit(open_corolla_operad(2, {"x"}), 2).validate()
    closure_counit(corolla_operad(2, {"x"}), 2).validate()


def test_closure_triangle_identity_on_corollas():
    for n in (1, 2, 3):
        Qc = corolla_operad(n, {"x"})
        P = restrict_open(Qc)
        unit = closure_unit(P, n)
        counit = closure_counit(Qc, n)
        assert all(counit.op_map[unit.op_map[p]] == p for p in P.all_operations())


# -- matching objects ---------------------------------------------------------


def test_unary_matching_object_is_a_point():
    P = random_closed_operad(random.Random(0), 2, 2, 3)
    c = P.colours[0]
    families, canonical = matching_object(P, ((c,), c))
    assert len(families) == 1
    assert set(canonical.values()) == set(families)


def test_terminal_operad_matching_comparison_is_bijective():
    T = terminal_closed(("*",), arity_bound=3)
    ident = OperadMap(T, T, {"*": "*"}, {p: p for p in T.all_operations()})
    for n in range(4):
        sig = (("*",) * n, "*")
        mapping, codomain = reedy_comparison(ident, sig)
        assert len(mapping) == 1
        assert len(codomain) == 1
        assert set(mapping.values()) == set(codomain)


def test_coreflection_matching_maps_are_surjective():
    G = coreflect_closed(random_open_operad(random.Random(3), 1, 2, 2))
    for sig in G.signatures():
        if not sig[0]:
            continue
        families, canonical = matching_object(G, sig)
        assert set(canonical.values()) == set(families)


# -- corolla operads ----------------------------------------------------------


def test_closed_corolla_operad_table():
    C = corolla_operad(2, {"x"})
    assert C.is_closed
    check_axioms(C)
    assert C.op_table() == {
        ((), "0"): ("o",),
        ((), "1"): ("o",),
        ((), "2"): ("o",),
        (("0",), "0"): ("1",),
        (("1",), "0"): ("x",),
        (("1",), "1"): ("1",),
        (("1", "2"), "0"): ("x",),
        (("2",), "0"): ("x",),
        (("2",), "2"): ("1",),
        (("2", "1"), "0"): ("x",),
    }


def test_boundary_corolla_omits_the_full_input_sequences():
    C = corolla_operad(2, {"x"})
    B = corolla_boundary_operad(2, {"x"})
    missing = set(C.op_table()) - set(B.op_table())
    assert missing == {(("1", "2"), "0"), (("2", "1"), "0")}
    check_axioms(B)


def test_open_corolla_keeps_only_the_full_permutations():
    O = open_corolla_operad(2, {"x"})
    assert O.is_open
    assert {s for s in O.op_table() if O.ops(*s)[0].name == "x"} == {
        (("1", "2"), "0"),
        (("2", "1"), "0"),
    }
    check_axioms(O)


def test_substituting_constants_caps_corolla_slots():
    C = corolla_operad(2, {"x"})
    full = C.ops(("1", "2"), "0")[0]
    assert subst_constants(C, full, [2]) == C.ops(("1",), "0")[0]
    assert subst_constants(C, full, [1, 2]) == C.constant("0")


def test_pushforward_relabels_and_merges_source_colours():
    Q = corolla_pushforward(2, {"x"}, {0: "d", 1: "c", 2: "c"}, ("c", "d"))
    check_axioms(Q)
    assert Q.op_table() == {
        ((), "c"): ("o",),
        ((), "d"): ("o",),
        (("c",), "c"): ("1",),
        (("c",), "d"): ("x@1", "x@2"),
        (("c", "c"), "d"): ("x@12", "x@21"),
        (("d",), "d"): ("1",),
    }


def test_pushforward_onto_the_output_colour_stratifies_into_chains():
    strata = corolla_pushforward(
        1, {"x"}, {0: "c", 1: "c"}, ("c",), target=(("c",), "c"), size_bound=3
    )
    assert {k: len(v) for k, v in strata.items()} == {1: 1, 2: 1, 3: 1}


def test_pushforward_requires_a_bound_when_colours_collide():
    with pytest.raises(OperadError, match="collides"):
        corolla_pushforward(1, {"x"}, {0: "c", 1: "c"}, ("c",))


def test_pullback_of_the_terminal_operad_is_terminal():
    T2 = pullback_colours(terminal_closed(("*",), 2), {"a": "*", "b": "*"}, ("a", "b"))
    check_axioms(T2)
    assert len(T2.signatures()) == 14
    assert all(len(T2.ops(*s)) == 1 for s in T2.signatures())


# -- adjoining operations -----------------------------------------------------


def test_adjoined_trees_related_by_relabelling_fall_into_one_class():
    P = example_operad()
    strata = adjoin_operations(
        P, (("c1", "c2"), "c"), [], ["y"], {}, (("b", "a", "c1"), "c"), 2
    )
    assert {k: len(v) for k, v in strata.items()} == {1: 0, 2: 1}
    # the class contains the planar tree with the untransposed label;
    # its transpose is the same class
    (key,) = strata[2]
    assert key == (
        "w",
        "y",
        (("leaf", 3), ("b", (("a", "b"), "c2", "p"), (("leaf", 2), ("leaf", 1)))),
    )


def test_trees_needing_a_capped_white_input_are_never_generated():
    P = example_operad()
    strata = adjoin_operations(
        P, (("c1", "c2"), "c"), [], ["y"], {}, (("b", "a"), "c"), 3
    )
    assert all(not classes for classes in strata.values())


def test_adjoining_along_an_isomorphism_adds_nothing():
    T = terminal_closed(("*",), arity_bound=3)
    top = T.ops(("*", "*"), "*")[0]
    strata = adjoin_operations(
        T, (("*", "*"), "*"), ["y"], ["y"], {"y": top}, (("*", "*", "*"), "*"), 3
    )
    assert all(not classes for classes in strata.values())


# -- nerves and horn filling --------------------------------------------------


def test_nerve_counts_on_the_capped_binary_corolla():
    shape = closure(corolla("r", ("s1", "s2")))
    assert len(nerve_dendrices(corolla_operad(2, {"x"}), shape)) == 2
    assert len(nerve_dendrices(initial_closed(("0",), 2), shape)) == 0
    T = terminal_closed(("*",), arity_bound=4)
    for name in ("c2bar", "c3bar", "l3bar"):
        assert len(nerve_dendrices(T, CAT[name])) == 1


def test_nerve_restriction_matches_face_sources():
    P = random_closed_operad(random.Random(5), 1, 2, 2)
    T = CAT["stem-fork"]
    for d in nerve_dendrices(P, T):
        for f in elementary_faces(T, "closed"):
            r = nerve_restrict(P, T, d, f)
            assert set(r.colour_items) <= set(d.colour_items)
            assert set(c for c, _ in r.colour_items) == set(f.source.edges)


def test_point_operad_cannot_fill_the_binary_inner_horn():
    shape = closure(corolla("r", ("a", "b")))
    P0 = initial_closed(("0",), 2)
    chain = nerve_dendrices(P0, Tree("r", {"r": ("a",), "a": ()}))[0]
    fills = horn_filling(P0, shape, [("inner", "a")], {("inner", "b"): chain})
    assert fills == ()


def test_terminal_operad_fills_the_binary_inner_horn_uniquely():
    shape = closure(corolla("r", ("a", "b")))
    T = terminal_closed(("*",), 2)
    chain = nerve_dendrices(T, Tree("r", {"r": ("a",), "a": ()}))[0]
    fills = horn_filling(T, shape, [("inner", "a")], {("inner", "b"): chain})
    assert len(fills) == 1


def test_every_compatible_assignment_on_a_very_inner_horn_extends():
    P = random_closed_operad(random.Random(5), 1, 2, 2)
    T = CAT["stem-fork"]
    assignments = horn_assignments(P, T, [("inner", "a")])
    faces = [
        f for f in elementary_faces(T, "closed") if f.face_index != ("inner", "a")
    ]
    restrictions = {
        tuple(sorted((f.face_index, nerve_restrict(P, T, d, f)) for f in faces))
        for d in nerve_dendrices(P, T)
    }
    assert {tuple(sorted(a.items())) for a in assignments} == restrictions
    assert len(assignments) == 2
    for a in assignments:
        assert len(horn_filling(P, T, [("inner", "a")], a)) >= 1


def test_horn_filling_rejects_an_unknown_omitted_face():
    shape = closure(corolla("r", ("a", "b")))
    T = terminal_closed(("*",), 2)
    with pytest.raises(OperadError, match="no such faces"):
        horn_filling(T, shape, [("inner", "zz")], {})
