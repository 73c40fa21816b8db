import math

import pytest

from dendrokit.catalog import linear_open, named_trees, stem_fork
from dendrokit.dendsets import members, representable
from dendrokit.faces import boundary
from dendrokit.tensor import (
    interleavings,
    left_assoc_tensor,
    minimal_shuffle,
    nfold_tensor,
    pushout_product,
    shuffle_ranks,
    shuffles,
    tensor_sets,
    tensor_trees,
)
from dendrokit.trees import Tree, eta, eta_closed, linear_closed

CAT = named_trees()


def test_two_capped_intervals_have_two_shuffles():
    sh = shuffles([CAT["c1bar"], CAT["c1bar"]])
    assert len(sh) == 2
    for d in sh:
        assert d.shape.canonical_key() == linear_closed(2).canonical_key()
    # two truncated interleavings are swallowed by the chains
    assert len(interleavings([CAT["c1bar"], CAT["c1bar"]])) == 4


def test_capped_interval_times_closed_corolla_has_two_shuffles():
    ranked = shuffle_ranks([CAT["c1bar"], CAT["c2bar"]])
    assert [r for r, _ in ranked] == [0, 1]
    sizes = [len(d.shape.edges) for _, d in ranked]
    # minimal: corolla at the bottom, an interval copy over each branch
    assert sizes == [5, 4]
    assert ranked[1][1].shape.canonical_key() == stem_fork().canonical_key()


def test_open_linear_shuffles_count_lattice_paths():
    for m, n in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3)]:
        sh = shuffles([linear_open(m), linear_open(n)])
        assert len(sh) == math.comb(m + n, m)


def test_percolation_ranks_are_gaussian_binomial():
    # shuffles of open intervals are lattice paths; rank counts boxes
    ranks = [r for r, _ in shuffle_ranks([linear_open(2), linear_open(2)])]
    assert sorted(ranks) == [0, 1, 2, 2, 3, 4]
    ranks = [r for r, _ in shuffle_ranks([linear_open(1), linear_open(3)])]
    assert sorted(ranks) == [0, 1, 2, 3]


def test_minimal_shuffle_stacks_first_factor_on_top():
    mini = minimal_shuffle([linear_open(1), linear_open(2)])
    labels = [mini.labels[e] for e in mini.shape.edges]  # presentation order
    assert labels == [("0", "0"), ("0", "1"), ("0", "2"), ("1", "2")]


def _branch_orders(d, coords=(0, 1)):
    """For each root-to-tip path, the order in which the given coordinates
    advance; a shuffle mixes the factors when two paths disagree."""
    shape, labels = d.shape, d.labels
    orders = set()

    def walk(edge, acc):
        v = shape.nodes[edge]
        if not v:
            orders.add(acc)
            return
        for c in v:
            moved = [i for i in coords if labels[c][i] != labels[edge][i]]
            walk(c, acc + tuple(moved))

    walk(shape.root, ())
    return orders


def test_threefold_tensor_strictly_contains_iterated_tensor():
    factors = [CAT["c1bar"], CAT["c1bar"], CAT["c2bar"]]
    nf = nfold_tensor(factors)
    la = left_assoc_tensor(factors)
    nf_max = {d.key for d in nf.maximal_members()}
    la_max = {d.key for d in la.maximal_members()}
    assert len(nf_max) == 8
    assert len(la_max) == 6
    assert la.issubset(nf) and not nf.issubset(la)
    assert la_max < nf_max
    missing = {d.key: d for d in nf.maximal_members() if d.key not in la_max}
    assert len(missing) == 2
    # the two extra shuffles interleave the intervals in opposite orders
    # on the two branches of the corolla; iterated shuffles never do
    for d in missing.values():
        assert len(_branch_orders(d)) == 2
    for d in la.maximal_members():
        assert len(_branch_orders(d)) == 1


def test_right_iterated_tensor_also_lands_inside_threefold():
    factors = [CAT["c1bar"], CAT["c1bar"], CAT["c2bar"]]
    nf = nfold_tensor(factors)
    bc = tensor_trees(factors[1], factors[2])
    ra = tensor_sets(representable(factors[0], "closed"), bc)
    assert ra.issubset(nf)


def test_unit_laws():
    T = CAT["c2bar"]
    left = tensor_trees(eta("u"), T).map_labels(lambda lab: lab[1])
    assert left == representable(T, "all").map_labels(lambda lab: lab)
    closed_unit = tensor_trees(eta_closed("u"), T)
    assert len(shuffles([eta_closed("u"), T])) == 1
    assert closed_unit.map_labels(lambda lab: lab[1]) == representable(
        T, "closed"
    ).map_labels(lambda lab: lab)


def test_tensor_is_symmetric_up_to_label_swap():
    for S, T in [(CAT["c1bar"], CAT["c2bar"]), (linear_open(1), CAT["c2bar"])]:
        swapped = tensor_trees(S, T).map_labels(lambda lab: (lab[1], lab[0]))
        assert swapped == tensor_trees(T, S).map_labels(lambda lab: lab)


def test_maximal_members_of_tensor_are_the_shuffles():
    for S, T in [(CAT["c1bar"], CAT["c1bar"]), (linear_open(1), linear_open(2))]:
        ten = tensor_trees(S, T)
        assert {d.key for d in ten.maximal_members()} == {
            d.key for d in shuffles([S, T])
        }
    # chains share the capped edges over (r,r), (t,t) and the contracted
    # two-chain between them: 7 + 7 - 3
    assert len(tensor_trees(CAT["c1bar"], CAT["c1bar"]).members) == 11


def test_open_linear_members_project_onto_both_factors():
    S, T = linear_open(1), linear_open(2)
    reprs = [representable(S, "open"), representable(T, "open")]
    for m in tensor_trees(S, T).members.values():
        for k in (0, 1):
            assert m.relabel(lambda lab: lab[k]).key in reprs[k].members


def test_pushout_product_corner_is_mono():
    c1, c2 = CAT["c1bar"], CAT["c2bar"]
    U, X = boundary(c1, "closed"), representable(c1, "closed")
    V, Y = boundary(c2, "closed"), representable(c2, "closed")
    pp = pushout_product(U, X, V, Y)
    assert pp.is_mono
    assert pp.corner.issubset(pp.full) and not pp.full.issubset(pp.corner)
    assert pp.overlap == pp.expected_overlap


def test_pushout_product_rejects_non_subobjects():
    c1 = CAT["c1bar"]
    X = representable(c1, "closed")
    with pytest.raises(ValueError):
        pushout_product(X, boundary(c1, "closed"), X, X)


def test_factor_edge_names_may_contain_the_separator():
    # iterated tensors feed joined names back in as factor edges
    joined = Tree("a|b", {"a|b": ("b|b",), "b|b": None})
    sh = shuffles([joined, eta("x")])
    assert len(sh) == 1 and len(sh[0].shape.edges) == 2
