import itertools
import json

import pytest

from dendrokit.trees import (
    Tree,
    all_closed_trees,
    all_open_trees,
    all_trees,
    automorphisms,
    chop_stumps,
    closure,
    contract,
    corolla,
    eta,
    eta_closed,
    find_isomorphism,
    from_json,
    graft,
    isomorphisms,
    linear_closed,
    to_dot,
    to_json,
)


def brute_isos(S, T):
    """Oracle: try every edge bijection and keep the structural ones."""
    es, et = list(S.nodes), list(T.nodes)
    if len(es) != len(et):
        return []
    out = []
    for perm in itertools.permutations(et):
        m = dict(zip(es, perm))
        if m[S.root] != T.root:
            continue
        ok = True
        for e, v in S.nodes.items():
            w = T.nodes[m[e]]
            if v is None or w is None:
                if v is not None or w is not None:
                    ok = False
                    break
            elif sorted(m[c] for c in v) != sorted(w):
                ok = False
                break
        if ok:
            out.append(m)
    return out


def test_constructor_rejects_garbage():
    with pytest.raises(ValueError):
        Tree("r", {"r": ("a",)})  # dangling input
    with pytest.raises(ValueError):
        Tree("r", {"r": ("a", "a"), "a": None})  # repeated input
    with pytest.raises(ValueError):
        Tree("r", {"r": None, "a": None})  # a not attached
    with pytest.raises(ValueError):
        Tree("r", {"r": ("r",)})  # root as input
    with pytest.raises(ValueError):
        Tree("x", {"r": None})  # missing root


def test_basic_queries():
    T = Tree("r", {"r": ("a",), "a": ("b", "c"), "b": (), "c": ()})
    assert T.root == "r"
    assert set(T.edges) == {"r", "a", "b", "c"}
    assert T.leaves == ()
    assert set(T.stumps) == {"b", "c"}
    assert set(T.vertices) == {"r", "a", "b", "c"}
    assert T.inner_edges == ("a", "b", "c")
    assert T.is_closed and not T.is_open
    assert T.parent("a") == "r" and T.parent("r") is None
    assert T.above("a") == {"a", "b", "c"}
    assert T.weakly_above("b", "r") and not T.weakly_above("a", "b")


def test_eta_has_no_vertex():
    T = eta("x")
    assert T.leaves == ("x",) and T.vertices == ()
    assert not T.is_closed and T.is_open
    Tb = eta_closed("x")
    assert Tb.is_closed and Tb.stumps == ("x",)


def test_linear_closed():
    assert linear_closed(0).canonical_key() == eta_closed().canonical_key()
    T = linear_closed(1)
    assert len(T.nodes) == 2 and T.is_closed and len(T.stumps) == 1
    T3 = linear_closed(3, ["0", "1", "0'", "1'"])
    assert T3.edges == ("0", "1", "0'", "1'")
    with pytest.raises(ValueError):
        linear_closed(2, ["a", "b"])


def test_closure_idempotent_and_closed():
    for T in all_trees(4):
        C = closure(T)
        assert C.is_closed
        assert closure(C) == C
        assert set(C.edges) == set(T.edges)


def test_chop_stumps_inverts_closure_on_open_trees():
    for T in all_open_trees(4):
        assert chop_stumps(closure(T)) == T


def test_graft_with_eta_is_identity():
    T = corolla("r", ("a", "b"))
    assert graft(T, "a", eta("z")) == T


def test_graft_freshens_clashes():
    base = corolla("r", ("a", "b"))
    top = corolla("r", ("a", "c"))
    G = graft(base, "a", top)
    assert G.root == "r"
    assert len(G.nodes) == len(base.nodes) + len(top.nodes) - 1
    assert G.nodes["a"] == ("a'", "c")


def test_contract_examples():
    T = linear_closed(2, ["r", "m", "t"])
    assert contract(T, {"m"}).canonical_key() == linear_closed(1).canonical_key()
    C2 = corolla("r", ("d", "e"), closed=True)
    assert contract(C2, {"d"}).canonical_key() == linear_closed(1).canonical_key()
    assert contract(C2, {"d", "e"}).canonical_key() == eta_closed().canonical_key()
    with pytest.raises(ValueError):
        contract(C2, {"r"})
    with pytest.raises(ValueError):
        contract(corolla("r", ("a",)), {"a"})  # leaf


def test_canonical_key_ignores_planar_order():
    A = Tree("r", {"r": ("a", "b"), "a": ("c",), "b": None, "c": None})
    B = Tree("r", {"r": ("b", "a"), "a": ("c",), "b": None, "c": None})
    assert A != B
    assert A.canonical_key() == B.canonical_key()
    assert find_isomorphism(A, B) is not None


def test_canonical_key_respects_labels():
    A = corolla("r", ("a", "b"))
    lab1 = {"r": "x", "a": "y", "b": "z"}
    lab2 = {"r": "x", "a": "z", "b": "y"}
    assert A.canonical_key(lab1) == A.canonical_key(lab2)
    lab3 = {"r": "x", "a": "y", "b": "y"}
    assert A.canonical_key(lab1) != A.canonical_key(lab3)


def test_enumeration_counts():
    assert [len(all_closed_trees(n)) for n in range(1, 7)] == [1, 2, 4, 8, 17, 37]
    # capping every leaf is a bijection onto closed trees with n vertices
    assert [len(all_open_trees(n)) for n in range(1, 5)] == [1, 2, 4, 8]
    assert [len(all_trees(n)) for n in range(1, 5)] == [2, 4, 9, 22]


def test_enumerations_are_duplicate_free():
    for pool in (all_closed_trees(5), all_open_trees(4), all_trees(4)):
        keys = [T.canonical_key() for T in pool]
        assert len(keys) == len(set(keys))


def test_canonical_key_matches_brute_force_iso_search():
    pool = all_closed_trees(5) + all_trees(3)
    for S, T in itertools.combinations(pool, 2):
        same_key = S.canonical_key() == T.canonical_key()
        assert same_key == bool(brute_isos(S, T))


def test_isomorphisms_agree_with_brute_force():
    pool = all_trees(4)
    for T in pool:
        got = {tuple(sorted(m.items())) for m in automorphisms(T)}
        want = {tuple(sorted(m.items())) for m in brute_isos(T, T)}
        assert got == want


def test_automorphism_counts():
    assert len(automorphisms(corolla("r", ("d", "e"), closed=True))) == 2
    assert len(automorphisms(corolla("r", ("a", "b", "c"), closed=True))) == 6
    for n in range(1, 5):
        C = corolla("r", tuple(f"l{i}" for i in range(n)))
        assert len(automorphisms(C)) == len(brute_isos(C, C))
        assert len(automorphisms(C)) == [1, 2, 6, 24][n - 1]


def test_relabelled_tree_is_isomorphic():
    T = Tree("r", {"r": ("a", "b"), "a": ("c", "d"), "b": (), "c": None, "d": ()})
    mapping = {e: f"X{i}" for i, e in enumerate(T.edges)}
    S = T.relabel(mapping)
    assert S.canonical_key() == T.canonical_key()
    iso = find_isomorphism(T, S)
    assert iso is not None and iso["r"] == "X0"
    with pytest.raises(ValueError):
        T.relabel({"a": "b"})


def test_json_round_trip():
    for T in all_trees(4):
        assert from_json(to_json(T)) == T
    obj = json.loads(to_json(eta_closed("s")))
    assert obj == {"edge": "s", "stump": True}


def test_json_rejects_malformed():
    with pytest.raises(ValueError):
        from_json('{"edge": "r"}')


def test_dot_output_mentions_every_edge():
    T = Tree("r", {"r": ("a", "b"), "a": (), "b": None})
    dot = to_dot(T, marked={"a"})
    for e in T.edges:
        assert f'label="{e}"' in dot
    assert 'fillcolor=white' in dot and 'fillcolor=black' in dot
