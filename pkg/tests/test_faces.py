import pytest

from dendrokit.catalog import fork_closed, stem_fork
from dendrokit.dendsets import LabeledDendrex, generate, representable
from dendrokit.faces import (
    boundary,
    dendrex_faces,
    elementary_faces,
    face_by_index,
    horn,
    is_very_inner,
    parse_face_index,
    spine,
    very_inner_edges,
)
from dendrokit.trees import (
    Tree,
    all_closed_trees,
    corolla,
    eta,
    eta_closed,
    linear_closed,
)


def test_eta_has_no_faces():
    assert elementary_faces(eta("e"), "all") == []
    assert elementary_faces(eta_closed("e"), "closed") == []


def test_capped_edge_has_one_face_outside_closed_site():
    faces = elementary_faces(eta_closed("e"), "all")
    assert [f.face_index for f in faces] == [("top", "e")]
    assert faces[0].source.leaves == ("e",)


def test_closed_fork_has_two_inner_faces():
    faces = elementary_faces(fork_closed(), "closed")
    assert sorted(f.face_index for f in faces) == [("inner", "d"), ("inner", "e")]
    for f in faces:
        assert f.source.is_closed
        assert f.source.canonical_key() == linear_closed(1).canonical_key()


def test_stem_fork_has_four_closed_faces():
    T = stem_fork()
    faces = elementary_faces(T, "closed")
    idx = sorted(f.face_index for f in faces)
    assert idx == [("inner", "a"), ("inner", "b"), ("inner", "c"), ("root", "r")]
    root = face_by_index(T, ("root", "r"), "closed")
    assert root.source.root == "a" and set(root.source.nodes) == {"a", "b", "c"}


def test_open_corolla_faces_are_its_edges():
    C = corolla("r", ("a", "b"))
    faces = elementary_faces(C, "open")
    assert sorted(f.face_index for f in faces) == [
        ("edge", "a"),
        ("edge", "b"),
        ("edge", "r"),
    ]
    assert all(len(f.source.nodes) == 1 for f in faces)


def test_generalized_root_face():
    # root vertex with one grown input and one leaf input
    T = Tree("a", {"a": ("b", "d"), "b": ("c",), "c": None, "d": None})
    faces = elementary_faces(T, "all")
    idx = {f.face_index for f in faces}
    assert ("root", "a") in idx
    root = face_by_index(T, ("root", "a"), "all")
    assert root.source.root == "b" and set(root.source.nodes) == {"b", "c"}
    # top face deletes the stem vertex, inner face contracts b
    assert ("top", "b") in idx and ("inner", "b") in idx
    assert len(faces) == 3


def test_top_faces_include_stumps():
    T = stem_fork()
    idx = {f.face_index for f in elementary_faces(T, "all")}
    assert ("top", "b") in idx and ("top", "c") in idx
    # chopping one stump leaves a leaf, so the source is not closed
    f = face_by_index(T, ("top", "b"), "all")
    assert not f.source.is_closed


def test_very_inner():
    T = stem_fork()
    assert very_inner_edges(T) == ("a",)
    assert is_very_inner(T, "a")
    assert not is_very_inner(T, "b")  # stump above
    assert not is_very_inner(T, "r")  # root
    L = linear_closed(2)
    assert very_inner_edges(L) == ("1",)
    with pytest.raises(ValueError):
        is_very_inner(T, "zzz")


def test_faces_in_site_are_in_site():
    for T in all_closed_trees(5):
        for f in elementary_faces(T, "closed"):
            assert f.source.is_closed


def test_boundary_of_eta_is_empty():
    assert len(boundary(eta("e"), "all")) == 0
    assert len(boundary(eta_closed("e"), "closed")) == 0


def test_horn_union_face_is_boundary():
    for T in all_closed_trees(4):
        faces = elementary_faces(T, "closed")
        B = boundary(T, "closed")
        for f in faces:
            H = horn(T, [f.face_index], "closed")
            F = generate("closed", [LabeledDendrex.identity(f.source)])
            assert H.union(F) == B
            assert H.issubset(B)


def test_horn_rejects_bad_omit():
    T = fork_closed()
    with pytest.raises(ValueError):
        horn(T, [("inner", "r")], "closed")
    with pytest.raises(ValueError):
        horn(T, [], "closed")


def test_parse_face_index():
    T = stem_fork()
    assert parse_face_index(T, "root") == ("root", "r")
    assert parse_face_index(T, "r") == ("root", "r")
    assert parse_face_index(T, "a") == ("inner", "a")
    assert parse_face_index(T, "top:b") == ("top", "b")


def test_spine_of_fork_is_whole_representable():
    T = fork_closed()
    assert spine(T, "closed") == representable(T, "closed")


def test_spine_of_chain_is_horn_at_very_inner_edge():
    T = linear_closed(2)
    assert spine(T, "closed") == horn(T, [("inner", "1")], "closed")


def test_spine_of_stem_fork():
    T = stem_fork()
    S = spine(T, "closed")
    maxi = S.maximal_members()
    assert len(maxi) == 2
    sizes = sorted(len(m.shape.nodes) for m in maxi)
    assert sizes == [2, 3]
    assert len(S) == 8
    S.validate_face_closed()


def test_spine_members_are_corollas_and_edges():
    # every member of the closed spine is a capped corolla or a cap
    for T in all_closed_trees(5):
        S = spine(T, "closed")
        for m in S.member_list:
            verts = [v for v in m.shape.vertices if m.shape.nodes[v] != ()]
            assert len(verts) <= 1


def test_dendrex_faces_translate_labels():
    d = LabeledDendrex(fork_closed(), {"r": "x", "d": "y", "e": "z"})
    faces = dict(dendrex_faces(d, "closed"))
    f = faces[("inner", "d")]
    assert f.labels == {"r": "x", "e": "z"}
