"""End-to-end drives of the command line through :func:`run`."""

import io
import json
import sys

import pytest

from dendrokit.cli import EXIT_ERROR, EXIT_OK, EXIT_VERIFY, run

EXAMPLE = {
    "edge": "a",
    "vertex": {
        "inputs": [
            {"edge": "b", "stump": True},
            {
                "edge": "c",
                "vertex": {
                    "inputs": [
                        {"edge": "d", "stump": True},
                        {"edge": "e", "stump": True},
                    ]
                },
            },
        ]
    },
}

CAP2 = {
    "edge": "r",
    "vertex": {
        "inputs": [{"edge": "s1", "stump": True}, {"edge": "s2", "stump": True}]
    },
}

STEM = {
    "edge": "r",
    "vertex": {
        "inputs": [
            {
                "edge": "a",
                "vertex": {
                    "inputs": [
                        {"edge": "b", "stump": True},
                        {"edge": "c", "stump": True},
                    ]
                },
            }
        ]
    },
}


@pytest.fixture
def cli(capsys, monkeypatch):
    def go(argv, stdin=None):
        if stdin is not None:
            monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
        code = run(argv)
        cap = capsys.readouterr()
        return code, cap.out, cap.err

    return go


@pytest.fixture
def tree_file(tmp_path):
    def write(name, obj):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(obj))
        return "@" + str(path)

    return write


def test_shuffle_count(cli):
    code, out, _ = cli(["shuffles", "--left", "c1bar", "--right", "c1bar", "--count"])
    assert (code, out) == (EXIT_OK, "2\n")


def test_nfold_tensor_beats_iterated_binary(cli):
    base = ["tensor", "--nfold", "c1bar", "c1bar", "c2bar", "--count-maximal"]
    assert cli(base)[1] == "8\n"
    assert cli(base + ["--left-assoc"])[1] == "6\n"


def test_face_listing(cli):
    code, out, _ = cli(["faces", "stem-fork"])
    assert out == "inner a\ninner b\ninner c\nroot r\n"
    code, out, _ = cli(["horn", "stem-fork", "--omit", "inner:a", "--count"])
    assert out == "12\n"


def test_interior_count(cli):
    assert cli(["interior", "c2bar", "--count-maximal"])[1] == "3\n"


def test_tree_json_round_trips_through_stdin(cli):
    code, out, _ = cli(["tree", "c2bar"])
    assert code == EXIT_OK
    assert cli(["tree", "-"], stdin=out)[1] == out


def test_tree_info_and_dot_marking(cli):
    code, out, _ = cli(["tree", "stem-fork", "--info"])
    assert "very-inner: a\n" in out
    assert "closed: true\n" in out
    code, dot, _ = cli(["tree", "stem-fork", "--format", "dot", "--mark", "a"])
    assert "fillcolor=white" in dot
    assert "fillcolor=black" in dot


def test_tree_transform_order(cli, tree_file):
    code, out, _ = cli(
        ["tree", tree_file("ex", EXAMPLE), "--contract", "c", "--chop-stumps"]
    )
    got = json.loads(out)
    assert got == {
        "edge": "a",
        "vertex": {
            "inputs": [
                {"edge": "b", "leaf": True},
                {"edge": "d", "leaf": True},
                {"edge": "e", "leaf": True},
            ]
        },
    }


def test_certificate_pipes_exit_clean(cli, tree_file):
    cap2 = tree_file("cap2", CAP2)
    for goal, extra, expect in [
        (["spine", "--tree", cap2], [], "ok: via, 0 steps, end 6 members\n"),
        (["spine", "--tree", "stem-fork"], [], "ok: via, 3 steps, end 14 members\n"),
        (["grafting", "--tree", "stem-fork"], [], "ok: via, 0 steps, end 34 members\n"),
        (
            ["interval-tower", "--stages", "3"],
            [],
            "ok: inner-anodyne, 3 steps, end 15 members\n",
        ),
    ]:
        code, cert, err = cli(["cert", "build"] + goal + extra)
        assert code == EXIT_OK, err
        code, out, _ = cli(["cert", "verify", "-"], stdin=cert)
        assert (code, out) == (EXIT_OK, expect)


def test_horn_certificates_on_the_branching_example(cli, tree_file):
    ex = tree_file("ex", EXAMPLE)
    code, cert, _ = cli(["cert", "build", "multi-horn", "--tree", ex, "--edges", "c"])
    assert cli(["cert", "verify", "-"], stdin=cert)[1] == (
        "ok: via, 1 steps, end 23 members\n"
    )
    code, cert, _ = cli(
        [
            "cert",
            "build",
            "partial-horn",
            "--tree",
            ex,
            "--edge",
            "c",
            "--missing-stumps",
            "b",
        ]
    )
    assert cli(["cert", "verify", "-"], stdin=cert)[1] == (
        "ok: inner-anodyne, 2 steps, end 74 members\n"
    )


def test_build_rejects_the_root_collapsing_extension(cli, tree_file):
    ex = tree_file("ex", EXAMPLE)
    code, out, err = cli(
        ["cert", "build", "extended-horn", "--tree", ex, "--edges", "c", "--extra", "b"]
    )
    assert code == EXIT_ERROR
    assert "unary root" in err


def test_verify_flags_a_mutated_certificate(cli):
    code, cert, _ = cli(["cert", "build", "spine", "--tree", "stem-fork"])
    obj = json.loads(cert)
    del obj["steps"][0]
    code, _, err = cli(["cert", "verify", "-"], stdin=json.dumps(obj))
    assert code == EXIT_VERIFY
    assert err.startswith("FAIL at step")


def test_sweep_respects_the_worker_knob(cli, monkeypatch):
    monkeypatch.setenv("DENDROKIT_WORKERS", "4")
    code, out, _ = cli(["cert", "sweep", "--max-vertices", "4"])
    assert (code, out) == (EXIT_OK, "trees 8 certificates 13 failed 0\n")


def test_random_operad_checks_and_closes(cli):
    argv = ["operad", "random", "--seed", "3", "--open", "--colours", "1",
            "--arity", "2", "--generators", "2"]
    code, P, _ = cli(argv)
    assert code == EXIT_OK
    assert cli(argv)[1] == P
    code, out, _ = cli(["operad", "check", "-"], stdin=P)
    assert (code, out) == (EXIT_OK, "axioms ok (4 operations, 1 colours)\n")
    code, Q, err = cli(["operad", "closure", "-", "--bound", "2"], stdin=P)
    assert err == "stable: true\n"
    code, out, _ = cli(["operad", "check", "-"], stdin=Q)
    assert out == "axioms ok (5 operations, 1 colours)\n"


def test_restriction_then_coreflection_pipes(cli):
    code, R, _ = cli(["operad", "restrict", "terminal"])
    code, S, _ = cli(["operad", "coreflect", "-", "--arity-bound", "2"], stdin=R)
    code, out, _ = cli(["operad", "check", "-"], stdin=S)
    assert (code, out) == (EXIT_OK, "axioms ok (3 operations, 1 colours)\n")


def test_corrupted_operad_fails_the_checker(cli):
    code, P, _ = cli(["operad", "restrict", "terminal"])
    obj = json.loads(P)
    obj["composition"][0][3] = obj["operations"][-1]
    code, _, err = cli(["operad", "check", "-"], stdin=json.dumps(obj))
    assert code == EXIT_VERIFY
    assert err.startswith("FAIL:")


def test_matching_families_of_the_terminal_operad(cli):
    code, out, _ = cli(["operad", "matching", "terminal", "--inputs", "*",
                        "--output", "*"])
    assert json.loads(out) == {"families": ["<:*>"], "canonical": {"*": "<:*>"}}


def test_nerve_counts_and_horn_filling(cli, tree_file):
    cap2 = tree_file("cap2", CAP2)
    stem = tree_file("stem", STEM)
    assert cli(["nerve", "count", "terminal", "--tree", cap2])[1] == "1\n"
    assert cli(["nerve", "count", "initial", "--tree", cap2])[1] == "0\n"
    code, out, _ = cli(["nerve", "fill", "terminal", "--tree", stem,
                        "--omit", "inner:a"])
    assert (code, out) == (EXIT_OK, "assignments 1 unfilled 0\n")
    code, out, _ = cli(["nerve", "fill", "initial", "--tree", cap2,
                        "--omit", "inner:s1"])
    assert (code, out) == (EXIT_VERIFY, "assignments 1 unfilled 1\n")
    code, out, _ = cli(["nerve", "fill", "terminal", "--tree", cap2,
                        "--omit", "inner:s1"])
    assert (code, out) == (EXIT_OK, "assignments 1 unfilled 0\n")


def test_cube_dimensions_index_and_tower(cli, tree_file):
    ex = tree_file("ex", EXAMPLE)
    code, out, _ = cli(["bv", "dims", ex])
    assert "(d;a) 1\n" in out
    assert "(b,c;a) 0\n" in out
    assert cli(["bv", "index", ex, "--inputs", "d", "--output", "a"])[1] == "c\n"
    code, out, _ = cli(["bv", "tower", "3"])
    assert out == "stage 1: dim 1\nstage 2: dim 3\nstage 3: dim 5\n"


def test_usage_and_input_errors_exit_one(cli, tmp_path):
    code, _, err = cli(["no-such-verb"])
    assert code == EXIT_ERROR
    code, _, err = cli(["tree", "@" + str(tmp_path / "absent.json")])
    assert code == EXIT_ERROR
    assert err.startswith("error:")
    code, _, err = cli(["tree", "not-a-catalog-name"])
    assert code == EXIT_ERROR


def test_output_flag_writes_the_file(cli, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = cli(["tree", "c2bar", "-o", str(dest)])
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(dest.read_text())["edge"] == "r"
