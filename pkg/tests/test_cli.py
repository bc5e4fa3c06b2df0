import io
from pathlib import Path

import pytest

from iskit import docformat
from iskit.catalog import b2
from iskit.cli import main
from iskit.morphisms import find_isomorphism

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
FILES = sorted(CORPUS.glob("*.isk"))


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


def reparse(capsys, text, monkeypatch, *extra):
    return run(capsys, "check", *extra, "-", stdin=text, monkeypatch=monkeypatch)


# -- parsing ----------------------------------------------------------------------


@pytest.mark.parametrize("text, fragment", [
    ("kind: partial_bijections\npoints: x\n", "no generators"),
    ("kind: cayley_table\nelements: a b\ntable:\na a\n", "line 4"),
    ("kind: partial_bijections\npoints: x y\ngen s: x->z\n", "line 3"),
    ("kind: nonsense\n", "line 1"),
    ("", ""),
])
def test_input_errors_exit_2(capsys, monkeypatch, text, fragment):
    code, out, err = run(capsys, "analyze", "-", stdin=text, monkeypatch=monkeypatch)
    assert code == 2 and out == ""
    assert err.startswith("iskit: ") and fragment in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "analyze", str(CORPUS / "absent.isk"))
    assert code == 2 and err.startswith("iskit: ")


def test_non_inverse_table(capsys, monkeypatch):
    left_zero = "kind: cayley_table\nelements: a b\ntable:\na a\nb b\n"
    code, _, err = run(capsys, "analyze", "-", stdin=left_zero, monkeypatch=monkeypatch)
    assert code == 2 and "do not commute" in err
    code, out, _ = run(capsys, "check", "-", stdin=left_zero, monkeypatch=monkeypatch)
    assert code == 1 and "do not commute" in out


def test_caps_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "--max-order", "10", str(CORPUS / "i3.isk"))
    assert code == 3 and "cap max-order" in err
    code, _, err = run(capsys, "congruences", str(CORPUS / "i3.isk"))
    assert code == 3 and "cap max-congruence-order" in err


# -- analyze ----------------------------------------------------------------------


def test_analyze_b2(capsys):
    code, out, _ = run(capsys, "analyze", str(CORPUS / "b2.isk"))
    r = report(out)
    assert code == 0
    assert r["order"] == "5" and r["idempotents"] == "3"
    assert r["is_congruence_free"] == "true" and r["is_E_star_unitary"] == "true"
    assert r["green.D.sizes"] == "4 1" and r["munn_image.order"] == "5"


def test_analyze_i2(capsys):
    _, out, _ = run(capsys, "analyze", str(CORPUS / "i2.isk"))
    r = report(out)
    assert r["order"] == "7" and r["idempotents"] == "4"
    assert r["is_fundamental"] == "true" and r["is_congruence_free"] == "false"
    assert r["identity"] != "none"


def test_analyze_z2(capsys):
    _, out, _ = run(capsys, "analyze", str(CORPUS / "z2.isk"))
    r = report(out)
    assert r["is_group"] == "true" and r["sigma.classes"] == "2" and r["zero"] == "none"
    assert r["mu.classes"] == "1" and r["xi.classes"] == "n/a"


def test_analyze_stdin_matches_file(capsys, monkeypatch):
    path = CORPUS / "pz2_vee.isk"
    _, a, _ = run(capsys, "analyze", str(path))
    _, b, _ = run(capsys, "analyze", "-", stdin=path.read_text(), monkeypatch=monkeypatch)
    assert a == b


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_analyze_deterministic(capsys, path):
    first = run(capsys, "analyze", str(path))
    second = run(capsys, "analyze", str(path))
    assert first[0] == 0 and first == second


# -- emitted documents re-parse ---------------------------------------------------


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_quotients_reparse(capsys, monkeypatch, path):
    for kind in ("sigma", "mu", "xi"):
        code, out, err = run(capsys, "quotient", kind, str(path))
        if code == 2:
            assert kind == "xi" and "zero" in err
            continue
        assert code == 0, err
        assert reparse(capsys, out, monkeypatch)[0] == 0


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_embeddings_reparse(capsys, monkeypatch, path):
    _, src, _ = run(capsys, "analyze", str(path))
    order = report(src)["order"]
    for kind in ("wagner-preston", "munn"):
        code, out, err = run(capsys, "embed", kind, str(path))
        assert code == 0, err
        assert reparse(capsys, out, monkeypatch, "--max-carrier", "64")[0] == 0
        if kind == "wagner-preston":
            _, again, _ = run(capsys, "analyze", "--max-carrier", "64", "-",
                              stdin=out, monkeypatch=monkeypatch)
            assert report(again)["order"] == order


def test_rees_quotient(capsys, monkeypatch):
    code, out, _ = run(capsys, "quotient", "rees", "a*a", str(CORPUS / "b2.isk"))
    assert code == 0
    S = docformat.build(docformat.parse(out)).semigroup
    assert find_isomorphism(S, b2()) is not None
    code, out2, _ = run(capsys, "quotient", "rees", "--ideal", "a*a", str(CORPUS / "b2.isk"))
    assert out2 == out
    code, out3, _ = run(capsys, "quotient", "rees", "a*a", "-",
                        stdin=(CORPUS / "b2.isk").read_text(), monkeypatch=monkeypatch)
    assert out3 == out
    code, _, err = run(capsys, "quotient", "rees", "a", str(CORPUS / "b2.isk"))
    assert code == 2 and err.startswith("iskit: ")


def test_munn_embedding_of_b2(capsys, monkeypatch):
    _, out, _ = run(capsys, "embed", "munn", str(CORPUS / "b2.isk"))
    code, rep, _ = run(capsys, "analyze", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and report(rep)["order"] == "5"


# -- cosets and recognition -------------------------------------------------------


def test_cosets_i2(capsys, monkeypatch):
    # e is the identity on x
    code, out, _ = run(capsys, "cosets", "--sub", "e", str(CORPUS / "i2.isk"))
    r = report(out)
    assert code == 0 and r["cosets"] == "2" and r["transitive"] == "true"
    code, doc, _ = run(capsys, "cosets", "--sub", "e", "--emit-action", str(CORPUS / "i2.isk"))
    assert code == 0 and "kind: action" in doc
    assert reparse(capsys, doc, monkeypatch)[0] == 0


def test_cosets_rejects_zero(capsys):
    code, _, err = run(capsys, "cosets", "--sub", "a*a", str(CORPUS / "b2.isk"))
    assert code == 2 and err.startswith("iskit: ")


def test_recognize_semidirect(capsys):
    _, out, _ = run(capsys, "recognize", "semidirect", str(CORPUS / "pz2_vee.isk"))
    r = report(out)
    assert r["recognized"] == "true" and r["agree"] == "true"
    assert all(r[f"condition.{k}"] == "true" for k in range(1, 7))
    _, out, _ = run(capsys, "recognize", "semidirect", str(CORPUS / "b2.isk"))
    r = report(out)
    assert r["recognized"] == "false" and all(r[f"condition.{k}"] == "false" for k in range(1, 7))


@pytest.mark.parametrize("kind, name", [("clifford", "clifford_vee"), ("clifford", "z2"),
                                        ("groupoid-zero", "b2"), ("groupoid-zero", "pair2")])
def test_recognize_emit_reparses(capsys, monkeypatch, kind, name):
    path = CORPUS / f"{name}.isk"
    code, out, err = run(capsys, "recognize", kind, "--emit", str(path))
    assert code == 0, err
    assert reparse(capsys, out, monkeypatch)[0] == 0
    _, a, _ = run(capsys, "analyze", str(path))
    _, b, _ = run(capsys, "analyze", "-", stdin=out, monkeypatch=monkeypatch)
    assert report(a)["order"] == report(b)["order"]


def test_recognize_clifford_negative(capsys):
    code, out, _ = run(capsys, "recognize", "clifford", str(CORPUS / "b2.isk"))
    assert code == 0 and report(out)["is_clifford"] == "false"
    # nothing to emit, so the report is printed instead
    code, out2, _ = run(capsys, "recognize", "clifford", "--emit", str(CORPUS / "b2.isk"))
    assert code == 0 and out2 == out


# -- congruences and check --------------------------------------------------------


def test_congruences(capsys):
    _, out, _ = run(capsys, "congruences", str(CORPUS / "b2.isk"))
    assert report(out)["congruences"] == "2"
    _, out, _ = run(capsys, "congruences", str(CORPUS / "chain3.isk"))
    assert report(out)["congruences"] == "4"
    _, out, _ = run(capsys, "congruences", "--all", str(CORPUS / "z2.isk"))
    assert report(out)["congruences"] == "2" and out.count("\n") > 1


@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_check_corpus(capsys, path):
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0 and out and all(line.endswith(": ok") for line in out.splitlines())
