from pathlib import Path

from gpa.conventions import conventions, conventions_text

GOLDEN = Path(__file__).parent / "golden" / "conventions.golden"


def test_conventions_locked():
    assert conventions_text() == GOLDEN.read_text(encoding="utf-8")


def test_core_pairings():
    table = dict(conventions())
    for n in range(-2, 3):
        assert table[f"shifted n={n} {{x1_dag,x1}}"] == "1"
        assert table[f"shifted n={n} {{x1,x1_dag}}"] == "-1"
    assert table["bv Delta(x1*x1_dag)"] == "-1"
    assert table["ghost {b1,c1}"] == "1"
    assert table["canonical {q1,p1}"] == "1"
    assert table["hochschild {mu,mu} = 2*mu.mu"] == "true"
