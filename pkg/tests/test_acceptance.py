"""The nine acceptance criteria, one test each.  Every test records a
PASS/FAIL line; the lines are printed in the terminal summary (see
conftest.py) or, when this file is run as a script, directly.

Criterion 3 contains the literal unit witness (k, p2) for g ≤ F(G(g)),
which does not verify: k applied to the tag is a constant function, and
the support of F(G(g)) holds only pairs.  The line for criterion 3 says
FAIL.  The remaining witnesses of that criterion are asserted in
test_criterion_3_construction_witnesses, and the literal witness is asserted on its own in a
strict xfail so the defect stays visible without failing the run.
"""

import subprocess
import sys

import pytest

from ewtopos import laws

LITERAL = "g below F(G(g)) via (k, p2)"
RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"


def summary(res):
    h, f, u = res.counts
    return f"{res.name}: {h} holds, {f} fails, {u} unknown"


def failures(res):
    return [(label, str(v)) for label, v in res.checks if not v.holds]


def run_criterion(n, *suites, size=None):
    results = [laws.SUITES[s](0) for s in suites]
    bad = [b for r in results for b in failures(r)]
    if size is not None:
        assert all(len(r.checks) >= size for r in results)
    record(n, not bad, "; ".join(summary(r) for r in results))
    return bad


def test_criterion_1_pca_axioms():
    assert run_criterion(1, "pca", size=500) == []


def test_criterion_2_compiler_against_evaluator():
    assert run_criterion(2, "compiler", size=200) == []


def test_criterion_3_construction_witnesses():
    res = laws.suite_witnesses(0)
    bad = failures(res)
    record(3, not bad, summary(res) + "".join(f"; failing: {label}" for label, _ in bad))
    assert [label for label, _ in bad] == [LITERAL]


@pytest.mark.xfail(strict=True, reason="k sends the tag to a function, outside the support")
def test_criterion_3_literal_unit_witness():
    res = laws.suite_witnesses(0)
    assert dict(res.checks)[LITERAL].holds


def test_criterion_4_heyting_laws():
    assert run_criterion(4, "heyting") == []


def test_criterion_5_frobenius_and_beck_chevalley():
    assert run_criterion(5, "frobenius", "beck-chevalley", size=25) == []


def test_criterion_6_fg_isomorphism():
    assert run_criterion(6, "fg", size=150) == []


def test_criterion_7_terminal_fibre():
    assert run_criterion(7, "terminal", size=100) == []


def test_criterion_8_topos_laws():
    assert run_criterion(8, "topos") == []


def test_criterion_9_determinism():
    first = [r.text(verbose=True) for r in laws.run("all", 0)]
    second = [r.text(verbose=True) for r in laws.run("all", 0)]
    # and once more from separate processes, through the report writer
    argv = [sys.executable, "-m", "ewtopos", "--seed", "0", "laws", "all", "--verbose"]
    a, b = (subprocess.run(argv, capture_output=True).stdout for _ in range(2))
    # the report writer indents each line of the list by two spaces
    body = "\n".join("  " + line for t in first for line in t.split("\n")).encode()
    ok = first == second and a == b and body in a
    record(9, ok, f"{len(first)} suites compared in process and across two processes")
    assert first == second
    assert a == b
    assert body in a


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion") and not name.endswith("literal_unit_witness"):
            try:
                fn()
            except AssertionError:
                pass
    for n in sorted(RESULTS):
        print(RESULTS[n])
