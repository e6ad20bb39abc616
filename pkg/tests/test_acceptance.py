"""The acceptance battery: one test per criterion, exact tolerances (zero
residual everywhere), one printed pass/fail line each."""

import pytest

from jsalg import acceptance as acc


def _run(name, fn, **kw):
    report = fn(**kw)
    line = f"[{'PASS' if report.passed else 'FAIL'}] criterion {name}"
    if report.elapsed_ms:
        line += f" ({report.elapsed_ms / 1000:.1f}s)"
    print(line)
    if not report.passed:
        pytest.fail(f"criterion {name}: {report.counterexample}")
    return report


def test_criterion_1_jordan_identities():
    r = _run("1 jordan-identities", acc.criterion_1_jordan_identities)
    # the battery covers the whole catalog, both identities each
    assert len(r.details["subSuites"]) == 2 * 67


def test_criterion_2_brackets():
    r = _run("2 brackets", acc.criterion_2_brackets)
    assert all(s == "pass" for s in r.details["subStatus"])


def test_criterion_3_schouten():
    _run("3 schouten", acc.criterion_3_schouten)


def test_criterion_4_tkk():
    _run("4 tkk", acc.criterion_4_tkk)


def test_criterion_5_simplicity():
    _run("5 simplicity", acc.criterion_5_simplicity)


def test_criterion_6_short_gradings():
    _run("6 short-gradings", acc.criterion_6_short_gradings)


def test_criterion_7_isomorphisms():
    _run("7 isomorphisms", acc.criterion_7_isomorphisms)


def test_criterion_8_semidirect():
    _run("8 semidirect", acc.criterion_8_semidirect)


def test_criterion_9_determinism():
    _run("9 determinism", acc.criterion_9_determinism)
