"""Acceptance battery: one pass/fail line per criterion.

Each criterion runs the matching verification suite from
``hatloop.verify`` under a wall-clock budget; the status line is
written through the capture so it always appears in the run log.
"""

import time

from hatloop import verify

import conftest


def _run(label, suites, budget, **kw):
    t0 = time.perf_counter()
    checks = []
    for name in suites:
        checks.extend(verify.SUITES[name](**kw))
    dt = time.perf_counter() - t0
    passed = sum(c.passed for c in checks)
    total = passed + sum(c.failed for c in checks)
    ok = all(c.ok for c in checks) and dt <= budget
    detail = "; ".join(c.detail for c in checks if c.detail)
    line = (f"{'PASS' if ok else 'FAIL'} {label}: {passed}/{total} checks "
            f"in {dt:.2f}s (budget {budget:g}s)")
    if detail:
        line += f" [{detail}]"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert ok, line
    return checks


def test_criterion_01_bracket_table():
    _run("criterion-01 bracket-table", ["bracket-table"], 1.0)


def test_criterion_02_jacobi():
    _run("criterion-02 jacobi-identity", ["jacobi"], 30.0)


def test_criterion_03_hopf_compat():
    _run("criterion-03 hopf-poisson-compat", ["hopf"], 30.0)


def test_criterion_04_semiclassical():
    _run("criterion-04 semiclassical-oracle", ["semiclassical"], 10.0)


def test_criterion_05_frobenius():
    _run("criterion-05 frobenius-morphism", ["frobenius"], 5.0)


def test_criterion_06_factorization():
    checks = _run("criterion-06 factorization-roundtrip",
                  ["factorization"], 60.0, tol=1e-9)
    assert sum(c.passed for c in checks) == 250  # 200 scalar + 50 matrix


def test_criterion_07_group_axioms():
    _run("criterion-07 group-axioms", ["group"], 30.0)


def test_criterion_08_manin_triple():
    _run("criterion-08 manin-triple", ["manin"], 30.0)


def test_criterion_09_leaf_invariants():
    _run("criterion-09 leaf-invariants", ["leaves"], 30.0, tol=1e-8)


def test_criterion_10_qdiff():
    _run("criterion-10 qdiff-residual", ["qdiff"], 60.0, tol=1e-8)


def test_criterion_11_poisson_oracle():
    _run("criterion-11 poisson-numeric-oracle", ["poisson-at"], 30.0,
         tol=1e-8)
