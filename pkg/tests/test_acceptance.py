"""The acceptance gate: every criterion at its stated sample counts.

Each test prints one pass/fail line (visible with -s or -rA) and asserts
exactly what the corresponding library check verified.  All equalities are
exact; the only tolerance anywhere is the 1e-7 embedding bound on the
divergence tail, fixed here.
"""

import json

from ayrel.verify import (check_base_surface, check_cylinders,
                          check_divergence, check_dominant_eigenvector,
                          check_field_kernel, check_holonomies,
                          check_iet, check_renormalization,
                          check_twist_torus)


def _gate(label, checks):
    ok = all(c.passed for c in checks)
    detail = "; ".join(f"{c.check_id}={'pass' if c.passed else 'FAIL'}"
                       for c in checks)
    print(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    assert ok, f"{label}: {detail}"


def test_criterion_1_field_kernel():
    _gate("criterion 1 (field kernel, 1000 samples, |k| <= 60)",
          check_field_kernel(samples=1000))


def test_criterion_2_base_surface():
    _gate("criterion 2 (base surface, trace budget 1e5)",
          check_base_surface(budget=10**5))


def test_criterion_3_holonomy_formulas():
    _gate("criterion 3 (closed forms, 200 samples, k in [-8, 8])",
          check_holonomies(samples=200, k_lo=-8, k_hi=8))


def test_criterion_4_cylinder_geometry():
    _gate("criterion 4 (cylinders, 50 samples per window, k in [-3, 6])",
          check_cylinders(samples_per_window=50, k_lo=-3, k_hi=6))


def test_criterion_5_renormalization():
    _gate("criterion 5 (renormalization and -I, 10 samples)",
          check_renormalization(samples=10))


def test_criterion_6_divergence():
    checks, rows = check_divergence(k_max=30)
    assert len(rows) == 30
    _gate("criterion 6 (divergence surrogate, k = 1..30, tail < 1e-7)",
          checks)


def test_criterion_7_twist_torus():
    _gate("criterion 7 (twist torus, 20 samples, d = 3)",
          check_twist_torus(samples=20))


def test_criterion_8_dominant_eigenvector():
    _gate("criterion 8 (dominant eigenvector, |k| <= 30)",
          check_dominant_eigenvector(k_range=30))


def test_criterion_9_iet_layer():
    _gate("criterion 9 (IETs periodic with SAF 0; base unresolved at 1e6)",
          check_iet(samples=20, budget=10**6))


def test_criterion_10_cli_determinism(tmp_path):
    from ayrel.cli import main
    outs = []
    for run in (1, 2):
        jpath = tmp_path / f"report{run}.json"
        tpath = tmp_path / f"report{run}.tsv"
        code = main(["verify", "--suite", "all", "--scale", "0.05",
                     "--budget", "120000",
                     "-o", str(jpath), "--tsv", str(tpath)])
        assert code == 0
        outs.append((jpath.read_bytes(), tpath.read_bytes()))
    ok = outs[0] == outs[1]
    print(f"{'PASS' if ok else 'FAIL'}  criterion 10 (byte-identical "
          "verify reports, exit 0)")
    assert ok
    parsed = json.loads(outs[0][0])
    assert parsed["pass"] is True
