import json

import pytest

from ayrel.cli import main
from ayrel.surface import Surface


def test_build_writes_surface_json(tmp_path):
    out = tmp_path / "x.json"
    assert main(["build", "--r", "3/2", "-o", str(out)]) == 0
    payload = json.loads(out.read_text())
    surf = Surface.from_json(payload["surface"])
    assert surf.stratum_check() == (3, (2, 2))
    assert payload["rel_time"] == "3/2"


def test_build_accepts_field_expressions(tmp_path):
    out = tmp_path / "xa3.json"
    assert main(["build", "--r", "a^3", "-o", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["rel_time"] == "1 - a - a^2"


def test_build_parse_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["build", "--r", "3//2", "-o", str(tmp_path / "never.json")])
    assert err.value.code == 3


def test_svg_renders(tmp_path):
    out = tmp_path / "x.svg"
    assert main(["svg", "--r", "1", "-o", str(out)]) == 0
    body = out.read_text()
    assert body.startswith("<svg")
    assert "circle" in body  # singular dots
    # deterministic output
    out2 = tmp_path / "x2.svg"
    main(["svg", "--r", "1", "-o", str(out2)])
    assert out.read_text() == out2.read_text()


def test_verify_reports_written_on_failure_paths(tmp_path):
    # a passing tiny suite writes json+tsv and exits 0
    jpath = tmp_path / "r.json"
    tpath = tmp_path / "r.tsv"
    code = main(["verify", "--suite", "holonomies", "--scale", "0.02",
                 "-o", str(jpath), "--tsv", str(tpath)])
    assert code == 0
    report = json.loads(jpath.read_text())
    assert report["suite"] == "holonomies"
    assert report["pass"] is True
    assert tpath.read_text().startswith("id\tstatement")


def test_verify_exit_one_on_broken_base(tmp_path, monkeypatch):
    # a corrupted base fixture must fail the renorm suite with exit 1
    import ayrel.family as family
    from ayrel.field import alpha_power

    wrong = family.build_xr(alpha_power(3))
    monkeypatch.setattr(family, "build_x0", lambda: wrong)
    jpath = tmp_path / "broken.json"
    code = main(["verify", "--suite", "renorm", "--scale", "0.02",
                 "-o", str(jpath)])
    assert code == 1
    report = json.loads(jpath.read_text())
    assert report["pass"] is False
    failing = [c["id"] for c in report["checks"] if not c["pass"]]
    assert failing


def test_report_bundle_contents(tmp_path):
    out = tmp_path / "bundle"
    code = main(["report", "-o", str(out), "--kmax", "3", "--samples", "2",
                 "--budget", "50000"])
    assert code == 0
    names = {p.name for p in out.iterdir()}
    assert {"divergence.tsv", "divergence.png", "widths.tsv", "widths.png",
            "segment.tsv", "segment.png", "torus.tsv", "cylinders.tsv",
            "torus.json", "summary.json"} <= names
    cyl = (out / "cylinders.tsv").read_text().splitlines()
    assert cyl[0].startswith("j\tcircumference")
    assert len(cyl) == 5  # four cylinders at the sample rel time


def test_verify_exit_two_on_budget_exhaustion(tmp_path):
    # a budget too small even to extract the return maps is exit 2
    jpath = tmp_path / "budget.json"
    code = main(["verify", "--suite", "iet", "--scale", "0.02",
                 "--budget", "5", "-o", str(jpath)])
    assert code == 2
    report = json.loads(jpath.read_text())
    assert report["pass"] is True  # nothing failed; nothing was decided
