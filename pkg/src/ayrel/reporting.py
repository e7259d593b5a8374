"""Report bundle: delimited tables with matplotlib figures alongside.

Everything quantitative is written as TSV with exact values (plus decimal
embeddings); each table gets a rendered figure in the same directory.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction

from ayrel.field import NFElem, ZERO, alpha_power, nf_decimal

def _flt(x):
    return nf_decimal(x, digits=12)


def _mpl():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def divergence_report(outdir, k_max=30):
    from ayrel.family import circumference, verify_divergence
    rows = verify_divergence(k_max)
    path = os.path.join(outdir, "divergence.tsv")
    with open(path, "w") as f:
        f.write("k\trel_time\tcylinders\tmax_circumference\tembedded\n")
        for row in rows:
            f.write(f"{row['k']}\t{row['r']}\t{row['cylinders']}\t"
                    f"{row['max_circumference']}\t"
                    f"{row['max_circumference_float']:.12e}\n")
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = [row["k"] for row in rows]
    vals = [row["max_circumference_float"] for row in rows]
    ax.semilogy(ks, vals, "o-", label="max circumference at r=(3/2)a^-k")
    guide = [vals[0] * _flt(alpha_power(k - ks[0])) for k in ks]
    ax.semilogy(ks, guide, "--", label="geometric guide (ratio alpha)")
    ax.set_xlabel("renormalization depth k")
    ax.set_ylabel("max vertical circumference")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "divergence.png"), dpi=130)
    plt.close(fig)
    return {"rows": len(rows), "table": "divergence.tsv",
            "figure": "divergence.png"}


def widths_report(outdir, samples=60):
    from ayrel.cylinders import WidthFunction
    lo = _flt(alpha_power(1))
    hi = _flt(alpha_power(-2))
    js = [0, 1, 2, 3]
    wfs = {j: WidthFunction(j) for j in js}
    path = os.path.join(outdir, "widths.tsv")
    rs = [Fraction(i, samples) * (Fraction(hi).limit_denominator(10**6)
                                  - Fraction(lo).limit_denominator(10**6))
          + Fraction(lo).limit_denominator(10**6)
          for i in range(samples + 1)]
    with open(path, "w") as f:
        f.write("r\t" + "\t".join(f"width_C{j}" for j in js) + "\n")
        for r in rs:
            vals = [wfs[j].value(NFElem(r)) for j in js]
            f.write(str(r) + "\t" + "\t".join(str(v) for v in vals) + "\n")
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [float(r) for r in rs]
    for j in js:
        ax.plot(xs, [_flt(wfs[j].value(NFElem(r))) for r in rs],
                label=f"width of C_{j}")
    ax.set_xlabel("rel time r")
    ax.set_ylabel("cylinder width")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "widths.png"), dpi=130)
    plt.close(fig)
    return {"rows": len(rs), "table": "widths.tsv", "figure": "widths.png"}


def segment_report(outdir, samples=8, budget=2 * 10**5):
    from ayrel.iet import segment_family
    rs = [ZERO]
    for i in range(1, samples + 1):
        step = NFElem(Fraction(i, samples)) * alpha_power(4)
        rs.extend([step, -step])
    rows = segment_family(rs, budget=budget)
    path = os.path.join(outdir, "segment.tsv")
    with open(path, "w") as f:
        f.write("r\tverdict\tintervals\tmax_period\tsaf_zero\troute\n")
        for row in rows:
            f.write(f"{row['r']}\t{row['verdict']}\t{row['intervals']}\t"
                    f"{row['max_period'] or ''}\t"
                    f"{int(row['saf_zero'])}\t{row['route']}\n")
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [_flt(row["r"]) for row in rows]
    ys = [1 if row["verdict"] == "periodic" else 0 for row in rows]
    ax.scatter(xs, ys, c=["tab:blue" if y else "tab:red" for y in ys])
    ax.set_yticks([0, 1], ["unresolved", "periodic"])
    ax.set_xlabel("rel time r")
    ax.set_title("vertical return maps along the rel segment")
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "segment.png"), dpi=130)
    plt.close(fig)
    return {"rows": len(rows), "table": "segment.tsv",
            "figure": "segment.png"}


def torus_report(outdir, samples=8, seed=777):
    import random
    from ayrel.cylinders import vertical_decomposition
    from ayrel.family import build_xr
    from ayrel.twist import extract_chart, orbit_closure
    from ayrel.verify import _is_alpha_power, _sample_in
    rng = random.Random(seed)
    path = os.path.join(outdir, "torus.tsv")
    rows = []
    while len(rows) < samples:
        r = _sample_in(rng, NFElem(0), alpha_power(-4))
        if _is_alpha_power(r):
            continue
        chart = extract_chart(vertical_decomposition(build_xr(r)))
        oc = orbit_closure(chart)
        rows.append((r, oc.dimension,
                     [str(c) for c in chart.circumferences()]))
    with open(path, "w") as f:
        f.write("r\tdimension\tcircumferences\n")
        for (r, d, cs) in rows:
            f.write(f"{r}\t{d}\t{';'.join(cs)}\n")
    return {"rows": len(rows), "table": "torus.tsv"}


def cylinder_report(outdir, r=None):
    from fractions import Fraction as F
    from ayrel.cylinders import decomposition_tsv, vertical_decomposition
    from ayrel.family import build_xr
    from ayrel.twist import extract_chart, orbit_closure
    r = NFElem.coerce(r if r is not None else F(3, 2))
    decomp = vertical_decomposition(build_xr(r))
    with open(os.path.join(outdir, "cylinders.tsv"), "w") as f:
        f.write(decomposition_tsv(decomp, r))
    chart = extract_chart(decomp)
    payload = {"chart": chart.to_json(),
               "orbit_closure": orbit_closure(chart).to_json()}
    with open(os.path.join(outdir, "torus.json"), "w") as f:
        json.dump(payload, f, sort_keys=True, indent=1)
    return {"table": "cylinders.tsv", "chart": "torus.json"}


def write_report_bundle(outdir, k_max=30, samples=8, budget=2 * 10**5):
    os.makedirs(outdir, exist_ok=True)
    summary = {
        "divergence": divergence_report(outdir, k_max=k_max),
        "widths": widths_report(outdir),
        "segment": segment_report(outdir, samples=samples, budget=budget),
        "torus": torus_report(outdir, samples=samples),
        "cylinders": cylinder_report(outdir),
    }
    with open(os.path.join(outdir, "summary.json"), "w") as f:
        json.dump(summary, f, sort_keys=True, indent=1)
    return summary
