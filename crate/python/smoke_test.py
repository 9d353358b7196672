#!/usr/bin/env python3
"""Smoke test for the curvlab_py extension module.

Builds the cdylib with cargo, loads it from a scratch directory, and checks
that the Python surface agrees with the reference values the catalog
documents. Run from anywhere inside the repository:

    python3 python/smoke_test.py [--skip-build]
"""

import json
import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    if "--skip-build" not in sys.argv:
        subprocess.run(
            ["cargo", "build", "-p", "curvlab-py"],
            cwd=REPO,
            check=True,
        )
    built = REPO / "target" / "debug" / "libcurvlab_py.so"
    if not built.exists():
        sys.exit(f"extension library not found at {built}")
    return built


def approx(a: float, b: float, tol: float = 1e-8) -> bool:
    return abs(a - b) <= tol * (1.0 + abs(b))


def main() -> None:
    built = build_extension()
    scratch = Path(tempfile.mkdtemp(prefix="curvlab-py-"))
    shutil.copy2(built, scratch / "curvlab_py.so")
    sys.path.insert(0, str(scratch))

    import curvlab_py as cl

    names = cl.catalog_names()
    assert len(names) >= 13, f"catalog shrank: {names}"
    assert "sphere_4" in names and "pp_wave_4" in names

    sphere = cl.Metric.from_catalog("sphere_4")
    assert sphere.dim == 4
    assert sphere.signature == "++++"
    assert sphere.coords[0] == "a"

    p = [1.1, 0.9, 1.3, 2.0]
    r = sphere.scalar_curvature(p)
    assert approx(r, 12.0), f"unit 4-sphere scalar curvature should be 12, got {r}"

    g = sphere.components_at(p)
    ric = sphere.ricci(p)
    for i in range(4):
        for j in range(4):
            assert approx(ric[i][j], 3.0 * g[i][j]), "Ricci must equal 3g on the unit sphere"

    w = sphere.weyl_norm(p)
    assert w is not None and w <= 1e-9, f"constant curvature forces Weyl = 0, got {w}"
    assert cl.Metric.from_catalog("s3_unit").weyl_norm([1.0, 1.0, 1.0]) is None

    one = cl.eval_expr("sin(x)^2 + cos(x)^2", ["x"], [0.7])
    assert approx(one, 1.0)

    report = json.loads(cl.analyze("catalog:r3_flat", points=3))
    assert report["report_kind"] == "analysis"
    assert report["structural_ok"] is True
    assert report["classification"]["predicates"]["flat"]["verdict"] is True

    again = cl.analyze("catalog:r3_flat", points=3)
    assert cl.analyze("catalog:r3_flat", points=3) == again, "reports must be deterministic"

    suite = json.loads(cl.verify("prop1.1", points=4))
    assert suite["report_kind"] == "verification"
    assert suite["passed"] is True

    text = subprocess.run(
        [str(REPO / "target" / "debug" / "curvlab"), "catalog", "export", "r3_flat"],
        capture_output=True,
        text=True,
    )
    if text.returncode == 0:
        from_text = cl.Metric.from_text(text.stdout)
        assert from_text.name == "r3_flat"
        assert approx(from_text.scalar_curvature([0.1, 0.2, 0.3]), 0.0, 1e-10)

    frw = json.loads(cl.Metric.from_catalog("frw_s3").analyze(points=4))
    qe = frw["classification"]["predicates"]["quasi_einstein_timelike"]
    assert qe["verdict"] is True, "expanding cosmology must fit the timelike rank-one branch"

    print("smoke test passed:", len(names), "catalog entries checked")


if __name__ == "__main__":
    main()
