"""Acceptance gate: the five end-to-end criteria, one printed line each.

Each test prints ``ACCEPTANCE <n> (<name>): PASS|FAIL`` before asserting, so
the gate status is readable straight off the pytest output.
"""

import dataclasses
import json
import time
from fractions import Fraction

import numpy as np

from reebforge import (
    VerifyConfig,
    certificate_to_dict,
    sphere_certificate,
    synthesize_theta,
    verify,
)
from reebforge.cli import main as cli_main
from reebforge.numeric import NumPoly
from reebforge.poly import Polynomial
from reebforge.verify import find_critical_points, sample_zero_set, slice_components

from test_verify import flood_fill_count

F = Fraction


def _line(n, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {n} ({name}): {status}{' — ' + detail if detail else ''}")


def _box(cert):
    return [(float(a), float(b)) for a, b in cert.bounding_box]


def _check(report, name):
    return next(c for c in report.checks if c.name == name)


class TestAcceptance:
    def test_1_sphere_golden(self, sphere2_cert, sphere3_cert):
        t0 = time.monotonic()
        golden = Polynomial.constant(4, 1)
        for j in range(4):
            golden = golden - Polynomial.variable(4, j) ** 2
        exact_ok = sphere3_cert.f_expanded == golden

        crit = find_critical_points(
            NumPoly(sphere2_cert.f_expanded), _box(sphere2_cert), VerifyConfig()
        )
        crit_ok = crit.shape[0] == 2 and (
            abs(sorted(crit[:, 0])[0] + 1) <= 1e-6
            and abs(sorted(crit[:, 0])[1] - 1) <= 1e-6
        )

        rep2 = verify(sphere2_cert, VerifyConfig(slice_resolution=40))
        reeb_ok = (
            _check(rep2, "reeb_edge_count").passed
            and _check(rep2, "reeb_vertex_degrees").passed
        )
        rep3 = verify(sphere3_cert, VerifyConfig(slice_resolution=40))
        chi_ok = _check(rep3, "fiber_euler").passed  # chi = 2 at 3 midslices
        elapsed = time.monotonic() - t0
        ok = exact_ok and crit_ok and reeb_ok and chi_ok and elapsed < 10
        _line(1, "sphere golden", ok, f"{elapsed:.1f}s")
        assert exact_ok, "expanded polynomial differs from the exact unit 3-sphere"
        assert crit_ok, f"critical points {crit}"
        assert reeb_ok, rep2.summary()
        assert chi_ok, rep3.summary()
        assert elapsed < 10, f"took {elapsed:.1f}s"

    def test_2_theta_surface(self, theta_cert):
        t0 = time.monotonic()
        diam = max(b - a for a, b in _box(theta_cert))
        res = int(np.ceil(diam / (diam / 200))) + 1
        report = verify(theta_cert, VerifyConfig(slice_resolution=res))
        elapsed = time.monotonic() - t0
        ok = report.ok and elapsed < 60
        _line(2, "theta graph, genus-2 surface", ok, f"{elapsed:.1f}s")
        assert _check(report, "critical_count").passed, report.summary()
        assert _check(report, "critical_values").passed, report.summary()
        assert _check(report, "reeb_vertex_degrees").detail.startswith(
            "observed [[1], [4], [4], [1]]"
        )
        assert _check(report, "reeb_edge_count").detail.startswith("observed 5")
        assert _check(report, "reeb_interval_counts").detail.startswith(
            "observed [1, 3, 1]"
        )
        assert _check(report, "nonsingular").passed, report.summary()
        assert report.ok, report.summary()
        assert elapsed < 60, f"took {elapsed:.1f}s"

    def test_3_path_torus_fiber(self, path_cert):
        t0 = time.monotonic()
        extent = max(b - a for a, b in _box(path_cert))
        res = int(np.ceil(extent / (extent / 60))) + 1
        report = verify(path_cert, VerifyConfig(slice_resolution=res))
        elapsed = time.monotonic() - t0
        ok = report.ok and elapsed < 600
        _line(3, "path graph, sphere-torus-sphere fibers", ok, f"{elapsed:.1f}s")
        assert _check(report, "critical_values").passed, report.summary()
        assert _check(report, "reeb_vertex_degrees").detail.startswith(
            "observed [[1], [2], [2], [1]]"
        )
        assert _check(report, "reeb_edge_count").detail.startswith("observed 3")
        # fiber profile (2, 0, 2), every fiber connected
        assert _check(report, "fiber_component_count").passed, report.summary()
        assert _check(report, "fiber_euler").passed, report.summary()
        mid = path_cert.expected.edges_over_interval(F(-1), F(1))
        assert [f.euler_characteristic(3) for f in mid] == [0]
        assert report.ok, report.summary()
        assert elapsed < 600, f"took {elapsed:.1f}s"

    def test_4_property_suite(self, theta_cert, theta_spec):
        results = {}

        # finite-difference gradients on accepted zero-set samples
        P = NumPoly(theta_cert.f_expanded)
        box = _box(theta_cert)
        pts = sample_zero_set(P, box, 24, tol_f=1e-9)[:200]
        exact = P.grad_points(pts)
        h = 1e-6
        worst = 0.0
        for v in range(P.num_vars):
            hi = pts.copy()
            lo = pts.copy()
            hi[:, v] += h
            lo[:, v] -= h
            fd = (P.eval_points(hi) - P.eval_points(lo)) / (2 * h)
            err = np.abs(fd - exact[:, v]) / np.maximum(1, np.abs(exact[:, v]))
            worst = max(worst, float(err.max()))
        results["fd_gradients"] = worst <= 1e-5

        # flood fill against the independent union-find oracle
        axes = [np.linspace(lo, hi, 81) for lo, hi in box[1:]]
        oracle_ok = True
        for t in (-2.0, 0.0, 2.0):
            vals = P.eval_grid([np.array([t])] + axes)[0]
            oracle_ok &= len(slice_components(P, t, axes)) == flood_fill_count(
                vals > 0
            )
        results["flood_fill_oracle"] = oracle_ok

        # exact reflection symmetry in every lifted coordinate
        f = theta_cert.f_expanded
        sym_ok = True
        for v in range(theta_cert.layout.base_dim, theta_cert.ambient):
            sym_ok &= f.restrict(v, F(7, 5)) == f.restrict(v, F(-7, 5))
        results["reflection_symmetry"] = sym_ok

        # refinement stability: halving the grid step changes no verdict
        coarse = verify(theta_cert, VerifyConfig(slice_resolution=60))
        fine = verify(theta_cert, VerifyConfig(slice_resolution=120))
        results["refinement_stability"] = coarse.ok and fine.ok and [
            (c.name, c.passed) for c in coarse.checks
        ] == [(c.name, c.passed) for c in fine.checks]

        # byte-identical determinism of synthesis
        a = json.dumps(certificate_to_dict(synthesize_theta(theta_spec)))
        b = json.dumps(certificate_to_dict(synthesize_theta(theta_spec)))
        results["determinism"] = a == b

        ok = all(results.values())
        _line(4, "property suite", ok, str(results))
        assert ok, results

    def test_5_fault_injection(self, theta_cert, tmp_path):
        # (a) perturb the polynomial by 1/100: verification must fail loudly
        shifted = dataclasses.replace(
            theta_cert,
            f_expanded=theta_cert.f_expanded
            + Polynomial.constant(theta_cert.ambient, F(1, 100)),
        )
        rep_a = verify(shifted, VerifyConfig(slice_resolution=60))
        a_ok = (not rep_a.ok) and len(rep_a.failing()) > 0

        # (b) shift a predicted singular value: named check fails, CLI exits 4
        data = certificate_to_dict(theta_cert)
        data["predicted"]["critical_values"] = [
            "-3", "-9/8", "-9/8", "9/8", "9/8", "3"
        ]
        bad = tmp_path / "tampered.json"
        bad.write_text(json.dumps(data))
        report_path = tmp_path / "report.json"
        code = cli_main(["verify", str(bad), "--out", str(report_path)])
        report = json.loads(report_path.read_text())
        named = [c["name"] for c in report["checks"] if not c["passed"]]
        b_ok = code == 4 and "critical_values" in named

        ok = a_ok and b_ok
        _line(
            5,
            "fault injection",
            ok,
            f"shift fails {rep_a.failing()}; tamper exits 4 failing {named}",
        )
        assert a_ok, rep_a.summary()
        assert b_ok, (code, named)
