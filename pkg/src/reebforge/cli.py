"""Command-line interface: synthesize, verify, and export certificates.

Exit codes: 0 success, 2 invalid input specification, 3 synthesis failure,
4 verification failure, 5 unsupported export dimension.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from .mesh import marching_squares, marching_tetrahedra
from .numeric import NumPoly
from .reebspec import FiberType, PathSpec, SpecError, ThetaSpec, validate
from .synth import (
    Certificate,
    SynthesisError,
    SynthParams,
    certificate_from_dict,
    certificate_to_dict,
    synthesize_path,
    synthesize_theta,
)
from .verify import VerifyConfig, verify

EXIT_OK = 0
EXIT_BAD_SPEC = 2
EXIT_SYNTH_FAIL = 3
EXIT_VERIFY_FAIL = 4
EXIT_BAD_DIM = 5


def _fail(code: int, msg: str) -> int:
    print(msg, file=sys.stderr)
    return code


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _parse_spec(data: dict):
    shape = data.get("shape")
    m = data.get("m")
    fibers_raw = data.get("fibers")
    if not isinstance(m, int) or not isinstance(fibers_raw, list):
        raise SpecError(["spec file needs integer 'm' and list 'fibers'"])
    fibers = tuple(
        FiberType(tuple((int(j), int(k)) for j, k in edge)) for edge in fibers_raw
    )
    if shape == "path":
        a = data.get("a")
        if not isinstance(a, int):
            raise SpecError(["path spec needs integer 'a'"])
        return validate(PathSpec(m=m, a=a, fibers=fibers))
    if shape == "theta":
        b = data.get("b")
        if not isinstance(b, int):
            raise SpecError(["theta spec needs integer 'b'"])
        return validate(ThetaSpec(m=m, b=b, fibers=fibers))
    raise SpecError([f"unknown shape {shape!r} (expected 'path' or 'theta')"])


def _parse_params(data: dict) -> SynthParams:
    p = data.get("params", {})
    kwargs = {}
    if "R" in p:
        kwargs["R"] = Fraction(p["R"])
    if "axis_ratio" in p:
        kwargs["axis_ratio"] = Fraction(p["axis_ratio"])
    return SynthParams(**kwargs)


def _load_certificate(path: str) -> Certificate:
    return certificate_from_dict(_load_json(path))


def _cmd_synth(args) -> int:
    try:
        data = _load_json(args.specfile)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(EXIT_BAD_SPEC, f"cannot read spec file: {exc}")
    try:
        spec = _parse_spec(data)
        params = _parse_params(data)
    except (SpecError, ValueError, TypeError) as exc:
        return _fail(EXIT_BAD_SPEC, f"invalid spec: {exc}")
    try:
        if spec.kind == "path":
            cert = synthesize_path(spec, params)
        else:
            cert = synthesize_theta(spec, params)
    except SynthesisError as exc:
        return _fail(EXIT_SYNTH_FAIL, f"synthesis failed: {exc}")
    payload = json.dumps(certificate_to_dict(cert), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    print(
        f"synthesized {cert.kind} certificate: ambient R^{cert.ambient}, "
        f"manifold {cert.predicted_manifold.text}, "
        f"{cert.predicted_critical_count} critical points",
        file=sys.stderr,
    )
    return EXIT_OK


def _resolution_from_step(cert: Certificate, step: float) -> int:
    extent = max(float(hi - lo) for lo, hi in cert.bounding_box)
    return max(8, int(np.ceil(extent / step)) + 1)


def _cmd_verify(args) -> int:
    try:
        cert = _load_certificate(args.certificate)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail(EXIT_BAD_SPEC, f"cannot read certificate: {exc}")
    config = VerifyConfig()
    if args.grid_step:
        config.slice_resolution = _resolution_from_step(cert, args.grid_step)
    if args.tol_f:
        config.tol_f = args.tol_f
    if args.eps_ns:
        config.eps_ns = args.eps_ns
    if args.slices_per_interval:
        config.slices_per_interval = args.slices_per_interval
    report = verify(cert, config)
    print(report.summary())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return EXIT_OK if report.ok else EXIT_VERIFY_FAIL


def _cmd_export(args) -> int:
    try:
        cert = _load_certificate(args.certificate)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        return _fail(EXIT_BAD_SPEC, f"cannot read certificate: {exc}")
    if args.what == "poly":
        text = cert.f_expanded.to_text()
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        return EXIT_OK
    F = NumPoly(cert.f_expanded)
    box = [(float(lo), float(hi)) for lo, hi in cert.bounding_box]
    if args.what == "mesh":
        if args.t is None:
            return _fail(EXIT_BAD_SPEC, "export mesh requires --t")
        res = args.resolution
        axes = [np.linspace(lo, hi, res) for lo, hi in box[1:]]
        vals = F.eval_grid([np.array([args.t])] + axes)[0]
        if len(box) == 3:
            segments, positions = marching_squares(vals, axes)
            keys = sorted(positions)
            index = {k: i + 1 for i, k in enumerate(keys)}
            with open(args.out, "w") as fh:
                for k in keys:
                    x, y = positions[k]
                    fh.write(f"v {x:.9g} {y:.9g} 0\n")
                for a, b in segments:
                    fh.write(f"l {index[a]} {index[b]}\n")
            return EXIT_OK
        if len(box) == 4:
            mesh = marching_tetrahedra(vals, axes)
            keys = sorted(mesh.positions)
            index = {k: i + 1 for i, k in enumerate(keys)}
            with open(args.out, "w") as fh:
                for k in keys:
                    x, y, z = mesh.positions[k]
                    fh.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
                for a, b, c in mesh.triangles:
                    fh.write(f"f {index[a]} {index[b]} {index[c]}\n")
            return EXIT_OK
        return _fail(
            EXIT_BAD_DIM,
            f"mesh export supports slices of 3- or 4-dimensional ambients, "
            f"not {len(box)}",
        )
    if args.what == "sweep":
        from .verify import slice_components

        svals = sorted(float(v) for v in cert.predicted_singular_values)
        lo, hi = svals[0], svals[-1]
        pad = (hi - lo) * 1e-3
        axes = [np.linspace(l, h, args.resolution) for l, h in box[1:]]
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "component_count"])
            for t in np.linspace(lo + pad, hi - pad, args.levels):
                w.writerow([f"{t:.9g}", len(slice_components(F, t, axes))])
        return EXIT_OK
    return _fail(EXIT_BAD_SPEC, f"unknown export kind {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reebforge",
        description="Synthesize and verify real polynomial level-set certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize a certificate from a spec file")
    p_synth.add_argument("specfile")
    p_synth.add_argument("--out", help="write the certificate JSON here")
    p_synth.set_defaults(func=_cmd_synth)

    p_verify = sub.add_parser("verify", help="verify a certificate numerically")
    p_verify.add_argument("certificate")
    p_verify.add_argument("--grid-step", type=float, default=None)
    p_verify.add_argument("--tol-f", type=float, default=None)
    p_verify.add_argument("--eps-ns", type=float, default=None)
    p_verify.add_argument("--slices-per-interval", type=int, default=None)
    p_verify.add_argument("--out", help="write the report JSON here")
    p_verify.set_defaults(func=_cmd_verify)

    p_export = sub.add_parser("export", help="export polynomial, mesh, or sweep data")
    p_export.add_argument("what", choices=["poly", "mesh", "sweep"])
    p_export.add_argument("certificate")
    p_export.add_argument("--out", required=True)
    p_export.add_argument("--t", type=float, default=None, help="slice level for mesh")
    p_export.add_argument("--resolution", type=int, default=64)
    p_export.add_argument("--levels", type=int, default=40, help="sweep sample count")
    p_export.set_defaults(func=_cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
