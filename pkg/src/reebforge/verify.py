"""Numerical verification of a synthesis certificate.

Every prediction a certificate makes is rechecked against float samples of the
actual zero set: non-singularity, the critical points of the first-coordinate
projection, the Reeb graph extracted from a guarded level sweep, and (for
3-manifolds) the topology of the regular fibers via triangulated slices.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import ndimage

from .mesh import marching_tetrahedra
from .numeric import NumPoly, newton_project
from .synth import Certificate


def _thread_count() -> int:
    raw = os.environ.get("REEBFORGE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class VerifyConfig:
    """Tolerances and resolutions for certificate verification."""

    slice_resolution: int = 48  # points per axis in level-set slices
    slices_per_interval: int = 3
    seed_resolution: int = 13  # per-axis seeds for the critical-point solver
    sample_resolution: int = 24  # per-axis grid for zero-set sampling
    tol_f: float = 1e-9  # |F| residual accepted as "on the zero set"
    eps_ns: float = 1e-6  # minimum gradient norm on the zero set
    tol_value: float = 1e-4  # critical-value agreement
    guard_fraction: float = 0.1  # guard band around singular values, per gap
    max_newton_iter: int = 80
    threads: int = field(default_factory=_thread_count)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


@dataclass
class VerificationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def summary(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(
            "verification "
            + ("PASSED" if self.ok else "FAILED (" + ", ".join(self.failing()) + ")")
        )
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _float_box(box) -> list[tuple[float, float]]:
    return [(float(lo), float(hi)) for lo, hi in box]


def _axes(box, resolution: int) -> list[np.ndarray]:
    # odd point counts: a symmetric box then samples its midplane exactly,
    # so the thin neighborhood of a lifted coordinate's zero plane is never
    # missed by the grid
    n = resolution | 1
    return [np.linspace(lo, hi, n) for lo, hi in box]


def sample_zero_set(
    F: NumPoly, box, resolution: int, tol_f: float
) -> np.ndarray:
    """Points on {F = 0}: sign-change cell centres, Newton-projected.

    Returns an (N, n) array; N = 0 means the zero set was not seen at this
    resolution.
    """
    axes = _axes(box, resolution)
    vals = F.eval_grid(axes)
    pos = vals >= 0
    n = len(axes)
    change = np.zeros(tuple(s - 1 for s in vals.shape), dtype=bool)
    base = pos[tuple(slice(0, -1) for _ in range(n))]
    for corner in range(1, 2**n):
        sl = tuple(
            slice(1, None) if (corner >> v) & 1 else slice(0, -1) for v in range(n)
        )
        change |= pos[sl] != base
    cells = np.argwhere(change)
    if cells.size == 0:
        return np.empty((0, n))
    centres = np.stack(
        [(axes[v][cells[:, v]] + axes[v][cells[:, v] + 1]) / 2 for v in range(n)],
        axis=1,
    )
    pts, res = newton_project(F, centres, tol=tol_f)
    return pts[res <= tol_f]


def check_nonsingular(F: NumPoly, pts: np.ndarray) -> float:
    """Smallest gradient norm over the given zero-set samples."""
    if pts.shape[0] == 0:
        return float("inf")
    g = F.grad_points(pts)
    return float(np.sqrt(np.einsum("ij,ij->i", g, g)).min())


def find_critical_points(
    F: NumPoly, box, config: VerifyConfig
) -> np.ndarray:
    """Solutions of F = 0, dF/dx_k = 0 (k >= 2) inside the box.

    Multistart Newton on the square system; the Jacobian stacks the gradient of
    F over the Hessian rows 2..n.  Returns deduplicated points sorted by x1.
    """
    n = F.num_vars
    res = config.seed_resolution
    while res**n > 3_000_000 and res > 5:
        res -= 2
    axes = _axes(box, res)
    mesh = np.meshgrid(*axes, indexing="ij")
    seeds = np.stack([m.ravel() for m in mesh], axis=1)

    partials = F.gradient()
    second = [[NumPoly(p._poly.partial(v)) for v in range(n)] for p in partials]

    def G(x):
        cols = [F.eval_points(x)] + [partials[k].eval_points(x) for k in range(1, n)]
        return np.stack(cols, axis=1)

    def J(x):
        rows = [np.stack([partials[v].eval_points(x) for v in range(n)], axis=1)]
        for k in range(1, n):
            rows.append(
                np.stack([second[k][v].eval_points(x) for v in range(n)], axis=1)
            )
        return np.stack(rows, axis=1)  # (N, n, n)

    score = np.abs(G(seeds)).sum(axis=1)
    order = np.argsort(score)
    x = seeds[order[: min(2000, len(order))]].astype(np.float64)
    for _ in range(config.max_newton_iter):
        g = G(x)
        if np.abs(g).max() < 1e-13:
            break
        step = np.einsum("nij,nj->ni", np.linalg.pinv(J(x)), g)
        np.clip(step, -0.5, 0.5, out=step)
        x = x - step
    resid = np.abs(G(x)).max(axis=1)
    lo = np.array([b[0] for b in box]) - 1e-6
    hi = np.array([b[1] for b in box]) + 1e-6
    keep = (resid < 1e-8) & (x >= lo).all(axis=1) & (x <= hi).all(axis=1)
    x = x[keep]
    if x.shape[0] == 0:
        return x
    # dedup: greedy clustering at a scale well below the critical-value spacing
    diam = float(max(h - l for l, h in box))
    tol = 1e-6 * diam
    order = np.lexsort(x.T[::-1])
    out: list[np.ndarray] = []
    for p in x[order]:
        if not any(np.linalg.norm(p - q) < tol for q in out):
            out.append(p)
    pts = np.array(out)
    return pts[np.argsort(pts[:, 0])]


def _slice_values(F: NumPoly, t: float, slice_axes: list[np.ndarray]) -> np.ndarray:
    return F.eval_grid([np.array([t])] + slice_axes)[0]


def _cell_mask(vals: np.ndarray) -> np.ndarray:
    pos = vals >= 0
    n = vals.ndim
    base = pos[tuple(slice(0, -1) for _ in range(n))]
    change = np.zeros(base.shape, dtype=bool)
    for corner in range(1, 2**n):
        sl = tuple(
            slice(1, None) if (corner >> v) & 1 else slice(0, -1) for v in range(n)
        )
        change |= pos[sl] != base
    return change


def slice_components(
    F: NumPoly, t: float, slice_axes: list[np.ndarray]
) -> list[frozenset[int]]:
    """Connected components of the level set x1 = t, as sets of grid points.

    Each component of the level set bounds exactly one component of the
    enclosed solid region {F > 0} (the zero set is the boundary of that
    region), so flood fill (full connectivity) runs over the positive grid
    points: these regions persist across nearby levels, which makes the sets
    comparable between slices on the shared grid.
    """
    mask = _slice_values(F, t, slice_axes) > 0
    structure = np.ones((3,) * mask.ndim, dtype=int)
    labels, count = ndimage.label(mask, structure=structure)
    flat = labels.ravel()
    comps = []
    for lbl in range(1, count + 1):
        comps.append(frozenset(np.flatnonzero(flat == lbl).tolist()))
    return comps


@dataclass
class ReebResult:
    """Reeb graph read off the sweep: per-interval data and vertex degrees."""

    singular_values: list[float]
    interval_counts: list[int]
    degrees_by_value: list[list[int]]  # cluster degrees at each singular value
    edge_count: int
    continuity_ok: bool


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def extract_reeb(
    F: NumPoly, box, singular_values: list[float], config: VerifyConfig
) -> ReebResult:
    """Sweep the first coordinate and assemble the Reeb graph.

    Levels are sampled inside each interval between consecutive singular
    values, at a guard-band distance from the endpoints.  Components at
    consecutive levels are linked by cell-set overlap into tracks (edges);
    track frontiers meeting across a singular value are clustered into a
    vertex whose degree is the number of incident tracks.
    """
    svals = sorted(singular_values)
    gaps = [b - a for a, b in zip(svals, svals[1:])]
    if not gaps:
        raise ValueError("need at least two singular values to sweep")
    guard = min(gaps) * config.guard_fraction
    slice_axes = _axes(box[1:], config.slice_resolution)
    k = max(2, config.slices_per_interval)

    def comps_at(t: float) -> list[frozenset[int]]:
        return slice_components(F, t, slice_axes)

    # per interval: list of levels, each a list of components
    interval_levels: list[list[list[frozenset[int]]]] = []
    level_ts: list[list[float]] = []
    pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    try:
        for lo, hi in zip(svals, svals[1:]):
            ts = list(np.linspace(lo + guard, hi - guard, k))
            level_ts.append(ts)
            if pool is not None:
                interval_levels.append(list(pool.map(comps_at, ts)))
            else:
                interval_levels.append([comps_at(t) for t in ts])
    finally:
        if pool is not None:
            pool.shutdown()

    continuity_ok = True
    interval_counts = []
    # tracks per interval: union-find over (level index, component index)
    tracks_per_interval: list[dict] = []  # root -> {level: comp index}
    for levels in interval_levels:
        uf = _UnionFind()
        for li in range(len(levels) - 1):
            for a, ca in enumerate(levels[li]):
                for b, cb in enumerate(levels[li + 1]):
                    if ca & cb:
                        uf.union((li, a), (li + 1, b))
        members: dict = {}
        for li, comps in enumerate(levels):
            for a in range(len(comps)):
                members.setdefault(uf.find((li, a)), {}).setdefault(li, []).append(a)
        for levels_hit in members.values():
            if len(levels_hit) != len(levels) or any(
                len(v) != 1 for v in levels_hit.values()
            ):
                continuity_ok = False
        tracks_per_interval.append(members)
        interval_counts.append(len(levels[len(levels) // 2]))

    # cluster track frontiers across each singular value
    degrees_by_value: list[list[int]] = []
    n_intervals = len(interval_levels)
    for vi in range(len(svals)):
        left = vi - 1  # interval ending at this value
        right = vi  # interval starting here
        uf = _UnionFind()
        left_tracks = []
        right_tracks = []
        if 0 <= left < n_intervals:
            last = len(interval_levels[left]) - 1
            for root, levels_hit in tracks_per_interval[left].items():
                idx = levels_hit.get(last, [None])[0]
                if idx is not None:
                    left_tracks.append(
                        (("L", root), interval_levels[left][last][idx])
                    )
        if 0 <= right < n_intervals:
            for root, levels_hit in tracks_per_interval[right].items():
                idx = levels_hit.get(0, [None])[0]
                if idx is not None:
                    right_tracks.append((("R", root), interval_levels[right][0][idx]))
        for la, ca in left_tracks:
            uf.find(la)
            for rb, cb in right_tracks:
                if ca & cb:
                    uf.union(la, rb)
        for rb, _ in right_tracks:
            uf.find(rb)
        clusters: dict = {}
        for tag, _ in left_tracks + right_tracks:
            clusters.setdefault(uf.find(tag), []).append(tag)
        degrees_by_value.append(sorted(len(v) for v in clusters.values()))

    edge_count = sum(len(m) for m in tracks_per_interval)
    return ReebResult(
        singular_values=svals,
        interval_counts=interval_counts,
        degrees_by_value=degrees_by_value,
        edge_count=edge_count,
        continuity_ok=continuity_ok,
    )


def fiber_mesh_stats(
    F: NumPoly, t: float, box, resolution: int
) -> list[dict]:
    """Triangulate the slice x1 = t (3-d slices only) and return per-component
    mesh statistics, refining once if a component reports an odd Euler
    characteristic (a closed surface cannot have one, so it is a grid artifact).
    """
    if len(box) != 4:
        raise ValueError("fiber meshing needs a 4-dimensional ambient box")
    for res in (resolution, 2 * resolution):
        axes = _axes(box[1:], res)
        vals = _slice_values(F, t, axes)
        stats = marching_tetrahedra(vals, axes).component_stats()
        if stats and all(s["chi"] % 2 == 0 for s in stats):
            return stats
    return stats


def verify(cert: Certificate, config: VerifyConfig | None = None) -> VerificationReport:
    """Check every prediction in a certificate against the numeric zero set."""
    config = config or VerifyConfig()
    checks: list[CheckResult] = []
    F = NumPoly(cert.f_expanded)
    box = _float_box(cert.bounding_box)

    samples = sample_zero_set(F, box, config.sample_resolution, config.tol_f)
    checks.append(
        CheckResult(
            "zero_set_nonempty",
            samples.shape[0] > 0,
            f"{samples.shape[0]} samples at |F| <= {config.tol_f:g}",
        )
    )

    min_grad = check_nonsingular(F, samples)
    checks.append(
        CheckResult(
            "nonsingular",
            samples.shape[0] > 0 and min_grad >= config.eps_ns,
            f"min |grad F| on samples = {min_grad:.3e} (needs >= {config.eps_ns:g})",
        )
    )

    crit = find_critical_points(F, box, config)
    predicted_vals = sorted(float(v) for v in cert.predicted_critical_values)
    found_vals = sorted(crit[:, 0].tolist()) if crit.size else []
    count_ok = len(found_vals) == cert.predicted_critical_count
    checks.append(
        CheckResult(
            "critical_count",
            count_ok,
            f"found {len(found_vals)}, predicted {cert.predicted_critical_count}",
        )
    )
    if count_ok:
        devs = [abs(a - b) for a, b in zip(found_vals, predicted_vals)]
        worst = max(devs) if devs else 0.0
        checks.append(
            CheckResult(
                "critical_values",
                worst <= config.tol_value,
                f"max |found - predicted| = {worst:.3e} (tol {config.tol_value:g})",
            )
        )
    else:
        checks.append(
            CheckResult(
                "critical_values",
                False,
                "not comparable: critical point count mismatch",
            )
        )

    svals = [float(v) for v in cert.predicted_singular_values]
    reeb = extract_reeb(F, box, svals, config)
    checks.append(
        CheckResult(
            "reeb_track_continuity",
            reeb.continuity_ok,
            "every level-set component persists across its interval"
            if reeb.continuity_ok
            else "a component appeared or vanished between singular values",
        )
    )
    expected_counts = cert.expected.interval_component_counts()
    checks.append(
        CheckResult(
            "reeb_interval_counts",
            reeb.interval_counts == expected_counts,
            f"observed {reeb.interval_counts}, expected {expected_counts}",
        )
    )
    exp_degrees = _expected_degrees_by_value(cert)
    checks.append(
        CheckResult(
            "reeb_vertex_degrees",
            reeb.degrees_by_value == exp_degrees,
            f"observed {reeb.degrees_by_value}, expected {exp_degrees}",
        )
    )
    checks.append(
        CheckResult(
            "reeb_edge_count",
            reeb.edge_count == len(cert.expected.edges),
            f"observed {reeb.edge_count}, expected {len(cert.expected.edges)}",
        )
    )

    if cert.m == 3 and cert.ambient == 4:
        checks.extend(_fiber_checks(cert, F, box, config))

    return VerificationReport(checks)


def _expected_degrees_by_value(cert: Certificate) -> list[list[int]]:
    by_value: dict[Fraction, list[int]] = {}
    deg: dict[int, int] = {v: 0 for v, _ in cert.expected.vertices}
    for u, v, _ in cert.expected.edges:
        deg[u] += 1
        deg[v] += 1
    for vid, val in cert.expected.vertices:
        by_value.setdefault(val, []).append(deg[vid])
    return [sorted(by_value[val]) for val in sorted(by_value)]


def _fiber_checks(
    cert: Certificate, F: NumPoly, box, config: VerifyConfig
) -> list[CheckResult]:
    checks = []
    values = sorted({val for _, val in cert.expected.vertices})
    gaps = [float(b - a) for a, b in zip(values, values[1:])]
    guard = min(gaps) * config.guard_fraction
    k = max(2, config.slices_per_interval)
    all_connected = True
    chi_ok = True
    conn_detail = []
    chi_detail = []
    for lo, hi in zip(values, values[1:]):
        fibers = cert.expected.edges_over_interval(lo, hi)
        expected_chi = sorted(f.euler_characteristic(cert.m) for f in fibers)
        for t in np.linspace(float(lo) + guard, float(hi) - guard, k):
            stats = fiber_mesh_stats(F, float(t), box, config.slice_resolution)
            got_chi = sorted(s["chi"] for s in stats)
            if len(stats) != len(fibers):
                all_connected = False
                conn_detail.append(
                    f"t={t:.4g}: {len(stats)} components, expected {len(fibers)}"
                )
            if got_chi != expected_chi:
                chi_ok = False
                chi_detail.append(f"t={t:.4g}: chi {got_chi}, expected {expected_chi}")
    checks.append(
        CheckResult(
            "fiber_component_count",
            all_connected,
            "; ".join(conn_detail) if conn_detail else "all fibers as expected",
        )
    )
    checks.append(
        CheckResult(
            "fiber_euler",
            chi_ok,
            "; ".join(chi_detail) if chi_detail else "all fiber chi as expected",
        )
    )
    return checks
