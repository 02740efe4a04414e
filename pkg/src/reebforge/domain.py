"""Algebraic domains: bounded open sets cut out by polynomial factors.

A domain is D = intersection of {f_j > 0} with every boundary piece {f_j = 0}
a hypersurface.  Domains are built from balls by removing closed ellipsoids;
after a lift the single factor is the lifted polynomial itself.  Containment
and disjointness of removed ellipsoids are enforced by a deterministic margin
policy at construction time, and re-checked numerically by
:func:`validate_domain`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product

import numpy as np
from scipy import ndimage

from .numeric import NumPoly, grid_axes, newton_project
from .poly import Polynomial

_SQRT_SCALE = 10**8


class DomainError(ValueError):
    """Raised when a domain construction step is geometrically invalid."""


def sqrt_lower(v: Fraction) -> Fraction:
    """Rational lower bound for sqrt(v), v >= 0."""
    if v < 0:
        raise ValueError("negative operand")
    n = v.numerator * v.denominator * _SQRT_SCALE**2
    return Fraction(math.isqrt(n), v.denominator * _SQRT_SCALE)


def sqrt_upper(v: Fraction) -> Fraction:
    """Rational upper bound for sqrt(v), v >= 0."""
    if v < 0:
        raise ValueError("negative operand")
    n = v.numerator * v.denominator * _SQRT_SCALE**2
    r = math.isqrt(n)
    if r * r == n:
        return Fraction(r, v.denominator * _SQRT_SCALE)
    return Fraction(r + 1, v.denominator * _SQRT_SCALE)


@dataclass(frozen=True)
class Ellipsoid:
    """Axis-aligned closed ellipsoid: sum (x_j - c_j)^2 / r_j <= 1."""

    center: tuple[Fraction, ...]
    semiaxes_sq: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.center) != len(self.semiaxes_sq):
            raise ValueError("center and semiaxes_sq lengths differ")
        if any(r <= 0 for r in self.semiaxes_sq):
            raise ValueError("semiaxes_sq must be positive")
        object.__setattr__(self, "center", tuple(Fraction(c) for c in self.center))
        object.__setattr__(
            self, "semiaxes_sq", tuple(Fraction(r) for r in self.semiaxes_sq)
        )

    @property
    def dim(self) -> int:
        return len(self.center)

    def factor(self) -> Polynomial:
        """Defining factor, positive outside the ellipsoid."""
        n = self.dim
        p = Polynomial.constant(n, -1)
        for j, (c, r) in enumerate(zip(self.center, self.semiaxes_sq)):
            x = Polynomial.variable(n, j)
            p = p + (x - Polynomial.constant(n, c)) ** 2 * (Fraction(1) / r)
        return p

    def semiaxes_upper(self) -> tuple[Fraction, ...]:
        return tuple(sqrt_upper(r) for r in self.semiaxes_sq)

    def bounding_box(self) -> tuple[tuple[Fraction, Fraction], ...]:
        axes = self.semiaxes_upper()
        return tuple((c - s, c + s) for c, s in zip(self.center, axes))


@dataclass(frozen=True)
class AlgebraicDomain:
    """Bounded open set D = intersection of {f_j > 0} with a stored witness."""

    ambient_dim: int
    factors: tuple[Polynomial, ...]
    witness: tuple[Fraction, ...]
    bounding_box: tuple[tuple[Fraction, Fraction], ...]
    holes: tuple[Ellipsoid, ...] = ()
    meta: tuple[str, ...] = ()

    def __post_init__(self):
        for f in self.factors:
            if f.num_vars != self.ambient_dim:
                raise ValueError("factor variable count differs from ambient_dim")
        if len(self.witness) != self.ambient_dim:
            raise ValueError("witness dimension mismatch")

    def contains(self, x) -> bool:
        return all(f.eval(x) > 0 for f in self.factors)

    def box_floats(self) -> list[tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in self.bounding_box]


def ball(n: int, center, radius) -> AlgebraicDomain:
    """Open ball as an algebraic domain: factor r^2 - |x - c|^2."""
    radius = Fraction(radius)
    if radius <= 0:
        raise DomainError("radius must be positive")
    center = tuple(Fraction(c) for c in center)
    if len(center) != n:
        raise DomainError("center dimension mismatch")
    p = Polynomial.constant(n, radius * radius)
    for j, c in enumerate(center):
        x = Polynomial.variable(n, j)
        p = p - (x - Polynomial.constant(n, c)) ** 2
    pad = radius / 5
    box = tuple((c - radius - pad, c + radius + pad) for c in center)
    return AlgebraicDomain(
        ambient_dim=n,
        factors=(p,),
        witness=center,
        bounding_box=box,
        holes=(),
        meta=(f"ball(center={tuple(map(str, center))}, radius={radius})",),
    )


def _boxes_clear(b1, b2, margin: Fraction) -> bool:
    """True if the boxes are separated by >= margin along some axis."""
    for (lo1, hi1), (lo2, hi2) in zip(b1, b2):
        if lo2 - hi1 >= margin or lo1 - hi2 >= margin:
            return True
    return False


def _margin(holes) -> Fraction:
    smallest = min(min(h.semiaxes_sq) for h in holes)
    return sqrt_lower(smallest) / 10


def _containment_ok(domain: AlgebraicDomain, hole: Ellipsoid, margin: Fraction) -> bool:
    """Check all existing factors stay positive on the hole's inflated box.

    Exact rational evaluation on a small tensor grid over the box; the box
    contains the closed ellipsoid, so positivity there certifies containment
    up to the grid resolution.
    """
    box = hole.bounding_box()
    samples_per_axis = 5 if hole.dim <= 3 else 3
    axes = []
    for (lo, hi), _ in zip(box, hole.center):
        lo -= margin
        hi += margin
        axes.append(
            [lo + (hi - lo) * Fraction(k, samples_per_axis - 1) for k in range(samples_per_axis)]
        )
    for pt in iter_product(*axes):
        for f in domain.factors:
            if f.eval(pt) <= 0:
                return False
    return True


def _find_witness(factors, box, dim) -> tuple[Fraction, ...] | None:
    """Deterministic interior point: coarse-grid point maximizing min factor."""
    per_axis = 13 if dim <= 3 else 7
    axes = []
    for lo, hi in box:
        axes.append([lo + (hi - lo) * Fraction(k, per_axis - 1) for k in range(per_axis)])
    best = None
    best_val = None
    for pt in iter_product(*axes):
        vals = [f.eval(pt) for f in factors]
        m = min(vals)
        if m > 0 and (best_val is None or m > best_val):
            best_val = m
            best = pt
    return tuple(best) if best is not None else None


def _normalized_factor(h: Ellipsoid, box) -> Polynomial:
    """Hole factor scaled so its maximum over the box is exactly 1.

    The raw factor sum (x_j - c_j)^2 / r_j - 1 grows like 1 / r_j away from a
    small hole, which would blow up the lifted-variable extent; dividing by
    the box maximum (attained at a corner, the factor being convex) keeps the
    product of factors moderate without changing any sign.
    """
    f = h.factor()
    corners = iter_product(*[(lo, hi) for lo, hi in box])
    peak = max(f.eval(list(c)) for c in corners)
    if peak <= 1:
        return f
    return f * (Fraction(1) / peak)


def remove_ellipsoids(d: AlgebraicDomain, holes) -> AlgebraicDomain:
    """Remove the closed ellipsoids from D, appending one factor per hole.

    Enforces the margin policy: hole closures must clear each other and the
    existing boundary by at least one tenth of the smallest semiaxis.
    """
    holes = tuple(holes)
    if not holes:
        return d
    for h in holes:
        if h.dim != d.ambient_dim:
            raise DomainError(f"hole dimension {h.dim} != ambient {d.ambient_dim}")
    margin = _margin(holes + d.holes if d.holes else holes)
    all_holes = list(d.holes) + list(holes)
    for i in range(len(all_holes)):
        for j in range(i + 1, len(all_holes)):
            if j < len(d.holes):
                continue  # pre-existing pairs were checked earlier
            if not _boxes_clear(
                all_holes[i].bounding_box(), all_holes[j].bounding_box(), margin
            ):
                raise DomainError(
                    f"hole closures too close: #{i} and #{j} "
                    f"(centers {tuple(map(str, all_holes[i].center))} / "
                    f"{tuple(map(str, all_holes[j].center))})"
                )
    for k, h in enumerate(holes):
        if not _containment_ok(d, h, margin):
            raise DomainError(
                f"hole #{len(d.holes) + k} at {tuple(map(str, h.center))} "
                "is not contained in the domain with the required margin"
            )
    factors = d.factors + tuple(_normalized_factor(h, d.bounding_box) for h in holes)
    witness = d.witness
    if not all(f.eval(witness) > 0 for f in factors):
        witness = _find_witness(factors, d.bounding_box, d.ambient_dim)
        if witness is None:
            raise DomainError("no interior witness point found after hole removal")
    return AlgebraicDomain(
        ambient_dim=d.ambient_dim,
        factors=factors,
        witness=witness,
        bounding_box=d.bounding_box,
        holes=d.holes + holes,
        meta=d.meta + tuple(f"removed ellipsoid at {tuple(map(str, h.center))}" for h in holes),
    )


@dataclass
class ValidationReport:
    """Outcome of the numeric domain checks, with witnesses for failures."""

    ok: bool
    failures: list[tuple[str, str]] = field(default_factory=list)
    component_count: int = 0
    min_boundary_grad: float = float("inf")

    def fail(self, name: str, detail: str):
        self.ok = False
        self.failures.append((name, detail))


def _sign_change_cells(values: np.ndarray) -> np.ndarray:
    """Boolean cell mask: some corner pair of the cell differs in sign."""
    pos = values >= 0
    dim = values.ndim
    cells_shape = tuple(s - 1 for s in values.shape)
    any_pos = np.zeros(cells_shape, dtype=bool)
    all_pos = np.ones(cells_shape, dtype=bool)
    for corner in iter_product((0, 1), repeat=dim):
        sl = tuple(slice(c, s - 1 + c) for c, s in zip(corner, values.shape))
        p = pos[sl]
        any_pos |= p
        all_pos &= p
    return any_pos & ~all_pos


def validate_domain(
    d: AlgebraicDomain, grid_step, eps_ns: float = 1e-6
) -> ValidationReport:
    """Numeric sanity checks: non-singular boundary pieces, pairwise disjoint
    zero sets, bounded non-empty interior, connectedness at the grid scale."""
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    report = ValidationReport(ok=True)
    box = d.box_floats()
    axes = grid_axes(box, [float(grid_step)] * d.ambient_dim)
    nps = [NumPoly(f) for f in d.factors]
    vals = [np0.eval_grid(axes) for np0 in nps]

    # (a) boundary non-singularity near each factor's zero set
    min_grad = float("inf")
    for k, (np0, v) in enumerate(zip(nps, vals)):
        cells = _sign_change_cells(v)
        if not cells.any():
            report.fail(
                "factor_zero_set_present",
                f"factor #{k} has no zero-crossing inside the bounding box",
            )
            continue
        near = np.zeros(v.shape, dtype=bool)
        for corner in iter_product((0, 1), repeat=d.ambient_dim):
            sl = tuple(slice(c, s - 1 + c) for c, s in zip(corner, v.shape))
            near[sl] |= cells
        idx = np.argwhere(near)
        pts = np.stack([axes[a][idx[:, a]] for a in range(d.ambient_dim)], axis=1)
        # measure the gradient on the zero set itself, not at nearby grid
        # points (interior critical points of f are fine and must not count)
        pts, resid = newton_project(np0, pts, tol=1e-10)
        pts = pts[resid <= 1e-8]
        if pts.shape[0] == 0:
            report.fail(
                "factor_nonsingular",
                f"factor #{k}: no grid seed converged onto its zero set",
            )
            continue
        g = np0.grad_points(pts)
        norms = np.sqrt(np.einsum("ij,ij->i", g, g))
        worst = float(norms.min())
        min_grad = min(min_grad, worst)
        if worst < eps_ns:
            i = int(np.argmin(norms))
            report.fail(
                "factor_nonsingular",
                f"factor #{k} gradient norm {worst:.3e} at {pts[i].tolist()}",
            )
    report.min_boundary_grad = min_grad

    # (b) pairwise disjoint zero sets at this resolution
    cell_masks = [_sign_change_cells(v) for v in vals]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            overlap = cell_masks[i] & cell_masks[j]
            if overlap.any():
                cell = np.argwhere(overlap)[0]
                pt = [axes[a][cell[a]] for a in range(d.ambient_dim)]
                report.fail(
                    "zero_sets_disjoint",
                    f"factors #{i} and #{j} cross the same grid cell near {pt}",
                )

    # (c) non-empty and bounded
    wit = [float(c) for c in d.witness]
    if not all(np0.eval_points(np.array([wit]))[0] > 0 for np0 in nps):
        report.fail("witness_interior", f"stored witness {wit} is not interior")
    inside = np.ones_like(vals[0], dtype=bool)
    for v in vals:
        inside &= v > 0
    if not inside.any():
        report.fail("nonempty", "no grid point lies inside the domain")
    else:
        boundary_touch = False
        for a in range(d.ambient_dim):
            sl_lo = tuple(0 if k == a else slice(None) for k in range(d.ambient_dim))
            sl_hi = tuple(-1 if k == a else slice(None) for k in range(d.ambient_dim))
            if inside[sl_lo].any() or inside[sl_hi].any():
                boundary_touch = True
        if boundary_touch:
            report.fail("bounded", "interior mask touches the bounding box")

    # (d) connectedness at this resolution
    if inside.any():
        labels, count = ndimage.label(inside)
        report.component_count = int(count)
        if count != 1:
            report.fail("connected", f"{count} components at grid step {grid_step}")
    return report
