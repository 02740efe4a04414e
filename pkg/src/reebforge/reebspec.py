"""Input specifications: target graph shape and regular-fiber prescriptions.

Two shapes are supported: a path graph with a vertices (interior edges may
carry non-sphere fibers) and a theta-like graph with two degree-1 vertices,
two vertices of degree b+1, and b parallel edges.  A fiber prescription is a
multiset of handle indices: (j, k) means the connected sum contains k copies
of S^j x S^(m-1-j); the empty multiset is the (m-1)-sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class SpecError(ValueError):
    """Validation failure; carries the names of the violated hypotheses."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class FiberType:
    """Connected sum of sphere products, as a multiset of handle indices."""

    handles: tuple[tuple[int, int], ...] = ()  # (index j, count k)

    def __post_init__(self):
        object.__setattr__(
            self, "handles", tuple((int(j), int(k)) for j, k in self.handles)
        )

    @property
    def is_sphere(self) -> bool:
        return not self.handles

    def total_handles(self) -> int:
        return sum(k for _, k in self.handles)

    def normalize(self, m: int) -> "FiberType":
        """Fold S^j x S^(m-1-j) onto its mirror index min(j, m-1-j) and merge."""
        merged: dict[int, int] = {}
        for j, k in self.handles:
            if k < 1:
                raise SpecError([f"fiber handle count {k} must be positive"])
            if not 1 <= j <= m - 2:
                raise SpecError(
                    [f"fiber handle index {j} outside [1, {m - 2}] for dimension {m}"]
                )
            jj = min(j, m - 1 - j)
            merged[jj] = merged.get(jj, 0) + k
        return FiberType(tuple(sorted(merged.items())))

    def euler_characteristic(self, m: int) -> int | None:
        """Euler characteristic of the fiber when it is a surface (m = 3)."""
        if m != 3:
            return None
        return 2 - 2 * self.total_handles()

    def describe(self, m: int) -> str:
        if self.is_sphere:
            return f"S^{m - 1}"
        parts = []
        for j, k in self.handles:
            piece = f"S^{j} x S^{m - 1 - j}"
            parts.append(piece if k == 1 else f"{k}({piece})")
        return " # ".join(parts)


SPHERE = FiberType()


@dataclass(frozen=True)
class PathSpec:
    """Path graph with a vertices; fibers[j] sits over the (j+1)-th edge."""

    m: int
    a: int
    fibers: tuple[FiberType, ...]


@dataclass(frozen=True)
class ThetaSpec:
    """Theta-like graph with b parallel edges; fibers[q] sits over e_(q+1)."""

    m: int
    b: int
    fibers: tuple[FiberType, ...]


@dataclass(frozen=True)
class ValidatedSpec:
    """Normalized spec that passed all hypothesis checks."""

    kind: str  # "path" | "theta"
    m: int
    count: int  # a for path, b for theta
    fibers: tuple[FiberType, ...]

    @property
    def sweep_vertex_count(self) -> int:
        return self.count if self.kind == "path" else 4


def normalize_fiber(f: FiberType, m: int) -> FiberType:
    return f.normalize(m)


def validate(spec: PathSpec | ThetaSpec) -> ValidatedSpec:
    """Check every hypothesis and return the normalized spec."""
    violations: list[str] = []
    if isinstance(spec, PathSpec):
        if spec.a <= 3:
            violations.append(f"a>3 required, got a={spec.a}")
        if spec.m <= 2:
            violations.append(f"m>2 required, got m={spec.m}")
        if len(spec.fibers) != spec.a - 1:
            violations.append(
                f"expected {spec.a - 1} edge fibers, got {len(spec.fibers)}"
            )
        if violations:
            raise SpecError(violations)
        try:
            fibers = tuple(f.normalize(spec.m) for f in spec.fibers)
        except SpecError as exc:
            raise SpecError(exc.violations)
        if not fibers[0].is_sphere:
            violations.append("first edge fiber must be the unit sphere")
        if not fibers[-1].is_sphere:
            violations.append("last edge fiber must be the unit sphere")
        for j in range(len(fibers) - 1):
            if fibers[j].is_sphere and fibers[j + 1].is_sphere:
                violations.append(
                    f"adjacent sphere fibers at edges {j + 1} and {j + 2}: "
                    "every interior vertex needs a non-sphere neighbor"
                )
        if violations:
            raise SpecError(violations)
        return ValidatedSpec("path", spec.m, spec.a, fibers)
    if isinstance(spec, ThetaSpec):
        if spec.m <= 1:
            violations.append(f"m>1 required, got m={spec.m}")
        if spec.b <= 1:
            violations.append(f"b>1 required, got b={spec.b}")
        if len(spec.fibers) != spec.b:
            violations.append(f"expected {spec.b} edge fibers, got {len(spec.fibers)}")
        if violations:
            raise SpecError(violations)
        if spec.m == 2:
            for q, f in enumerate(spec.fibers):
                if not f.is_sphere:
                    violations.append(
                        f"edge {q + 1}: for m=2 every fiber must be the circle"
                    )
            if violations:
                raise SpecError(violations)
            fibers = tuple(spec.fibers)
        else:
            try:
                fibers = tuple(f.normalize(spec.m) for f in spec.fibers)
            except SpecError as exc:
                raise SpecError(exc.violations)
        return ValidatedSpec("theta", spec.m, spec.b, fibers)
    raise SpecError([f"unknown spec type {type(spec).__name__}"])


@dataclass(frozen=True)
class ExpectedReeb:
    """Predicted Reeb graph: vertices with sweep values, edges with fibers."""

    vertices: tuple[tuple[int, Fraction], ...]  # (vertex id, value)
    edges: tuple[tuple[int, int, FiberType], ...]  # (u, v, fiber)

    @property
    def degree_sequence(self) -> list[int]:
        deg: dict[int, int] = {v: 0 for v, _ in self.vertices}
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return sorted(deg.values())

    def interval_component_counts(self) -> list[int]:
        """Edge multiplicity over each open interval between vertex values."""
        values = sorted({val for _, val in self.vertices})
        vmap = dict(self.vertices)
        counts = []
        for lo, hi in zip(values, values[1:]):
            mid = (lo + hi) / 2
            c = 0
            for u, v, _ in self.edges:
                a, b = sorted((vmap[u], vmap[v]))
                if a < mid < b:
                    c += 1
            counts.append(c)
        return counts

    def edges_over_interval(self, lo: Fraction, hi: Fraction) -> list[FiberType]:
        vmap = dict(self.vertices)
        mid = (lo + hi) / 2
        out = []
        for u, v, f in self.edges:
            a, b = sorted((vmap[u], vmap[v]))
            if a < mid < b:
                out.append(f)
        return out


def expected_reeb(spec: ValidatedSpec, values) -> ExpectedReeb:
    """Build the expected Reeb graph with vertices at the given sweep values."""
    values = [Fraction(v) for v in values]
    if any(b <= a for a, b in zip(values, values[1:])):
        raise SpecError(["sweep values must be strictly increasing"])
    if len(values) != spec.sweep_vertex_count:
        raise SpecError(
            [
                f"expected {spec.sweep_vertex_count} sweep values for shape "
                f"{spec.kind}, got {len(values)}"
            ]
        )
    if spec.kind == "path":
        vertices = tuple((i, values[i]) for i in range(spec.count))
        edges = tuple((j, j + 1, spec.fibers[j]) for j in range(spec.count - 1))
        return ExpectedReeb(vertices, edges)
    # theta: ids 0 = v_l, 1, 2 = the high-degree pair, 3 = v_r
    vertices = tuple((i, values[i]) for i in range(4))
    edges = [(0, 1, SPHERE)]
    edges.extend((1, 2, spec.fibers[q]) for q in range(spec.count))
    edges.append((2, 3, SPHERE))
    return ExpectedReeb(vertices, tuple(edges))
