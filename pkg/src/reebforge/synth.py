"""Drive the constructive proofs: layouts, lift towers, certificates.

A path-shaped target starts from a 3-ball: each interior edge j with a
prescribed handle of index j' gets ellipsoids centered at the edge midpoint
(t_j + t_{j+1})/2, removed at the tower stage whose ambient dimension is
j' + 2, so that the sweep fiber picks up an S^j' x S^(m-1-j') summand.  A
theta-shaped target starts from a planar disk with b-1 removed disks of
radius (t_3 - t_2)/2 stacked at x = (t_2 + t_3)/2; per-corridor handles use
the same midpoint mechanism inside each corridor.  Hole x-extents always span
a full [t_j, t_{j+1}] interval, which pins every critical value of the first
coordinate projection to the layout values t_j.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .domain import AlgebraicDomain, Ellipsoid, ball, sqrt_lower
from .lifting import LiftError, LiftTower, LiftedHypersurface, lift_tower
from .poly import FactoredForm, Polynomial
from .reebspec import SPHERE, ExpectedReeb, FiberType, ValidatedSpec, expected_reeb


class SynthesisError(RuntimeError):
    """Raised when no legal layout is found within the escalation caps."""


@dataclass(frozen=True)
class PlacedHole:
    """One removed ellipsoid, with its bookkeeping labels."""

    ellipsoid: Ellipsoid
    stage: int  # tower stage at which it is removed
    edge: int  # 1-based edge (path midpoint index j, or theta corridor q)
    handle_index: int  # fiber handle index j' (0 for theta corridor separators)


@dataclass(frozen=True)
class Layout:
    """Deterministic geometry of a synthesis run."""

    R: Fraction
    t: tuple[Fraction, ...]  # increasing, t[0] = -R, t[-1] = R
    base_dim: int
    holes: tuple[tuple[PlacedHole, ...], ...]  # per tower stage

    def midpoint(self, j: int) -> Fraction:
        """Midpoint of the j-th edge interval (1-based)."""
        return (self.t[j - 1] + self.t[j]) / 2

    def all_holes(self) -> list[PlacedHole]:
        return [h for stage in self.holes for h in stage]


@dataclass(frozen=True)
class ManifoldDescription:
    """Connected-sum description: counts of S^k x S^(m-k) summands."""

    m: int
    summands: tuple[tuple[int, int], ...]  # (k, count), k normalized

    @property
    def text(self) -> str:
        if not self.summands:
            return f"S^{self.m}"
        parts = []
        for k, count in self.summands:
            piece = f"S^{k} x S^{self.m - k}"
            parts.append(piece if count == 1 else f"{count}({piece})")
        return "connected sum of " + " # ".join(parts)


@dataclass(frozen=True)
class Certificate:
    """Record of a synthesis run: polynomial, predictions, construction data."""

    kind: str  # "path" | "theta" | "sphere"
    m: int
    ambient: int
    spec: ValidatedSpec | None
    layout: Layout
    tower: LiftTower | None
    f_factored: FactoredForm
    f_expanded: Polynomial
    predicted_singular_values: tuple[Fraction, ...]
    predicted_critical_values: tuple[Fraction, ...]  # with multiplicity, sorted
    predicted_critical_count: int
    predicted_manifold: ManifoldDescription
    expected: ExpectedReeb
    bounding_box: tuple[tuple[Fraction, Fraction], ...]
    function: str
    trace: tuple[str, ...]

    def __eq__(self, other):
        if not isinstance(other, Certificate):
            return NotImplemented
        return certificate_to_dict(self) == certificate_to_dict(other)


@dataclass(frozen=True)
class SynthParams:
    """Tunable layout policy; defaults follow the deterministic margin rules."""

    R: Fraction = Fraction(3)
    axis_ratio: Fraction = Fraction(1, 4)  # non-first semiaxes / first semiaxis
    stack_gap_factor: int = 3  # y gap between stacked holes, in y-semiaxes
    max_escalations: int = 3  # R doublings
    max_shrinks: int = 5  # axis_ratio halvings per R value

    def __post_init__(self):
        object.__setattr__(self, "R", Fraction(self.R))
        object.__setattr__(self, "axis_ratio", Fraction(self.axis_ratio))


def _offset_sequence():
    """0, 1, -1, 2, -2, ... deterministic stacking pattern."""
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _distinct_y(y: Fraction, used: set[Fraction], nudge: Fraction) -> Fraction:
    while y in used:
        y += nudge
    used.add(y)
    return y


def _handle_counts(fiber: FiberType) -> dict[int, int]:
    return dict(fiber.handles)


def _hole(center_xy, stage_dim, rho, s_y) -> Ellipsoid:
    center = tuple(center_xy) + (Fraction(0),) * (stage_dim - 2)
    semiaxes = (rho * rho,) + (s_y * s_y,) * (stage_dim - 1)
    return Ellipsoid(center=center, semiaxes_sq=semiaxes)


def _path_layout(spec: ValidatedSpec, R: Fraction, axis_ratio: Fraction, gap_factor: int) -> Layout:
    a, m = spec.count, spec.m
    t = tuple(-R + Fraction(2 * R * j, a - 1) for j in range(a))
    rho = R / (a - 1)  # half the uniform t spacing
    s_y = rho * axis_ratio
    n_stages = m - 2  # base dimension 3 up to m + 1
    holes: list[list[PlacedHole]] = [[] for _ in range(n_stages)]
    used_y: set[Fraction] = set()
    offsets = _offset_sequence()
    gap = gap_factor * s_y
    for i in range(n_stages):
        jprime = i + 1
        if 2 * jprime > m - 1:
            continue
        for j in range(2, a - 1):  # interior edges only
            count = _handle_counts(spec.fibers[j - 1]).get(jprime, 0)
            t0 = (t[j - 1] + t[j]) / 2
            for _ in range(count):
                y = _distinct_y(next(offsets) * gap, used_y, s_y / 7)
                holes[i].append(
                    PlacedHole(
                        ellipsoid=_hole((t0, y), 3 + i, rho, s_y),
                        stage=i,
                        edge=j,
                        handle_index=jprime,
                    )
                )
    return Layout(R=R, t=t, base_dim=3, holes=tuple(tuple(h) for h in holes))


def _theta_layout(spec: ValidatedSpec, R: Fraction, axis_ratio: Fraction, gap_factor: int) -> Layout:
    b, m = spec.count, spec.m
    t = tuple(-R + Fraction(2 * R * j, 3) for j in range(4))
    rho = R / 3  # (t_3 - t_2) / 2
    s_y = rho * axis_ratio
    n_stages = m - 1  # base dimension 2 up to m + 1
    holes: list[list[PlacedHole]] = [[] for _ in range(n_stages)]
    used_y: set[Fraction] = set()
    # stage 0: b - 1 corridor-separating disks of radius rho at x = t0_2
    sep_gap = gap_factor * rho
    sep_y = [sep_gap * Fraction(2 * k - b, 2) for k in range(1, b)]
    for y in sep_y:
        used_y.add(y)
        holes[0].append(
            PlacedHole(
                ellipsoid=_hole((Fraction(0), y), 2, rho, rho),
                stage=0,
                edge=0,
                handle_index=0,
            )
        )
    # corridor centers between separators (outer corridors against the disk)
    chord = sqrt_lower(R * R - rho * rho)
    corridor_centers = []
    if b >= 1:
        corridor_centers.append((-chord + (sep_y[0] - rho)) / 2)
        for k in range(1, b - 1):
            corridor_centers.append((sep_y[k - 1] + sep_y[k]) / 2)
        corridor_centers.append(((sep_y[-1] + rho) + chord) / 2)
    gap = gap_factor * s_y
    for q in range(1, b + 1):
        counts = _handle_counts(spec.fibers[q - 1])
        offsets = _offset_sequence()
        for jprime in sorted(counts):
            stage = jprime  # ambient dimension 2 + j' when removed
            if stage >= n_stages:
                raise SynthesisError(
                    f"handle index {jprime} needs a tower stage beyond dimension {m + 1}"
                )
            for _ in range(counts[jprime]):
                y = _distinct_y(
                    corridor_centers[q - 1] + next(offsets) * gap, used_y, s_y / 7
                )
                holes[stage].append(
                    PlacedHole(
                        ellipsoid=_hole((Fraction(0), y), 2 + stage, rho, s_y),
                        stage=stage,
                        edge=q,
                        handle_index=jprime,
                    )
                )
    return Layout(R=R, t=t, base_dim=2, holes=tuple(tuple(h) for h in holes))


def _critical_predictions(layout: Layout):
    """Critical values with multiplicity: ball extrema plus hole x-extrema."""
    values = [layout.t[0], layout.t[-1]]
    for h in layout.all_holes():
        cx = h.ellipsoid.center[0]
        rho = sqrt_lower(h.ellipsoid.semiaxes_sq[0])
        # semiaxes are exact squares of rationals by construction
        assert rho * rho == h.ellipsoid.semiaxes_sq[0]
        values.append(cx - rho)
        values.append(cx + rho)
    return tuple(sorted(values))


def _manifold_description(layout: Layout, m: int) -> ManifoldDescription:
    counts: dict[int, int] = {}
    for h in layout.all_holes():
        n = layout.base_dim + h.stage  # ambient dimension when removed
        k = n - 1
        k = min(k, m - k)
        counts[k] = counts.get(k, 0) + 1
    return ManifoldDescription(m=m, summands=tuple(sorted(counts.items())))


def predict_manifold(cert: Certificate) -> ManifoldDescription:
    """Connected-sum description of the synthesized manifold."""
    return _manifold_description(cert.layout, cert.m)


def _build_certificate(
    kind: str,
    spec: ValidatedSpec | None,
    layout: Layout,
    tower: LiftTower,
    m: int,
    expected: ExpectedReeb,
    trace: list[str],
) -> Certificate:
    final = tower.final
    return Certificate(
        kind=kind,
        m=m,
        ambient=m + 1,
        spec=spec,
        layout=layout,
        tower=tower,
        f_factored=final.defining,
        f_expanded=final.defining.expand(),
        predicted_singular_values=tuple(sorted(set(layout.t))),
        predicted_critical_values=_critical_predictions(layout),
        predicted_critical_count=2 * (1 + len(layout.all_holes())),
        predicted_manifold=_manifold_description(layout, m),
        expected=expected,
        bounding_box=final.bounding_box,
        function="projection to coordinate 1 restricted to {F_M = 0}",
        trace=tuple(trace),
    )


def _synthesize(spec: ValidatedSpec, params: SynthParams) -> Certificate:
    make_layout = _path_layout if spec.kind == "path" else _theta_layout
    m = spec.m
    last_error: Exception | None = None
    R = params.R
    for _ in range(params.max_escalations + 1):
        ratio = params.axis_ratio
        for _ in range(params.max_shrinks + 1):
            layout = make_layout(spec, R, ratio, params.stack_gap_factor)
            base = ball(layout.base_dim, (Fraction(0),) * layout.base_dim, R)
            schedule = [[h.ellipsoid for h in stage] for stage in layout.holes]
            try:
                tower = lift_tower(base, schedule, m + 1)
            except LiftError as exc:
                last_error = exc
                ratio = ratio / 2
                continue
            trace = [
                f"shape={spec.kind} m={m} R={R} axis_ratio={ratio}",
                f"base: ball of radius {R} in dimension {layout.base_dim}",
            ]
            for i, stage in enumerate(layout.holes):
                trace.append(
                    f"stage {i}: removed {len(stage)} ellipsoid(s), "
                    f"lifted to dimension {layout.base_dim + i + 1}"
                )
            expected = expected_reeb(
                spec, layout.t if spec.kind == "path" else layout.t[:4]
            )
            return _build_certificate(spec.kind, spec, layout, tower, m, expected, trace)
        R = R * 2
    raise SynthesisError(f"no legal layout within escalation caps: {last_error}")


def synthesize_path(spec: ValidatedSpec, params: SynthParams | None = None) -> Certificate:
    if spec.kind != "path":
        raise SynthesisError(f"expected a path spec, got {spec.kind}")
    return _synthesize(spec, params or SynthParams())


def synthesize_theta(spec: ValidatedSpec, params: SynthParams | None = None) -> Certificate:
    if spec.kind != "theta":
        raise SynthesisError(f"expected a theta spec, got {spec.kind}")
    return _synthesize(spec, params or SynthParams())


def sphere_certificate(m: int, radius: Fraction | int = 1) -> Certificate:
    """Certificate for the m-sphere: iterated lift of a planar disk, no holes."""
    if m < 2:
        raise SynthesisError("sphere certificates need m >= 2")
    radius = Fraction(radius)
    base = ball(2, (Fraction(0), Fraction(0)), radius)
    tower = lift_tower(base, None, m + 1)
    layout = Layout(R=radius, t=(-radius, radius), base_dim=2, holes=((),) * (m - 1))
    expected = ExpectedReeb(
        vertices=((0, -radius), (1, radius)), edges=((0, 1, SPHERE),)
    )
    trace = [f"sphere m={m}: lifted disk of radius {radius} to dimension {m + 1}"]
    return _build_certificate("sphere", None, layout, tower, m, expected, trace)


# ---------------------------------------------------------------------------
# JSON serialization (exact: rationals as "p/q" strings, polynomials as text)
# ---------------------------------------------------------------------------

FORMAT = "reebforge-certificate-1"


def _frac(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _box_to_json(box):
    return [[_frac(lo), _frac(hi)] for lo, hi in box]


def _box_from_json(data):
    return tuple((Fraction(lo), Fraction(hi)) for lo, hi in data)


def _ellipsoid_to_json(e: Ellipsoid):
    return {
        "center": [_frac(c) for c in e.center],
        "semiaxes_sq": [_frac(r) for r in e.semiaxes_sq],
    }


def _ellipsoid_from_json(data) -> Ellipsoid:
    return Ellipsoid(
        center=tuple(Fraction(c) for c in data["center"]),
        semiaxes_sq=tuple(Fraction(r) for r in data["semiaxes_sq"]),
    )


def _domain_to_json(d: AlgebraicDomain):
    return {
        "ambient_dim": d.ambient_dim,
        "factors": [f.to_text() for f in d.factors],
        "witness": [_frac(c) for c in d.witness],
        "bounding_box": _box_to_json(d.bounding_box),
        "holes": [_ellipsoid_to_json(h) for h in d.holes],
        "meta": list(d.meta),
    }


def _domain_from_json(data) -> AlgebraicDomain:
    dim = data["ambient_dim"]
    return AlgebraicDomain(
        ambient_dim=dim,
        factors=tuple(Polynomial.from_text(f, dim) for f in data["factors"]),
        witness=tuple(Fraction(c) for c in data["witness"]),
        bounding_box=_box_from_json(data["bounding_box"]),
        holes=tuple(_ellipsoid_from_json(h) for h in data["holes"]),
        meta=tuple(data["meta"]),
    )


def _fiber_to_json(f: FiberType):
    return [[j, k] for j, k in f.handles]


def _fiber_from_json(data) -> FiberType:
    return FiberType(tuple((j, k) for j, k in data))


def _spec_to_json(spec: ValidatedSpec | None):
    if spec is None:
        return None
    return {
        "kind": spec.kind,
        "m": spec.m,
        "count": spec.count,
        "fibers": [_fiber_to_json(f) for f in spec.fibers],
    }


def _spec_from_json(data) -> ValidatedSpec | None:
    if data is None:
        return None
    return ValidatedSpec(
        kind=data["kind"],
        m=data["m"],
        count=data["count"],
        fibers=tuple(_fiber_from_json(f) for f in data["fibers"]),
    )


def certificate_to_dict(cert: Certificate) -> dict:
    tower_json = None
    if cert.tower is not None:
        tower_json = []
        for dom, lifted in cert.tower.stages:
            tower_json.append(
                {
                    "domain": _domain_to_json(dom),
                    "lifted": {
                        "ambient_dim": lifted.ambient_dim,
                        "added_vars": list(lifted.added_vars),
                        "witness": [_frac(c) for c in lifted.witness],
                        "bounding_box": _box_to_json(lifted.bounding_box),
                    },
                }
            )
    return {
        "format": FORMAT,
        "kind": cert.kind,
        "m": cert.m,
        "ambient": cert.ambient,
        "spec": _spec_to_json(cert.spec),
        "layout": {
            "R": _frac(cert.layout.R),
            "t": [_frac(v) for v in cert.layout.t],
            "base_dim": cert.layout.base_dim,
            "holes": [
                [
                    {
                        "ellipsoid": _ellipsoid_to_json(h.ellipsoid),
                        "stage": h.stage,
                        "edge": h.edge,
                        "handle_index": h.handle_index,
                    }
                    for h in stage
                ]
                for stage in cert.layout.holes
            ],
        },
        "tower": tower_json,
        "polynomial": {
            "num_vars": cert.f_factored.num_vars,
            "factors": [f.to_text() for f in cert.f_factored.factors],
            "subtracted_square_vars": list(cert.f_factored.subtracted_square_vars),
            "expanded": cert.f_expanded.to_text(),
        },
        "predicted": {
            "singular_values": [_frac(v) for v in cert.predicted_singular_values],
            "critical_values": [_frac(v) for v in cert.predicted_critical_values],
            "critical_count": cert.predicted_critical_count,
            "manifold": {
                "m": cert.predicted_manifold.m,
                "summands": [[k, c] for k, c in cert.predicted_manifold.summands],
                "text": cert.predicted_manifold.text,
            },
        },
        "expected_reeb": {
            "vertices": [[i, _frac(v)] for i, v in cert.expected.vertices],
            "edges": [[u, v, _fiber_to_json(f)] for u, v, f in cert.expected.edges],
        },
        "bounding_box": _box_to_json(cert.bounding_box),
        "function": cert.function,
        "trace": list(cert.trace),
    }


def certificate_from_dict(data: dict) -> Certificate:
    if data.get("format") != FORMAT:
        raise ValueError(f"not a certificate file (format={data.get('format')!r})")
    layout = Layout(
        R=Fraction(data["layout"]["R"]),
        t=tuple(Fraction(v) for v in data["layout"]["t"]),
        base_dim=data["layout"]["base_dim"],
        holes=tuple(
            tuple(
                PlacedHole(
                    ellipsoid=_ellipsoid_from_json(h["ellipsoid"]),
                    stage=h["stage"],
                    edge=h["edge"],
                    handle_index=h["handle_index"],
                )
                for h in stage
            )
            for stage in data["layout"]["holes"]
        ),
    )
    tower = None
    if data["tower"] is not None:
        stages = []
        for st in data["tower"]:
            dom = _domain_from_json(st["domain"])
            li = st["lifted"]
            added = tuple(li["added_vars"])
            form = FactoredForm(
                li["ambient_dim"],
                tuple(f.embed(li["ambient_dim"]) for f in dom.factors),
                added,
            )
            stages.append(
                (
                    dom,
                    LiftedHypersurface(
                        defining=form,
                        ambient_dim=li["ambient_dim"],
                        base=dom,
                        added_vars=added,
                        witness=tuple(Fraction(c) for c in li["witness"]),
                        bounding_box=_box_from_json(li["bounding_box"]),
                    ),
                )
            )
        tower = LiftTower(stages=tuple(stages))
    p = data["polynomial"]
    form = FactoredForm(
        p["num_vars"],
        tuple(Polynomial.from_text(f, p["num_vars"]) for f in p["factors"]),
        tuple(p["subtracted_square_vars"]),
    )
    pred = data["predicted"]
    manifold = ManifoldDescription(
        m=pred["manifold"]["m"],
        summands=tuple((k, c) for k, c in pred["manifold"]["summands"]),
    )
    expected = ExpectedReeb(
        vertices=tuple((i, Fraction(v)) for i, v in data["expected_reeb"]["vertices"]),
        edges=tuple(
            (u, v, _fiber_from_json(f)) for u, v, f in data["expected_reeb"]["edges"]
        ),
    )
    return Certificate(
        kind=data["kind"],
        m=data["m"],
        ambient=data["ambient"],
        spec=_spec_from_json(data["spec"]),
        layout=layout,
        tower=tower,
        f_factored=form,
        f_expanded=Polynomial.from_text(p["expanded"], p["num_vars"]),
        predicted_singular_values=tuple(Fraction(v) for v in pred["singular_values"]),
        predicted_critical_values=tuple(Fraction(v) for v in pred["critical_values"]),
        predicted_critical_count=pred["critical_count"],
        predicted_manifold=manifold,
        expected=expected,
        bounding_box=_box_from_json(data["bounding_box"]),
        function=data["function"],
        trace=tuple(data["trace"]),
    )
