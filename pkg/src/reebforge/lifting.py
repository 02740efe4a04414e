"""Lift an algebraic domain to one dimension higher.

The lift of D with factors {f_j} is the hypersurface
F = prod f_j - sum of squares of the added variables; the bounded component
D' of the complement of {F = 0} projects onto D and its boundary is {F = 0}.
Iterating the lift produces the towers that the synthesizer drives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .domain import (
    AlgebraicDomain,
    DomainError,
    Ellipsoid,
    remove_ellipsoids,
    sqrt_upper,
    validate_domain,
)
from .poly import FactoredForm


class LiftError(ValueError):
    """Raised when a lift is requested from an invalid configuration."""


@dataclass(frozen=True)
class LiftedHypersurface:
    """Boundary hypersurface of the lifted domain D'."""

    defining: FactoredForm
    ambient_dim: int
    base: AlgebraicDomain
    added_vars: tuple[int, ...]
    witness: tuple[Fraction, ...]  # interior point of D'
    bounding_box: tuple[tuple[Fraction, Fraction], ...]

    def as_domain(self) -> AlgebraicDomain:
        """D' as a single-factor algebraic domain (its boundary is {F = 0})."""
        return AlgebraicDomain(
            ambient_dim=self.ambient_dim,
            factors=(self.defining.expand(),),
            witness=self.witness,
            bounding_box=self.bounding_box,
            holes=(),
            meta=self.base.meta + (f"lifted to dimension {self.ambient_dim}",),
        )


@dataclass(frozen=True)
class LiftTower:
    """Stages of iterated lifting; each stage adds exactly one variable."""

    stages: tuple[tuple[AlgebraicDomain, LiftedHypersurface], ...]

    @property
    def final(self) -> LiftedHypersurface:
        return self.stages[-1][1]

    @property
    def final_ambient_dim(self) -> int:
        return self.final.ambient_dim


def _max_factor_product(d: AlgebraicDomain) -> Fraction:
    """Max of prod f_j over interior grid samples (exact rational arithmetic)."""
    per_axis = 17 if d.ambient_dim <= 3 else 7
    axes = []
    for lo, hi in d.bounding_box:
        axes.append([lo + (hi - lo) * Fraction(k, per_axis - 1) for k in range(per_axis)])
    best = Fraction(0)
    found = False
    for pt in iter_product(*axes):
        vals = [f.eval(pt) for f in d.factors]
        if all(v > 0 for v in vals):
            prod = Fraction(1)
            for v in vals:
                prod *= v
            if not found or prod > best:
                best = prod
                found = True
    wit_vals = [f.eval(d.witness) for f in d.factors]
    if all(v > 0 for v in wit_vals):
        prod = Fraction(1)
        for v in wit_vals:
            prod *= v
        if not found or prod > best:
            best = prod
            found = True
    if not found:
        raise LiftError("no interior sample found while bounding the lift")
    return best


def lift_once(d: AlgebraicDomain, n_prime: int) -> LiftedHypersurface:
    """Apply the lift to D, adding variables up to dimension ``n_prime``."""
    n = d.ambient_dim
    if n_prime <= n:
        raise LiftError(f"target dimension {n_prime} must exceed ambient {n}")
    added = tuple(range(n, n_prime))
    factors = tuple(f.embed(n_prime) for f in d.factors)
    form = FactoredForm(n_prime, factors, added)
    # On {F = 0} each added variable squares to at most max prod f_j over D;
    # pad the grid estimate since the true max can fall between samples.
    bound = sqrt_upper(_max_factor_product(d)) * Fraction(5, 4) + Fraction(1, 10)
    box = d.bounding_box + tuple((-bound, bound) for _ in added)
    witness = d.witness + (Fraction(0),) * len(added)
    return LiftedHypersurface(
        defining=form,
        ambient_dim=n_prime,
        base=d,
        added_vars=added,
        witness=witness,
        bounding_box=box,
    )


_DEFAULT_RESOLUTION = {2: 120, 3: 48}


def _validation_step(d: AlgebraicDomain, resolution: dict[int, int] | None):
    res = dict(_DEFAULT_RESOLUTION)
    if resolution:
        res.update(resolution)
    n = res.get(d.ambient_dim, 24)
    diam = max(float(hi - lo) for lo, hi in d.bounding_box)
    return diam / n


def lift_tower(
    d0: AlgebraicDomain,
    hole_schedule: list[list[Ellipsoid]] | None,
    target_ambient: int,
    validate: bool = True,
    resolution: dict[int, int] | None = None,
) -> LiftTower:
    """Iterate the one-variable lift from d0 up to ``target_ambient``.

    ``hole_schedule`` gives one (possibly empty) list of ellipsoids per stage,
    removed from the current domain before that stage's lift.
    """
    n_stages = target_ambient - d0.ambient_dim
    if n_stages <= 0:
        raise LiftError(
            f"target ambient {target_ambient} does not exceed base dimension {d0.ambient_dim}"
        )
    if hole_schedule is None:
        hole_schedule = [[] for _ in range(n_stages)]
    if len(hole_schedule) != n_stages:
        raise LiftError(
            f"hole schedule has {len(hole_schedule)} entries, expected {n_stages}"
        )
    stages = []
    current = d0
    for i, holes in enumerate(hole_schedule):
        try:
            if holes:
                current = remove_ellipsoids(current, holes)
            if validate:
                report = validate_domain(current, _validation_step(current, resolution))
                if not report.ok:
                    raise DomainError(
                        "; ".join(f"{name}: {detail}" for name, detail in report.failures)
                    )
        except DomainError as exc:
            raise LiftError(f"stage {i}: {exc}") from exc
        lifted = lift_once(current, current.ambient_dim + 1)
        stages.append((current, lifted))
        current = lifted.as_domain()
    return LiftTower(stages=tuple(stages))
