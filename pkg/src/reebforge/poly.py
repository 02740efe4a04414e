"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent tuples (one non-negative integer per
variable) to Fraction coefficients.  Zero coefficients are never stored, so
two polynomials are equal iff their term maps are equal.  All construction
work in this package stays rational; floats only appear on the numeric
evaluation path used by the verifier.

A :class:`FactoredForm` carries a product of polynomial factors minus a sum
of squared variables without expanding it.  This is the shape of the lifted
hypersurface polynomials (product of the domain factors minus the squares of
the added variables); expansion is done lazily.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Exponent, Fraction] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = _as_fraction(coeff)
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != num_vars:
                    raise ValueError(
                        f"exponent vector {exps} has length {len(exps)}, expected {num_vars}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                clean[exps] = c
        self.num_vars = num_vars
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, num_vars: int, value) -> "Polynomial":
        return cls(num_vars, {(0,) * num_vars: _as_fraction(value)})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "Polynomial":
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range for {num_vars} vars")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): Fraction(1)})

    @classmethod
    def zero(cls, num_vars: int) -> "Polynomial":
        return cls(num_vars, {})

    # -- identity -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {self.to_text()!r})"

    # -- arithmetic ---------------------------------------------------

    def _check_same(self, other: "Polynomial"):
        if self.num_vars != other.num_vars:
            raise ValueError(
                f"mixed variable counts: {self.num_vars} vs {other.num_vars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, Fraction(0)) + c
            if s == 0:
                out.pop(exps, None)
            else:
                out[exps] = s
        return Polynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return Polynomial(self.num_vars, {e: k * c for e, k in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.num_vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- queries ------------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def eval(self, x: Sequence):
        """Evaluate at a point.  Rational in, rational out; float in, float out."""
        if len(x) != self.num_vars:
            raise ValueError(f"point has {len(x)} coordinates, expected {self.num_vars}")
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for xi, e in zip(x, exps):
                if e:
                    term = term * xi**e
            total = total + term
        return total

    def partial(self, index: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``index``."""
        if not 0 <= index < self.num_vars:
            raise ValueError(f"variable index {index} out of range")
        out: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            out[tuple(new)] = coeff * e
        return Polynomial(self.num_vars, out)

    def gradient(self) -> "Gradient":
        return Gradient(tuple(self.partial(i) for i in range(self.num_vars)))

    def restrict(self, index: int, value) -> "Polynomial":
        """Substitute variable ``index`` by ``value``, dropping that variable."""
        if not 0 <= index < self.num_vars:
            raise ValueError(f"variable index {index} out of range")
        v = _as_fraction(value)
        out: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            c = coeff * v ** exps[index]
            if c == 0:
                continue
            e = exps[:index] + exps[index + 1 :]
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(self.num_vars - 1, out)

    def embed(self, num_vars: int) -> "Polynomial":
        """Reinterpret in a larger variable set, padding exponents with zeros."""
        if num_vars < self.num_vars:
            raise ValueError("cannot embed into fewer variables")
        pad = (0,) * (num_vars - self.num_vars)
        return Polynomial(num_vars, {e + pad: c for e, c in self.terms.items()})

    def variables_present(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # -- text format --------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in graded-lex order (higher total degree first)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        """One term per line: ``num/den e1 e2 ... ek``, graded-lex order."""
        lines = []
        for exps, coeff in self.sorted_terms():
            parts = [f"{coeff.numerator}/{coeff.denominator}"]
            parts.extend(str(e) for e in exps)
            lines.append(" ".join(parts))
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, num_vars: int | None = None) -> "Polynomial":
        terms: dict[Exponent, Fraction] = {}
        nv = num_vars
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            coeff = Fraction(parts[0])
            exps = tuple(int(p) for p in parts[1:])
            if nv is None:
                nv = len(exps)
            elif len(exps) != nv:
                raise ValueError(f"inconsistent variable count in line {line!r}")
            terms[exps] = coeff
        if nv is None:
            raise ValueError("empty polynomial text needs explicit num_vars")
        return cls(nv, terms)


class Gradient:
    """Formal gradient: one partial derivative per variable."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[Polynomial]):
        self.components = tuple(components)

    def eval(self, x: Sequence):
        return [p.eval(x) for p in self.components]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]


class FactoredForm:
    """``prod(factors) - sum of squares of selected variables``, unexpanded.

    Factors are stored already embedded in the full variable set; the
    subtracted-square variables must not occur in any factor.
    """

    __slots__ = ("num_vars", "factors", "subtracted_square_vars", "_expanded")

    def __init__(
        self,
        num_vars: int,
        factors: Iterable[Polynomial],
        subtracted_square_vars: Iterable[int] = (),
    ):
        factors = tuple(factors)
        subtracted = tuple(int(v) for v in subtracted_square_vars)
        for f in factors:
            if f.num_vars != num_vars:
                raise ValueError("factor variable count differs from form")
        if len(set(subtracted)) != len(subtracted):
            raise ValueError("duplicate subtracted-square variable")
        used = set()
        for f in factors:
            used |= f.variables_present()
        for v in subtracted:
            if not 0 <= v < num_vars:
                raise ValueError(f"subtracted variable {v} out of range")
            if v in used:
                raise ValueError(f"subtracted variable {v} occurs in a factor")
        self.num_vars = num_vars
        self.factors = factors
        self.subtracted_square_vars = subtracted
        self._expanded = None

    def __eq__(self, other):
        if not isinstance(other, FactoredForm):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.factors == other.factors
            and self.subtracted_square_vars == other.subtracted_square_vars
        )

    def __hash__(self):
        return hash((self.num_vars, self.factors, self.subtracted_square_vars))

    def __repr__(self):
        return (
            f"FactoredForm(num_vars={self.num_vars}, factors={len(self.factors)}, "
            f"subtracted={self.subtracted_square_vars})"
        )

    def eval(self, x: Sequence):
        if len(x) != self.num_vars:
            raise ValueError(f"point has {len(x)} coordinates, expected {self.num_vars}")
        prod = 1
        for f in self.factors:
            prod = prod * f.eval(x)
        for v in self.subtracted_square_vars:
            prod = prod - x[v] * x[v]
        return prod

    def expand(self) -> Polynomial:
        """Canonical-form expansion (cached)."""
        if self._expanded is None:
            p = Polynomial.constant(self.num_vars, 1)
            for f in self.factors:
                p = p * f
            for v in self.subtracted_square_vars:
                p = p - Polynomial.variable(self.num_vars, v) ** 2
            self._expanded = p
        return self._expanded

    def gradient(self) -> Gradient:
        return self.expand().gradient()

    def restrict(self, index: int, value):
        """Substitute a variable.  Stays factored unless a subtracted-square
        variable is fixed, in which case the expansion is restricted."""
        if index in self.subtracted_square_vars:
            return self.expand().restrict(index, value)
        new_factors = [f.restrict(index, value) for f in self.factors]
        new_sub = [v - 1 if v > index else v for v in self.subtracted_square_vars]
        return FactoredForm(self.num_vars - 1, new_factors, new_sub)


def evaluate(p: Polynomial | FactoredForm, x: Sequence):
    """Evaluate a polynomial or factored form at a point."""
    return p.eval(x)


def expand(p: Polynomial | FactoredForm) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    return p.expand()


def restrict(p: Polynomial | FactoredForm, index: int, value):
    return p.restrict(index, value)
