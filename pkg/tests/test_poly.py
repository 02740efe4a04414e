"""Exact polynomial arithmetic, checked against independent naive oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reebforge.poly import FactoredForm, Polynomial, expand


def P(num_vars, terms):
    return Polynomial(num_vars, {tuple(e): Fraction(c) for e, c in terms.items()})


fractions = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)


@st.composite
def polynomials(draw, num_vars=None):
    n = num_vars if num_vars is not None else draw(st.integers(1, 3))
    n_terms = draw(st.integers(0, 5))
    terms = {}
    for _ in range(n_terms):
        e = tuple(draw(st.integers(0, 3)) for _ in range(n))
        terms[e] = draw(fractions)
    return Polynomial(n, terms)


@st.composite
def points(draw, n):
    return [draw(fractions) for _ in range(n)]


def naive_mul(p: Polynomial, q: Polynomial) -> dict:
    """Independent convolution of term dicts."""
    out: dict = {}
    for ea, ca in p.terms.items():
        for eb, cb in q.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


class TestArithmetic:
    def test_constant_and_variable(self):
        one = Polynomial.constant(2, 1)
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        p = one - x * x - y * y
        assert p.eval([Fraction(1, 2), Fraction(1, 2)]) == Fraction(1, 2)

    def test_zero_terms_dropped(self):
        p = P(1, {(1,): 1}) - P(1, {(1,): 1})
        assert p == Polynomial.zero(1)
        assert not p

    @given(polynomials(2), polynomials(2), points(2))
    def test_mul_matches_naive_convolution(self, p, q, x):
        r = p * q
        assert r.terms == naive_mul(p, q)
        assert r.eval(x) == p.eval(x) * q.eval(x)

    @given(polynomials(2), polynomials(2), polynomials(2))
    def test_ring_identities(self, p, q, r):
        assert p * (q + r) == p * q + p * r
        assert p + q == q + p
        assert (p - q) + q == p

    @given(polynomials(2), st.integers(0, 3))
    def test_pow_is_repeated_mul(self, p, n):
        expected = Polynomial.constant(2, 1)
        for _ in range(n):
            expected = expected * p
        assert p**n == expected


class TestCalculusAndRestriction:
    @given(polynomials(3), points(3))
    def test_partial_matches_finite_difference(self, p, x):
        # central difference on the float view; exact partials must agree
        h = 1e-6
        xf = [float(v) for v in x]
        for i in range(3):
            lo = list(xf)
            hi = list(xf)
            lo[i] -= h
            hi[i] += h
            fd = (float(p.eval(hi)) - float(p.eval(lo))) / (2 * h)
            exact = float(p.partial(i).eval(xf))
            assert abs(fd - exact) <= 1e-4 * max(1.0, abs(exact))

    @given(polynomials(3), fractions, points(2))
    def test_restrict_agrees_with_substitution(self, p, v, x):
        q = p.restrict(1, v)
        assert q.num_vars == 2
        assert q.eval(x) == p.eval([x[0], v, x[1]])

    @given(polynomials(2), points(3))
    def test_embed_preserves_values(self, p, x):
        assert p.embed(3).eval(x) == p.eval(x[:2])


class TestSerialization:
    @given(polynomials())
    def test_text_round_trip(self, p):
        assert Polynomial.from_text(p.to_text(), p.num_vars) == p

    def test_graded_lex_ordering(self):
        p = P(2, {(0, 0): 1, (2, 0): -1, (0, 2): -1, (1, 0): 3})
        degrees = [sum(e) for e, _ in p.sorted_terms()]
        assert degrees == sorted(degrees, reverse=True)
        # same total degree: lexicographically larger exponent first
        assert [e for e, _ in p.sorted_terms()][:2] == [(2, 0), (0, 2)]

    def test_text_format_exact_rationals(self):
        p = P(1, {(2,): Fraction(-1, 3)})
        assert p.to_text() == "-1/3 2"


class TestFactoredForm:
    @given(polynomials(2), polynomials(2), points(3))
    def test_eval_matches_expansion(self, f, g, x):
        form = FactoredForm(3, (f.embed(3), g.embed(3)), subtracted_square_vars=(2,))
        assert form.eval(x) == form.expand().eval(x)
        assert form.eval(x) == f.eval(x[:2]) * g.eval(x[:2]) - x[2] * x[2]

    @given(polynomials(2), points(2))
    def test_restrict_added_var_to_zero_gives_product(self, f, x):
        form = FactoredForm(3, (f.embed(3),), subtracted_square_vars=(2,))
        assert expand(form.restrict(2, 0)) == f
