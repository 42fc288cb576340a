from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_ctqw.abelian import GroupSpec
from lattice_ctqw.polynomials import (
    Polynomial,
    PolynomialTable,
    build_polynomials,
    lattice_norm,
    orthogonality_check,
    recursion_checks,
    recursion_terms,
)
from lattice_ctqw.scheme import build_honeycomb, build_scheme
from lattice_ctqw.spectral import class_symbols, spectral_grid

Z = Polynomial.var(0, 2)
ZB = Polynomial.var(1, 2)


def one(c=1):
    return Polynomial.const(c, 2)


@pytest.fixture(scope="module")
def table9():
    return build_polynomials(build_scheme(GroupSpec(9, 2), symmetric=False))


def test_low_degree_entries(table9):
    assert table9.by_alias((0, 0)) == one()
    assert table9.by_alias((1, 0)) == Z
    assert table9.by_alias((0, 1)) == ZB
    assert table9.by_alias((1, 1)) == Z * ZB - one(3)
    assert table9.by_alias((2, 0)) == Z * Z - ZB * 2


def test_p11_independent_of_m():
    for m in (4, 5, 7, 11):
        t = build_polynomials(build_scheme(GroupSpec(m, 2), symmetric=False))
        assert t.by_alias((1, 1)) == Z * ZB - one(3)


def test_degrees_follow_labels(table9):
    for al, p in zip(table9.aliases, table9.entries):
        assert p.degree == sum(al)


def test_m7_interior_recursion():
    t = build_polynomials(build_scheme(GroupSpec(7, 2), symmetric=False))
    lhs = Z * t.by_alias((1, 1))
    # (1,0) and (0,2) are singular weights with stabilizer order 2
    rhs = t.by_alias((2, 1)) + t.by_alias((1, 0)) * 2 + t.by_alias((0, 2)) * 2
    assert lhs == rhs
    assert lhs != t.by_alias((2, 1)) + t.by_alias((1, 0)) + t.by_alias((0, 2))


def test_recursion_terms_weights():
    assert recursion_terms((1, 1), 1) == [((0, 2), 2), ((1, 0), 2), ((2, 1), 1)]
    # every weight reached from (2,2) is regular
    assert all(c == 1 for _, c in recursion_terms((2, 2), 1))
    assert dict(recursion_terms((3, 1), 1))[(3, 0)] == 2


def test_weighted_recursion_m9(table9):
    checks = recursion_checks(table9, max_degree=4)
    assert len(checks) == 12
    assert all(c.weighted_ok for c in checks)
    literal = {(c.mu, c.k) for c in checks if c.literal_ok}
    # the unit-coefficient form only survives where every shifted weight is regular
    assert literal == {((2, 2), 1), ((2, 2), 2)}


def test_realify():
    s = build_scheme(GroupSpec(7, 2))
    t = build_polynomials(s)
    assert t.symmetric
    assert t.by_alias((1, 0)) == Z + ZB
    assert t.by_alias((1, 1)) == Z * ZB - one(3)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_realified_values_are_real(m):
    s = build_scheme(GroupSpec(m, 2))
    t = build_polynomials(s)
    grid = spectral_grid(s)
    for i in range(len(t)):
        v = t.evaluate(i, grid.generator_values)
        assert np.abs(v.imag).max() < 1e-9


@pytest.mark.parametrize("m,n,sym", [(3, 2, False), (5, 2, True), (6, 2, False), (4, 3, False), (3, 3, True)])
def test_evaluation_matches_class_eigenvalues(m, n, sym):
    s = build_scheme(GroupSpec(m, n), symmetric=sym)
    t = build_polynomials(s)
    grid = spectral_grid(s)
    sym_vals = class_symbols(s, grid)
    for i in range(len(t)):
        assert np.allclose(t.evaluate(i, grid.generator_values), sym_vals[:, i], atol=1e-9)


def test_honeycomb_polynomials_m3():
    s = build_honeycomb(3)
    t = build_polynomials(s)
    A = Polynomial.var(0, 1)
    c = lambda k: Polynomial.const(k, 1)  # noqa: E731
    assert t[2] == A * A - c(3)
    assert t[4] * 3 == A * t[3] - t[2] * 2


def test_gram_matrix(table9):
    classes, G = orthogonality_check(table9, points=256, max_degree=3)
    diag = np.diag(G).real
    assert np.abs(G - np.diag(np.diag(G))).max() < 1e-8
    assert np.allclose(diag, [lattice_norm(table9, i) for i in classes], atol=1e-8)
    i10, i01 = table9.aliases.index((1, 0)), table9.aliases.index((0, 1))
    assert abs(G[classes.index(i10), classes.index(i01)]) < 1e-12
    assert diag[classes.index(i10)] == pytest.approx(3.0, abs=1e-12)


def test_json_roundtrip(table9):
    back = PolynomialTable.from_dict(__import__("json").loads(table9.to_json()))
    assert back.entries == table9.entries
    assert back.aliases == table9.aliases


def test_pretty_printer(table9):
    text = table9.pretty()
    assert "P_1,1" in text and "z*zbar - 3" in text


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=4))
    p = Polynomial(2)
    for (a, b), c in terms.items():
        term = one(c)
        for _ in range(a):
            term = term * Z
        for _ in range(b):
            term = term * ZB
        p = p + term
    return p


@settings(max_examples=80, deadline=None)
@given(p=polys(), q=polys(), x=st.complex_numbers(max_magnitude=2), y=st.complex_numbers(max_magnitude=2))
def test_polynomial_arithmetic_matches_evaluation(p, q, x, y):
    v = np.array([[x], [y]])
    assert np.allclose((p * q).evaluate(v), p.evaluate(v) * q.evaluate(v), atol=1e-6)
    assert np.allclose((p + q).evaluate(v), p.evaluate(v) + q.evaluate(v), atol=1e-9)
    assert (p * q) == (q * p)
    assert p.conj().conj() == p


def test_fraction_coefficients_exact():
    p = (Z + one(Fraction(1, 3))) * 3
    assert p == Z * 3 + one(1)
