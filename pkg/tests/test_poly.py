"""Arithmetic layer: orders, monomials, polynomials, normal forms."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f5gb.poly import (
    EQ,
    GT,
    LT,
    Monomial,
    MonomialOrder,
    MonomialQuotient,
    is_homogeneous,
    is_prime,
    mono_cmp,
    normal_form,
    poly_axpy,
    quotient_cmp,
    validate_poly,
)

from systems import P, make_ring


@pytest.fixture
def ring():
    return make_ring(7, ["x", "y"])


def M(*exps):
    return Monomial(exps)


class TestMonomialOrder:
    def test_degrevlex_tiebreak(self):
        # forced by the reversed-exponent tie-break: y^2 > x*z
        order = MonomialOrder("degrevlex", 3)
        assert mono_cmp(M(0, 2, 0), M(1, 0, 1), order) == GT

    def test_identity(self):
        for kind in ("degrevlex", "deglex", "lex"):
            order = MonomialOrder(kind, 2)
            assert mono_cmp(M(1, 2), M(1, 2), order) == EQ

    def test_lex_ignores_degree(self):
        order = MonomialOrder("lex", 2)
        assert mono_cmp(M(1, 0), M(0, 5), order) == GT

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            MonomialOrder("weighted", 2)

    @given(
        st.data(),
        st.sampled_from(["degrevlex", "deglex", "lex"]),
    )
    @settings(max_examples=200)
    def test_total_order_on_random_triples(self, data, kind):
        n = 3
        order = MonomialOrder(kind, n)
        monos = st.builds(Monomial, st.tuples(*[st.integers(0, 5)] * n))
        a, b, c = data.draw(monos), data.draw(monos), data.draw(monos)
        # antisymmetry
        assert order.cmp(a, b) == -order.cmp(b, a)
        # transitivity
        if order.cmp(a, b) != LT and order.cmp(b, c) != LT:
            assert order.cmp(a, c) != LT
        # degree compatibility
        if kind != "lex" and a.deg > b.deg:
            assert order.cmp(a, b) == GT


class TestMonomial:
    def test_divide(self):
        assert M(2, 1).divide(M(1, 1)) == M(1, 0)
        assert M(1, 0).divide(M(0, 1)) is None
        assert M(3, 2).divide(M(0, 0)) == M(3, 2)

    def test_lcm(self):
        assert M(2, 0).lcm(M(1, 1)) == M(2, 1)
        assert M(1, 2).lcm(M(1, 2)) == M(1, 2)
        assert M(1, 0).lcm(M(0, 1)) == M(1, 1)

    def test_gcd_and_divides(self):
        assert M(2, 1).gcd(M(1, 2)) == M(1, 1)
        assert M(1, 1).divides(M(2, 1))
        assert not M(2, 0).divides(M(1, 1))


class TestQuotientOrder:
    def test_shrinking_denominators(self):
        # x/x > x/x^2 > x/x^3 under cross-multiplication
        order = MonomialOrder("degrevlex", 1)
        q = lambda a, b: MonomialQuotient(M(a), M(b))
        assert quotient_cmp(q(1, 1), q(1, 2), order) == GT
        assert quotient_cmp(q(1, 2), q(1, 3), order) == GT

    def test_equal_quotients(self):
        order = MonomialOrder("degrevlex", 2)
        assert (
            quotient_cmp(
                MonomialQuotient(M(1, 1), M(1, 1)),
                MonomialQuotient(M(0, 0), M(0, 0)),
                order,
            )
            == EQ
        )

    @given(st.data())
    @settings(max_examples=100)
    def test_agrees_with_mono_cmp_for_equal_denominators(self, data):
        order = MonomialOrder("degrevlex", 2)
        monos = st.builds(Monomial, st.tuples(st.integers(0, 4), st.integers(0, 4)))
        m1, m2, d = data.draw(monos), data.draw(monos), data.draw(monos)
        assert quotient_cmp(
            MonomialQuotient(m1, d), MonomialQuotient(m2, d), order
        ) == order.cmp(m1, m2)


class TestPolynomial:
    def test_axpy_basic(self, ring):
        p = P(ring, "x^2 + y^2")
        q = P(ring, "x")
        assert poly_axpy(p, 1, M(1, 0), q) == P(ring, "y^2")

    def test_axpy_zero_coefficient(self, ring):
        p = P(ring, "x^2 + y^2")
        assert poly_axpy(p, 0, M(1, 0), P(ring, "x")) == p

    def test_axpy_mod_p(self, ring):
        p = P(ring, "x^2 + 3*y^2")
        assert poly_axpy(p, 3, M(0, 0), P(ring, "y^2")) == P(ring, "x^2")

    def test_merging_and_zero_drop(self, ring):
        q = ring.poly([(3, M(1, 0)), (4, M(1, 0)), (2, M(0, 1))])
        assert q == P(ring, "2*y")

    def test_monic(self, ring):
        q = P(ring, "3*x^2 + 3*y^2")
        assert q.monic() == P(ring, "x^2 + y^2")
        assert ring.zero.monic().is_zero

    @given(st.data())
    @settings(max_examples=150)
    def test_axpy_structural_validity(self, data):
        ring = make_ring(7, ["x", "y"])
        monos = st.builds(Monomial, st.tuples(st.integers(0, 3), st.integers(0, 3)))
        terms = st.lists(st.tuples(st.integers(0, 6), monos), max_size=5)
        p = ring.poly(data.draw(terms))
        q = ring.poly(data.draw(terms))
        c = data.draw(st.integers(0, 6))
        t = data.draw(monos)
        out = poly_axpy(p, c, t, q)
        validate_poly(out)

    @given(st.data())
    @settings(max_examples=100)
    def test_homogeneous_axpy_preserves_homogeneity(self, data):
        ring = make_ring(7, ["x", "y"])
        deg = data.draw(st.integers(1, 4))
        monos = [Monomial((k, deg - k)) for k in range(deg + 1)]
        coeffs = st.lists(st.integers(0, 6), min_size=deg + 1, max_size=deg + 1)
        p = ring.poly(list(zip(data.draw(coeffs), monos)))
        q = ring.poly(list(zip(data.draw(coeffs), monos)))
        out = poly_axpy(p, data.draw(st.integers(1, 6)), Monomial((0, 0)), q)
        assert is_homogeneous(out)


class TestNormalForm:
    def test_head_reduction(self, ring):
        assert normal_form(P(ring, "x^2 + y^2"), [P(ring, "x^2")]) == P(ring, "y^2")

    def test_empty_basis(self, ring):
        p = P(ring, "x^2 + y^2")
        assert normal_form(p, []) == p

    def test_to_zero(self, ring):
        assert normal_form(P(ring, "x*y^2"), [P(ring, "x*y")]).is_zero

    def test_result_irreducible(self, ring):
        basis = [P(ring, "x^2 + y^2"), P(ring, "x*y")]
        r = normal_form(P(ring, "x^3 + x^2*y + x*y^2 + y^3"), basis)
        for _, m in r.terms:
            assert all(not b.head_mono.divides(m) for b in basis)

    @given(st.data())
    @settings(max_examples=60)
    def test_idempotent(self, data):
        ring = make_ring(7, ["x", "y"])
        monos = st.builds(Monomial, st.tuples(st.integers(0, 3), st.integers(0, 3)))
        terms = st.lists(st.tuples(st.integers(1, 6), monos), max_size=4)
        p = ring.poly(data.draw(terms))
        basis = [
            q for q in (ring.poly(data.draw(terms)) for _ in range(2)) if not q.is_zero
        ]
        once = normal_form(p, basis)
        assert normal_form(once, basis) == once


class TestHomogeneity:
    def test_cases(self, ring):
        assert is_homogeneous(P(ring, "x^2 + y^2"))
        assert not is_homogeneous(P(ring, "x^2 + y"))
        assert is_homogeneous(ring.zero)


def test_is_prime():
    assert is_prime(7) and is_prime(32003) and is_prime(2147483647)
    assert not is_prime(1) and not is_prime(4) and not is_prime(32001)


def test_ring_rejects_bad_modulus():
    with pytest.raises(ValueError):
        make_ring(6, ["x"])
    with pytest.raises(ValueError):
        make_ring(2**31 + 11, ["x"])
