"""Signature order, divisibility, module vectors, admissibility."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from f5gb.poly import EQ, GT, LT, Monomial
from f5gb.sig import (
    Genealogy,
    InconsistentModuleVector,
    LabeledPolynomial,
    ModuleVector,
    Signature,
    check_admissible,
    input_representation,
    sig_cmp,
    sig_divides,
    sig_mul,
)

from systems import P, make_ring


def M(*exps):
    return Monomial(exps)


@pytest.fixture
def ring():
    return make_ring(7, ["x", "y"])


class TestSigCmp:
    def test_index_dominates(self, ring):
        # the unit signature of the first input beats any later-index one
        assert sig_cmp(Signature(M(0, 0), 1), Signature(M(5, 0), 2), ring.order) == GT

    def test_same_index_uses_monomial_order(self, ring):
        assert sig_cmp(Signature(M(1, 0), 1), Signature(M(0, 1), 1), ring.order) == GT

    def test_reflexive(self, ring):
        s = Signature(M(2, 1), 3)
        assert sig_cmp(s, s, ring.order) == EQ

    @given(st.data())
    @settings(max_examples=150)
    def test_total_order(self, data):
        ring = make_ring(7, ["x", "y"])
        sigs = st.builds(
            Signature,
            st.builds(Monomial, st.tuples(st.integers(0, 3), st.integers(0, 3))),
            st.integers(1, 3),
        )
        a, b, c = data.draw(sigs), data.draw(sigs), data.draw(sigs)
        assert sig_cmp(a, b, ring.order) == -sig_cmp(b, a, ring.order)
        if sig_cmp(a, b, ring.order) != LT and sig_cmp(b, c, ring.order) != LT:
            assert sig_cmp(a, c, ring.order) != LT


class TestSigMulDivides:
    def test_mul(self):
        assert sig_mul(M(0, 0), Signature(M(1, 1), 2)) == Signature(M(1, 1), 2)
        assert sig_mul(M(1, 0), Signature(M(0, 1), 1)) == Signature(M(1, 1), 1)
        assert sig_mul(M(1, 0), Signature(M(1, 0), 2)) == Signature(M(2, 0), 2)

    def test_divides(self):
        assert sig_divides(Signature(M(1, 0), 1), Signature(M(2, 1), 1))
        assert not sig_divides(Signature(M(1, 0), 1), Signature(M(1, 0), 2))
        s = Signature(M(1, 1), 2)
        assert sig_divides(s, s)

    @given(st.data())
    @settings(max_examples=100)
    def test_divides_implies_greater_or_equal(self, data):
        # degree-compatible order: a dividing signature is never greater
        ring = make_ring(7, ["x", "y"])
        monos = st.builds(Monomial, st.tuples(st.integers(0, 3), st.integers(0, 3)))
        s1 = Signature(data.draw(monos), 1)
        t = data.draw(monos)
        s2 = sig_mul(t, s1)
        assert sig_divides(s1, s2)
        if s1 != s2:
            assert sig_cmp(s2, s1, ring.order) == GT


class TestModuleVector:
    def test_unit_vector_is_admissible_input(self, ring):
        f1, f2 = P(ring, "x^2 + y^2"), P(ring, "x*y")
        lp = LabeledPolynomial(
            0, Signature(M(0, 0), 1), f1, ModuleVector.unit(ring, 2, 1)
        )
        assert check_admissible(lp, [f1, f2], ring.order)

    def test_wrong_lead_is_inadmissible(self, ring):
        f1, f2 = P(ring, "x^2 + y^2"), P(ring, "x*y")
        # vector sums to x*f1 but the stored signature claims y*F1 (x > y)
        mv = ModuleVector((P(ring, "x"), ring.zero))
        lp = LabeledPolynomial(0, Signature(M(0, 1), 1), P(ring, "x^3 + x*y^2"), mv)
        assert not check_admissible(lp, [f1, f2], ring.order)

    def test_sum_mismatch_raises(self, ring):
        f1, f2 = P(ring, "x^2 + y^2"), P(ring, "x*y")
        mv = ModuleVector((P(ring, "x"), ring.zero))
        lp = LabeledPolynomial(0, Signature(M(1, 0), 1), P(ring, "y^2"), mv)
        with pytest.raises(InconsistentModuleVector):
            check_admissible(lp, [f1, f2], ring.order)

    def test_axpy_tracks_value(self, ring):
        f1, f2 = P(ring, "x^2 + y^2"), P(ring, "x*y")
        inputs = [f1, f2]
        a = ModuleVector.unit(ring, 2, 1).term_mul(1, M(0, 1))
        b = ModuleVector.unit(ring, 2, 2)
        mv = a.axpy(1, M(1, 0), b)  # y*e1 - x*e2
        assert mv.value(inputs) == P(ring, "y^3")

    def test_syzygy_keeps_leading_term(self, ring):
        f1, f2 = P(ring, "x*y"), P(ring, "x*y")
        mv = ModuleVector.unit(ring, 2, 1).axpy(1, M(0, 0), ModuleVector.unit(ring, 2, 2))
        assert mv.value([f1, f2]).is_zero
        lead = mv.lead(ring.order)
        assert lead[1] == Signature(M(0, 0), 1)


class TestInputRepresentation:
    def test_input_is_singleton(self, ring):
        f1 = P(ring, "x^2 + y^2")
        lp = LabeledPolynomial(
            0, Signature(M(0, 0), 1), f1, ModuleVector.unit(ring, 2, 1)
        )
        assert input_representation(lp, ring.order) == [(1, M(0, 0), 1)]

    def test_term_split_sorted_by_signature(self, ring):
        f1, f2 = P(ring, "x^2 + y^2"), P(ring, "x*y")
        mv = ModuleVector((P(ring, "x + y"), ring.zero))
        lp = LabeledPolynomial(
            0, Signature(M(1, 0), 1), mv.value([f1, f2]), mv
        )
        assert input_representation(lp, ring.order) == [
            (1, M(1, 0), 1),
            (1, M(0, 1), 1),
        ]

    def test_greatest_element_carries_signature(self, ring):
        f1, f2 = P(ring, "x^2 + y^2"), P(ring, "x*y")
        mv = ModuleVector.unit(ring, 2, 1).term_mul(1, M(0, 1)).axpy(
            1, M(1, 0), ModuleVector.unit(ring, 2, 2)
        )
        lp = LabeledPolynomial(2, Signature(M(0, 1), 1), P(ring, "y^3"), mv)
        triples = input_representation(lp, ring.order)
        c, m, idx = triples[0]
        assert Signature(m, idx) == lp.sig


class TestGenealogy:
    def test_fields(self):
        g = Genealogy(3, 1, M(1, 0), M(0, 1))
        assert g.greater == 3 and g.smaller == 1
        assert g.u_over == M(1, 0) and g.u_under == M(0, 1)
