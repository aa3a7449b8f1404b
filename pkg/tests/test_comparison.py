import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alpha2dynamo.besselspec import INF, operator_eigenvalue
from alpha2dynamo.comparison import (
    NormPair,
    Region,
    Relation,
    c3_abscissa,
    classify_pair,
    comparison_grid,
    delta_ex_height,
    in_delta_ex,
    k2_height_point,
    k4_domain_start,
    k4_radicand,
    k_curve,
    mu_lower_bound,
    relation_of,
    subcritical_band,
)
from alpha2dynamo.enclosure import ProblemConstants, right_bound_a
from alpha2dynamo.errors import DomainError

L = math.pi**2
LI = 4.493409457909064**2
C = ProblemConstants.from_norms(1, 1.0, 0.0, 0.0)


def test_curve_examples():
    top = math.sqrt(LI)
    assert k_curve("1", top, L, LI) == pytest.approx(0.0, abs=1e-12)
    assert k_curve("2", top, L, LI) == pytest.approx(0.0, abs=1e-12)
    assert k_curve("3", math.sqrt(LI + L), L, LI) == pytest.approx(0.0, abs=1e-12)
    assert k_curve("1", 0.0, L, LI) == pytest.approx(L, rel=1e-14)
    assert k_curve("5", top, L, LI) == pytest.approx(math.sqrt(LI * L) - L, rel=1e-12)
    assert k_curve("5", top, L, LI) == pytest.approx(4.246, abs=1e-3)
    assert k_curve("5", c3_abscissa(L, LI), L, LI) == pytest.approx(0.0, abs=1e-12)


def test_k4_closes_at_c2():
    top = math.sqrt(LI)
    h = delta_ex_height(L, LI)
    assert k_curve("4plus", top, L, LI) == pytest.approx(h, abs=1e-9)
    assert k_curve("4minus", top, L, LI) == pytest.approx(0.0, abs=1e-9)


def test_curve_ordering():
    top = math.sqrt(LI)
    for t in np.linspace(0.01, top - 0.01, 100):
        assert k_curve("1", t, L, LI) < k_curve("2", t, L, LI) < k_curve("3", t, L, LI)
    mu = k4_domain_start(L, LI)
    for t in np.linspace(mu, top, 50)[1:-1]:
        assert k_curve("4minus", t, L, LI) < k_curve("4plus", t, L, LI)


def test_curve_domains():
    top = math.sqrt(LI)
    with pytest.raises(DomainError):
        k_curve("1", top + 0.1, L, LI)
    with pytest.raises(DomainError):
        k_curve("2", 0.0, L, LI)
    with pytest.raises(DomainError):
        k_curve("5", top - 0.1, L, LI)
    with pytest.raises(DomainError):
        k_curve("4plus", k4_domain_start(L, LI) - 0.1, L, LI)
    with pytest.raises(DomainError):
        k_curve("6", 1.0, L, LI)


def test_mu_bounds():
    top = math.sqrt(LI)
    printed = mu_lower_bound(L, LI)
    point = k2_height_point(L, LI)
    mu = k4_domain_start(L, LI)
    assert 0 < printed <= point <= mu < top
    assert k4_radicand(mu, L, LI) == pytest.approx(0.0, abs=1e-9 * LI * LI)
    assert k_curve("2", point, L, LI) == pytest.approx(math.sqrt(L * LI) - L, abs=1e-8)
    assert mu_lower_bound(LI, LI) < top


def test_mu_is_rightmost_radicand_zero():
    mu = k4_domain_start(L, LI)
    ts = np.linspace(mu + 1e-9, math.sqrt(LI), 2000)
    assert all(k4_radicand(t, L, LI) >= -1e-12 for t in ts)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_mu_bounds_other_modes(l):
    L_, LI_ = operator_eigenvalue(l, float(l), 1), operator_eigenvalue(l, INF, 1)
    assert mu_lower_bound(L_, LI_) <= k2_height_point(L_, LI_) <= k4_domain_start(L_, LI_) < math.sqrt(LI_)


def test_classify_examples():
    v = classify_pair(NormPair(1.5, 15.0), C)
    assert v.relation is Relation.A_SMALLER
    assert v.subcritical_split and v.subcritical_split_analytic
    assert v.region is Region.OUTSIDE
    for t in (0.5, 2.0, math.sqrt(LI)):
        v = classify_pair(NormPair(t, 0.0), C)
        assert v.relation is Relation.EQUAL
        assert v.region is Region.DEGENERATE
    assert classify_pair(NormPair(0.0, 3.0), C).region is Region.DEGENERATE


@settings(max_examples=100, deadline=None)
@given(t=st.floats(0.01, 20), extra=st.floats(1e-6, 100))
def test_large_derivative_norm_means_a_smaller(t, extra):
    s = delta_ex_height(L, LI) + extra
    assert classify_pair(NormPair(t, s), C).relation is Relation.A_SMALLER


def test_k4_band_gives_b_smaller():
    mu = k4_domain_start(L, LI)
    for t in np.linspace(mu, math.sqrt(LI), 40)[1:-1]:
        lo, hi = k_curve("4minus", t, L, LI), k_curve("4plus", t, L, LI)
        for s in np.linspace(lo, hi, 7)[1:-1]:
            rb = right_bound_a(C.with_norms(t, s))
            assert rb.b_theta < rb.a_theta


def test_relation_tolerance():
    assert relation_of(1.0, 1.0 + 1e-12) is Relation.EQUAL
    assert relation_of(-1.0, 1.0) is Relation.A_SMALLER
    assert relation_of(1e6, 1e6 - 1.0) is Relation.B_SMALLER
    with pytest.raises(DomainError):
        NormPair(-1.0, 0.0)


def test_grid_agreement():
    grid = comparison_grid(C)
    assert len(grid) == 3600
    counts = {r: 0 for r in Region}
    for t, s, v in grid:
        counts[v.region] += 1
        if v.region is Region.IN_DELTA_EX:
            assert v.relation is Relation.B_SMALLER
        elif v.region is Region.OUTSIDE:
            assert v.relation is Relation.A_SMALLER
        # band boundaries are measure zero; the grid does not hit them
        assert v.subcritical_split == v.subcritical_split_analytic
        assert in_delta_ex(t, s, L, LI) == (v.region is Region.IN_DELTA_EX) or v.region is Region.ON_GAMMA_EX
    assert counts[Region.IN_DELTA_EX] > 0 and counts[Region.OUTSIDE] > 0


@settings(max_examples=300, deadline=None)
@given(t=st.floats(0.01, math.sqrt(LI) - 0.01), s=st.floats(0.01, 12))
def test_subcritical_equivalence(t, s):
    k1, k2 = k_curve("1", t, L, LI), k_curve("2", t, L, LI)
    if min(abs(s - k1), abs(s - k2)) < 1e-7:
        return
    rb = right_bound_a(C.with_norms(t, s))
    assert (rb.a_theta < 0 < rb.b_theta) == subcritical_band(t, s, L, LI)
