"""Tests for the certified periodic-point census and the checks built on it."""

import math

import numpy as np
import pytest

from orbitlab import (
    CensusResult,
    ConfigurationError,
    GrowthParams,
    InvalidInputError,
    MultijetPoint,
    PointTuple,
    PolynomialMap,
    RootProductPerturbation,
    UncertifiedCensusError,
    as_perturbed,
    find_almost_periodic,
    find_periodic,
    gamma_n_of_map,
    ih_check,
    jet_solve,
    prop11_check,
)

from conftest import random_contraction

GOLDEN = (1.0 - math.sqrt(5.0)) / 2.0  # the in-domain fixed point of x^2 - 1


def quad():
    return PolynomialMap.univariate([-1.0, 0.0, 1.0], domain_radius=1.0625)


def half():
    return PolynomialMap.univariate([0.0, 0.5], domain_radius=1.0)


def parabolic():
    """x - x^3 assembled through the jet solver over the anchor (0, 0.75)."""
    base = as_perturbed(half())
    anchor = PointTuple([0.0, 0.75])
    target = MultijetPoint(
        anchor,
        values=[0.0, 0.75 / 2.0 - 0.75**3],
        derivs=[0.5, 0.5 - 3.0 * 0.75**2],
    )
    solved = jet_solve(anchor, target)
    g = base
    nodes = anchor.cyclic_nodes()
    for k, u_k in enumerate(solved.u):
        if u_k != 0.0:
            g = g.with_term(RootProductPerturbation(float(u_k), tuple(nodes[:k])))
    return g


# -- counts and locations -------------------------------------------------------


def test_quad_fixed_points():
    res = find_periodic(quad(), 1)
    assert res.certified
    assert res.count == 1
    assert res.records[0].location == pytest.approx(GOLDEN, abs=1e-9)
    assert res.records[0].residual < 1e-9
    assert res.records[0].least_period == 1


def test_quad_period_two():
    res = find_periodic(quad(), 2)
    assert res.certified
    assert res.count == 3
    locs = sorted(r.location for r in res.records)
    assert locs[0] == pytest.approx(-1.0, abs=1e-9)
    assert locs[1] == pytest.approx(GOLDEN, abs=1e-9)
    assert locs[2] == pytest.approx(0.0, abs=1e-9)
    by_loc = {round(r.location, 3): r for r in res.records}
    assert by_loc[-1.0].least_period == 2 and by_loc[-1.0].is_least_period
    assert by_loc[0.0].least_period == 2
    assert by_loc[round(GOLDEN, 3)].least_period == 1
    assert not by_loc[round(GOLDEN, 3)].is_least_period


def test_quad_period_three():
    res = find_periodic(quad(), 3)
    assert res.certified
    assert res.count == 1
    assert res.records[0].location == pytest.approx(GOLDEN, abs=1e-9)


def test_half_map_census():
    for n in (1, 2, 5, 10):
        res = find_periodic(half(), n)
        assert res.certified
        assert res.count == 1
        assert res.records[0].location == pytest.approx(0.0, abs=1e-10)
        assert res.records[0].gap == pytest.approx(1.0 - 2.0**-n, abs=1e-12)


def test_random_contractions_match_root_oracle(rng):
    for _ in range(15):
        f = random_contraction(rng)
        p = np.polynomial.Polynomial(f._uni)
        for n in (1, 2, 3):
            comp = p
            for _ in range(n - 1):
                comp = p(comp)
            g = comp - np.polynomial.Polynomial([0.0, 1.0])
            roots = g.roots()
            real = sorted(
                float(r.real)
                for r in roots
                if abs(r.imag) < 1e-9 and abs(r.real) <= 1.0
            )
            # collapse numerically coincident roots
            dedup = []
            for r in real:
                if not dedup or r - dedup[-1] > 1e-7:
                    dedup.append(r)
            res = find_periodic(f, n, radius=1.0)
            if not res.certified:
                continue  # tangential case; the census says so rather than guess
            assert res.count == len(dedup)
            for rec, want in zip(res.records, dedup):
                assert rec.location == pytest.approx(want, abs=1e-8)


def test_gamma_n_values():
    v1, c1 = gamma_n_of_map(quad(), 1)
    assert v1 == pytest.approx(math.sqrt(5.0) - 2.0, abs=1e-9)
    v2, c2 = gamma_n_of_map(quad(), 2)
    # fixed point multiplier squared: (1 - sqrt(5))^2 = 6 - 2 sqrt(5)
    assert v2 == pytest.approx(5.0 - 2.0 * math.sqrt(5.0), abs=1e-9)
    assert v2 == min(r.gap for r in c2.records)


def test_gamma_n_of_empty_census_is_infinite():
    res = CensusResult(
        period=1,
        radius=1.0,
        records=[],
        uncertified_regions=[],
        certified=True,
        lipschitz=1.0,
        evaluations=0,
    )
    assert res.count == 0
    assert res.gamma_n == math.inf


def test_census_rejects_bad_inputs():
    with pytest.raises(InvalidInputError):
        find_periodic(half(), 0)
    with pytest.raises(InvalidInputError):
        find_periodic(half(), 2, tol=0.0)
    shift = PolynomialMap.univariate([0.1, 1.0], domain_radius=1.0)
    with pytest.raises(UncertifiedCensusError):
        find_periodic(shift, 1, radius=1.0)  # not forward invariant


def test_census_overflow_guard():
    with pytest.raises(ConfigurationError):
        find_periodic(quad(), 800)


def test_two_dimensional_fallback_is_uncertified():
    f = PolynomialMap.linear(np.diag([0.5, 0.25]), domain_radius=1.0)
    res = find_periodic(f, 1)
    assert not res.certified
    assert res.count == 0  # count tallies certified records only
    assert len(res.records) >= 1  # the Newton sweep still reports the origin
    assert min(abs(r.location) for r in res.records) < 1e-8


# -- almost-periodic covers ------------------------------------------------------


def test_almost_periodic_cover_half_map():
    cover = find_almost_periodic(half(), 1, 0.1)
    # the true level set of |x/2 - x| <= 0.1 is [-0.2, 0.2]
    assert cover.fully_refined
    xs = np.linspace(-0.2, 0.2, 101)
    for x in xs:
        assert any(lo <= x <= hi for lo, hi in cover.intervals)
    assert cover.total_length >= 0.4
    lo = min(l for l, h in cover.intervals)
    hi = max(h for l, h in cover.intervals)
    assert lo >= -0.36 and hi <= 0.36


def test_almost_periodic_nesting():
    small = find_almost_periodic(half(), 1, 0.05, resolution=0.01)
    big = find_almost_periodic(half(), 1, 0.1, resolution=0.01)
    for lo, hi in small.intervals:
        assert any(LO <= lo and hi <= HI for LO, HI in big.intervals)


def test_almost_periodic_shrinks_to_census():
    cover = find_almost_periodic(half(), 1, 1e-6, resolution=1e-4)
    assert any(lo <= 0.0 <= hi for lo, hi in cover.intervals)
    assert cover.total_length < 0.01


def test_almost_periodic_validation():
    with pytest.raises(InvalidInputError):
        find_almost_periodic(half(), 1, -0.1)
    with pytest.raises(InvalidInputError):
        find_almost_periodic(half(), 1, math.inf)


# -- the stage-wise hypothesis check ----------------------------------------------


def test_ih_holds_for_half_map():
    report = ih_check(half(), GrowthParams(C=1.0, delta=0.5), 4)
    assert report.status == "holds"
    assert len(report.rows) == 4
    for k, row in enumerate(report.rows, start=1):
        assert row.period == k
        assert row.status == "holds"
        assert row.threshold == pytest.approx(math.exp(-float(k) ** 1.5))
        assert row.witness is None
        assert row.unresolved == ()
    assert report.witness is None


def test_ih_vacuous():
    report = ih_check(half(), GrowthParams(C=1.0, delta=1.0), 0)
    assert report.status == "holds"
    assert report.rows == ()


def test_parabolic_plant_is_cubic():
    g = parabolic()
    for x in (-0.9, -0.3, 0.0, 0.4, 0.75, 1.0):
        assert g.evaluate(x) == pytest.approx(x - x**3, abs=1e-15)
        assert g.derivative(x) == pytest.approx(1.0 - 3.0 * x * x, abs=1e-14)


def test_ih_fails_on_parabolic_plant():
    report = ih_check(parabolic(), GrowthParams(C=1.0, delta=1.0), 3)
    assert report.status == "fails"
    row = report.rows[0]
    assert row.period == 1
    assert row.status == "fails"
    w = row.witness
    assert w is not None
    assert w.kind == "witness"
    # the witness is certifiably almost periodic with gap under the threshold
    assert abs(w.location**3) <= row.slack
    assert w.gap < row.threshold
    assert report.witness is w


def test_ih_budget_exhaustion_is_indeterminate():
    report = ih_check(
        half(), GrowthParams(C=1.0, delta=0.5), 1, max_evaluations_per_period=100
    )
    assert report.status == "indeterminate"
    row = report.rows[0]
    assert row.status == "indeterminate"
    assert row.unresolved
    total = sum(hi - lo for lo, hi in row.unresolved)
    assert total == pytest.approx(2.0 * report.radius, rel=1e-12)


def test_ih_rejects_negative_n_max():
    with pytest.raises(InvalidInputError):
        ih_check(half(), GrowthParams(C=1.0, delta=1.0), -1)


# -- the implied growth constant ---------------------------------------------------


def test_prop11_half_map_closed_form():
    report = prop11_check(half(), 4)
    assert not report.inverse_unbounded
    assert report.m_value == pytest.approx(2.0, abs=1e-9)
    assert report.rho == 1.0
    for n, row in enumerate(report.rows, start=1):
        assert row.certified and row.applicable
        assert row.count == 1
        want = (1.0 - 2.0**-n) * report.m_value ** (-2 * n)
        assert row.c_impl == pytest.approx(want, rel=1e-6)
    assert report.c_impl_max == pytest.approx(report.rows[0].c_impl)
    assert report.all_certified


def test_prop11_quad_bounded():
    report = prop11_check(quad(), 6)
    assert report.inverse_unbounded  # f'(0) = 0, no global inverse bound
    assert report.m_value >= 2.0
    for row in report.rows:
        assert row.certified
        assert row.applicable
        assert 0.0 < row.c_impl < 1.0


def multiplier_minus_one_plant():
    """Cubic with the 2-cycle {0.5, -0.5} of multiplier exactly -1."""
    base = as_perturbed(PolynomialMap.univariate([0.0, 0.5], domain_radius=0.8))
    anchor = PointTuple([0.5, -0.5])
    target = MultijetPoint(anchor, values=[-0.75, 0.75], derivs=[0.5, -1.5])
    solved = jet_solve(anchor, target)
    g = base
    nodes = anchor.cyclic_nodes()
    for k, u_k in enumerate(solved.u):
        if u_k != 0.0:
            g = g.with_term(RootProductPerturbation(float(u_k), tuple(nodes[:k])))
    return g


def test_prop11_flags_nonhyperbolic_cycle():
    g = multiplier_minus_one_plant()
    # sanity: the plant realizes the prescribed jet
    assert g.evaluate(0.5) == pytest.approx(-0.5, abs=1e-14)
    assert g.evaluate(-0.5) == pytest.approx(0.5, abs=1e-14)
    assert g.derivative(0.5) * g.derivative(-0.5) == pytest.approx(-1.0, abs=1e-13)

    report = prop11_check(g, 2)
    row1, row2 = report.rows
    assert row1.applicable and row1.certified
    assert row2.certified
    assert not row2.applicable  # the cycle sits on the unit circle
    assert row2.c_impl is None
    assert row2.gamma_n <= 1e-9
    assert row2.count >= 3
    # the nonhyperbolic rows are excluded from the running maximum
    assert report.c_impl_max == pytest.approx(row1.c_impl)


def test_prop11_rejects_bad_n():
    with pytest.raises(InvalidInputError):
        prop11_check(half(), 0)
