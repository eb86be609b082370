"""Expansion-layer tests: truncation planning, algebraic partial sums, the
two terminant estimates, both compound remainder expansions, the leading-order
closed forms, and the full evaluator built from them. Golden digits come from
the frozen reference tables; everything else is checked against the exact
remainder oracles.
"""

from __future__ import annotations

import warnings

import pytest

from voigt_asym import (
    BelowAsymptoticRangeWarning,
    DomainError,
    StokesCollarWarning,
    TruncationPlan,
    UnsupportedOrderError,
    VoigtArgument,
    algebraic_partial_sums,
    evaluate_via_expansion,
    hat_expansion,
    leading_remainder,
    optimal_truncation,
    remainder_exact,
    terminant_asymptotic,
    theorem1,
    theorem2,
    voigt_exact_erfc,
)
from voigt_asym.tables import (
    TABLE1_FOOT,
    TABLE1_M,
    TABLE1_ROWS,
    TABLE1_SIG,
    tolerance_last_digit,
)


# --------------------------------------------------------------- truncation

def test_optimal_truncation_reference_points(ctx40):
    plan = optimal_truncation("3.5", ctx40)
    assert (plan.m, float(plan.alpha)) == (12, 0.25)
    plan = optimal_truncation(6, ctx40)
    assert (plan.m, float(plan.alpha)) == (36, 0.5)
    plan = optimal_truncation(1, ctx40)
    assert (plan.m, float(plan.alpha)) == (1, 0.5)


def test_optimal_truncation_below_range_warns(ctx40):
    with pytest.warns(BelowAsymptoticRangeWarning):
        optimal_truncation("0.5", ctx40)
    with pytest.raises(DomainError):
        optimal_truncation(0, ctx40)
    with pytest.raises(DomainError):
        optimal_truncation(-2, ctx40)


def test_plan_override(ctx40):
    plan = TruncationPlan.for_m(10, "3.5", ctx40)
    assert plan.m == 10
    assert float(plan.nu) == 10.5


# ------------------------------------------------------------ partial sums

def test_partial_sums_on_imaginary_axis(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_xy(0, 2, ctx40)
    ev = algebraic_partial_sums(arg, 1, ctx40)
    assert abs(ev.K - 1 / (mctx.sqrt(mctx.pi) * 2)) < mctx.mpf(10) ** (-38)
    assert ev.L == 0


def test_partial_sums_on_real_axis(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_xy(3, 0, ctx40)
    ev = algebraic_partial_sums(arg, 1, ctx40)
    assert abs(ev.L - 1 / (mctx.sqrt(mctx.pi) * 3)) < mctx.mpf(10) ** (-38)
    # cos(theta) at the rounded pi/2 leaves roundoff dust, not an exact zero
    assert abs(ev.K) < mctx.mpf(10) ** (-45)


def test_partial_sums_validation(ctx40):
    arg = VoigtArgument.from_xy(1, 1, ctx40)
    with pytest.raises(DomainError):
        algebraic_partial_sums(arg, -1, ctx40)
    with pytest.raises(DomainError):
        algebraic_partial_sums(VoigtArgument.from_xy(0, 0, ctx40), 3, ctx40)


def test_decomposition_is_m_invariant(ctx40):
    # partial sum + exact remainder reconstructs the function at any cut
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar(3, mctx.pi / 3, ctx40)
    full = voigt_exact_erfc(arg, ctx40)
    for m in (1, 5, 9, 14):
        sums = algebraic_partial_sums(arg, m, ctx40)
        rem = remainder_exact(arg, m, ctx40)
        assert abs(sums.K + rem.K - full.K) < mctx.mpf(10) ** (-30) * abs(full.K)
        assert abs(sums.L + rem.L - full.L) < mctx.mpf(10) ** (-30) * abs(full.L)


# --------------------------------------------------------------- terminant

def test_terminant_half_on_stokes_line(ctx40):
    mctx = ctx40.mp()
    for absz in (9, 16, 25):
        z = mctx.mpf(absz) * mctx.expj(mctx.pi)
        T = terminant_asymptotic(z, absz + 0.5, "uniform", 2, ctx40)
        assert abs(T - mctx.mpf(1) / 2) <= mctx.mpf("1.5") / mctx.sqrt(absz)


def test_terminant_away_matches_gamma_oracle(ctx40):
    # |z| = 12.25, arg z = pi/5 corresponds to the |w| = 3.5, theta = pi/10
    # geometry where the exact terminant follows from the remainder oracle
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar("3.5", mctx.pi / 10, ctx40)
    z = arg.z(ctx40)
    rem = remainder_exact(arg, 12, ctx40, route="gamma")
    T_exact = mctx.mpc(rem.K, -rem.L) * mctx.exp(-z) / 2
    for k_terms in (1, 3, 5):
        T_est = terminant_asymptotic(z, mctx.mpf("12.5"), "away", k_terms, ctx40)
        # first omitted term of the A-series sets the accuracy
        from voigt_asym import A2k

        phi = mctx.pi - mctx.arg(z)
        omitted = abs(
            A2k(phi, mctx.mpf("0.25"), k_terms, ctx40)
        ) / abs(z) ** k_terms
        pref = abs(mctx.exp(-z - abs(z))) / mctx.sqrt(2 * mctx.pi * abs(z))
        bound = 2 * pref * omitted / abs(1 - mctx.expj(phi))
        assert abs(T_est - T_exact) <= bound


def test_terminant_uniform_reduces_to_away_far_from_stokes(ctx40):
    # with phi bounded away from zero the smoothed form collapses onto the
    # plain one once |z| is large enough for the erfc tail to be negligible
    mctx = ctx40.mp()
    phi = mctx.mpf("0.3")
    z = 3600 * mctx.expj(mctx.pi - phi)
    nu = mctx.mpf(3600) + mctx.mpf(1) / 2
    away = terminant_asymptotic(z, nu, "away", 3, ctx40)
    unif = terminant_asymptotic(z, nu, "uniform", 3, ctx40)
    assert abs(away - unif) < mctx.mpf(10) ** (-6) * abs(away)


def test_terminant_validation(ctx40):
    mctx = ctx40.mp()
    z = 9 * mctx.expj(mctx.pi)
    with pytest.raises(DomainError):
        terminant_asymptotic(z, 9.5, "away", 2, ctx40)  # pole on Stokes line
    with pytest.raises(DomainError):
        terminant_asymptotic(z, 30, "uniform", 2, ctx40)  # nu too far from |z|
    with pytest.raises(DomainError):
        terminant_asymptotic(0, 0.5, "uniform", 2, ctx40)
    with pytest.raises(DomainError):
        terminant_asymptotic(z, 9.5, "smooth", 2, ctx40)
    with pytest.raises(UnsupportedOrderError):
        terminant_asymptotic(z, 9.5, "uniform", 6, ctx40)
    near = 9 * mctx.expj(mctx.pi - mctx.mpf("0.01"))
    with pytest.raises(UnsupportedOrderError):
        # close to the Stokes line only three B terms are available
        terminant_asymptotic(near, 9.5, "uniform", 4, ctx40)


# ------------------------------------------------------------- theorem 1

def _check_against_reference(got, want_str, sig):
    tol = tolerance_last_digit(want_str, sig) * 1.0000001
    assert abs(float(got) - float(want_str)) <= tol, (got, want_str)


def test_theorem1_reproduces_reference_column(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar("3.5", mctx.pi / 10, ctx40)
    plan = optimal_truncation("3.5", ctx40)
    assert plan.m == TABLE1_M
    for k_terms, row in TABLE1_ROWS.items():
        est = theorem1(arg, plan, k_terms, ctx40)
        _check_against_reference(est.Khat, row[0], TABLE1_SIG)
        _check_against_reference(est.Lhat, row[1], TABLE1_SIG)


def test_theorem1_refuses_stokes_collar(ctx40):
    mctx = ctx40.mp()
    plan = optimal_truncation(6, ctx40)
    arg = VoigtArgument.from_polar(6, mctx.pi * mctx.mpf("0.49"), ctx40)
    with pytest.raises(DomainError):
        theorem1(arg, plan, 3, ctx40)


def test_theorem1_warns_approaching_collar(ctx40):
    mctx = ctx40.mp()
    plan = optimal_truncation(6, ctx40)
    arg = VoigtArgument.from_polar(6, mctx.pi * mctx.mpf("0.45"), ctx40)
    with pytest.warns(StokesCollarWarning):
        theorem1(arg, plan, 3, ctx40)


def test_theorem1_error_law_at_optimal_truncation(ctx40):
    # retaining all five A terms leaves an error below 0.05 e^{-r^2}/r^7
    # (measured ratios 0.0043, 0.0015, 0.0006 at r = 3, 4, 5)
    mctx = ctx40.mp()
    for r in (3, 4, 5):
        arg = VoigtArgument.from_polar(r, mctx.pi / 6, ctx40)
        plan = optimal_truncation(r, ctx40)
        est = theorem1(arg, plan, 5, ctx40)
        ex = remainder_exact(arg, plan.m, ctx40)
        err = abs(mctx.mpc(est.Khat - ex.K, -(est.Lhat - ex.L)))
        assert err <= mctx.mpf("0.05") * mctx.exp(-r * r) / mctx.mpf(r) ** 7


def test_theorem1_error_estimate_is_honest(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar(4, mctx.pi / 4, ctx40)
    plan = optimal_truncation(4, ctx40)
    for k_terms in (1, 2, 3):
        est = theorem1(arg, plan, k_terms, ctx40)
        ex = remainder_exact(arg, plan.m, ctx40)
        assert abs(est.Khat - ex.K) <= est.err_estimate
        assert abs(est.Lhat - ex.L) <= est.err_estimate


# ------------------------------------------------------------- theorem 2

def test_theorem2_reproduces_reference_column(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar("3.5", 3 * mctx.pi / 8, ctx40)
    plan = optimal_truncation("3.5", ctx40)
    for k_terms, row in TABLE1_ROWS.items():
        est = theorem2(arg, plan, k_terms, ctx40)
        _check_against_reference(est.Khat, row[2], TABLE1_SIG)
        _check_against_reference(est.Lhat, row[3], TABLE1_SIG)


def test_reference_foot_row_is_exact_remainder(ctx40):
    mctx = ctx40.mp()
    plan = optimal_truncation("3.5", ctx40)
    for theta, cols in ((mctx.pi / 10, (0, 1)), (3 * mctx.pi / 8, (2, 3))):
        arg = VoigtArgument.from_polar("3.5", theta, ctx40)
        ex = remainder_exact(arg, plan.m, ctx40)
        _check_against_reference(ex.K, TABLE1_FOOT[cols[0]], TABLE1_SIG)
        _check_against_reference(ex.L, TABLE1_FOOT[cols[1]], TABLE1_SIG)


def test_theorem2_goes_over_into_theorem1(ctx40):
    # away from the Stokes collar the two compound expansions agree to the
    # documented 1e-3 relative level at r = 6
    mctx = ctx40.mp()
    plan = optimal_truncation(6, ctx40)
    for frac in ("0.05", "0.1", "0.2", "0.3"):
        arg = VoigtArgument.from_polar(6, mctx.pi * mctx.mpf(frac), ctx40)
        t1 = theorem1(arg, plan, 3, ctx40)
        t2 = theorem2(arg, plan, 3, ctx40)
        d1 = mctx.mpc(t1.Khat, -t1.Lhat)
        d2 = mctx.mpc(t2.Khat, -t2.Lhat)
        assert abs(d1 - d2) < mctx.mpf(10) ** (-3) * abs(d1)


def test_theorem2_on_stokes_line_recovers_real_axis_value(ctx40):
    # at theta = pi/2 the exact remainder K-part is e^{-r^2} itself and the
    # smoothed expansion reproduces it structurally
    mctx = ctx40.mp()
    r = mctx.mpf("3.5")
    arg = VoigtArgument.from_polar(r, mctx.pi / 2, ctx40)
    plan = optimal_truncation(r, ctx40)
    est = theorem2(arg, plan, 3, ctx40)
    assert abs(est.Khat - mctx.exp(-r * r)) < mctx.mpf(10) ** (-40)
    ex = remainder_exact(arg, plan.m, ctx40)
    assert abs(est.Lhat - ex.L) < mctx.mpf(10) ** (-4) * abs(ex.L)


def test_theorem2_k_terms_cap_near_stokes(ctx40):
    mctx = ctx40.mp()
    plan = optimal_truncation(6, ctx40)
    near = VoigtArgument.from_polar(6, mctx.pi * mctx.mpf("0.49"), ctx40)
    with pytest.raises(UnsupportedOrderError):
        theorem2(near, plan, 4, ctx40)
    far = VoigtArgument.from_polar(6, mctx.pi / 4, ctx40)
    theorem2(far, plan, 5, ctx40)  # five terms fine away from the line


# ------------------------------------------------------- leading remainders

def test_leading_away_equals_first_theorem1_term(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar(4, mctx.pi / 5, ctx40)
    plan = optimal_truncation(4, ctx40)
    lead = leading_remainder(arg, plan, "away", ctx40)
    t1 = theorem1(arg, plan, 1, ctx40)
    scale = abs(t1.Khat) + abs(t1.Lhat)
    assert abs(lead.Khat - t1.Khat) < mctx.mpf(10) ** (-42) * scale
    assert abs(lead.Lhat - t1.Lhat) < mctx.mpf(10) ** (-42) * scale


def test_leading_away_within_five_percent_of_exact(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar("3.5", mctx.pi / 10, ctx40)
    plan = optimal_truncation("3.5", ctx40)
    lead = leading_remainder(arg, plan, "away", ctx40)
    ex = remainder_exact(arg, plan.m, ctx40)
    assert abs(lead.Khat - ex.K) < mctx.mpf("0.05") * abs(ex.K)
    assert abs(lead.Lhat - ex.L) < mctx.mpf("0.05") * abs(ex.L)


def test_leading_away_L_vanishes_on_imaginary_axis(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_xy(0, 4, ctx40)
    plan = optimal_truncation(4, ctx40)
    lead = leading_remainder(arg, plan, "away", ctx40)
    assert lead.Lhat == 0
    sgn = -1 if plan.m % 2 else 1
    want = sgn * mctx.exp(-16) / (mctx.sqrt(2 * mctx.pi) * 4)
    assert abs(lead.Khat - want) < mctx.mpf(10) ** (-38) * abs(want)


def test_leading_near_recovers_real_axis_exactly(ctx40):
    # on the Stokes line the head is E(0) = sqrt(2 pi) and the correction
    # term dies, leaving exactly e^{-r^2}
    mctx = ctx40.mp()
    r = mctx.mpf("3.5")
    arg = VoigtArgument.from_polar(r, mctx.pi / 2, ctx40)
    plan = optimal_truncation(r, ctx40)
    lead = leading_remainder(arg, plan, "near", ctx40)
    assert abs(lead.Khat - mctx.exp(-r * r)) < mctx.mpf(10) ** (-40)


def test_leading_near_accuracy_near_stokes(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar(6, mctx.pi * mctx.mpf("0.48"), ctx40)
    plan = optimal_truncation(6, ctx40)
    lead = leading_remainder(arg, plan, "near", ctx40)
    ex = remainder_exact(arg, plan.m, ctx40)
    scale = abs(mctx.mpc(ex.K, -ex.L))
    assert abs(lead.Khat - ex.K) < mctx.mpf("0.01") * scale
    assert abs(lead.Lhat - ex.L) < mctx.mpf("0.01") * scale


def test_leading_regime_validation(ctx40):
    mctx = ctx40.mp()
    plan = optimal_truncation(4, ctx40)
    inside = VoigtArgument.from_polar(4, mctx.pi * mctx.mpf("0.49"), ctx40)
    with pytest.raises(DomainError):
        leading_remainder(inside, plan, "away", ctx40)
    far = VoigtArgument.from_polar(4, mctx.pi / 10, ctx40)
    with pytest.raises(DomainError):
        leading_remainder(far, plan, "near", ctx40)
    with pytest.raises(DomainError):
        leading_remainder(far, plan, "middle", ctx40)


# ------------------------------------------------------------- full evaluator

def test_hat_expansion_dispatch(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar(4, mctx.pi / 5, ctx40)
    plan = optimal_truncation(4, ctx40)
    for variant, method in (
        ("eq41", "eq41"),
        ("eq42", "eq42"),
        ("leading-away", "leading-away"),
        ("leading-near", None),  # pi/5 is outside the near regime
    ):
        if method is None:
            continue
        est = hat_expansion(arg, plan, variant, 2, ctx40)
        assert est.method == method
    with pytest.raises(DomainError):
        hat_expansion(arg, plan, "eq43", 2, ctx40)


def test_evaluate_via_expansion_tracks_oracle(ctx40):
    mctx = ctx40.mp()
    for variant, frac in (("eq41", "0.2"), ("eq42", "0.45")):
        arg = VoigtArgument.from_polar(5, mctx.pi * mctx.mpf(frac), ctx40)
        ev = evaluate_via_expansion(arg, variant, 3, None, ctx40)
        ex = voigt_exact_erfc(arg, ctx40)
        assert abs(ev.K - ex.K) <= ev.err_estimate
        assert abs(ev.L - ex.L) <= ev.err_estimate
        # and the estimate is tight enough to be useful
        assert ev.err_estimate < mctx.mpf(10) ** (-8)


def test_evaluate_via_expansion_m_override(ctx40):
    mctx = ctx40.mp()
    arg = VoigtArgument.from_polar(4, mctx.pi / 4, ctx40)
    ev_opt = evaluate_via_expansion(arg, "eq41", 3, None, ctx40)
    ev_off = evaluate_via_expansion(arg, "eq41", 3, 14, ctx40)
    ex = voigt_exact_erfc(arg, ctx40)
    # off-optimum cuts still reconstruct the function, just less accurately
    assert abs(ev_off.K - ex.K) < mctx.mpf(10) ** (-8)
    assert abs(ev_opt.K - ex.K) <= abs(ev_off.K - ex.K) * 100


def test_below_range_warning_propagates(ctx40):
    arg = VoigtArgument.from_xy("0.3", "0.4", ctx40)
    with pytest.warns(BelowAsymptoticRangeWarning):
        evaluate_via_expansion(arg, "eq42", 1, None, ctx40)


def test_warnings_do_not_hide_results(ctx40):
    # collar warnings must come with a finite result attached
    mctx = ctx40.mp()
    plan = optimal_truncation(6, ctx40)
    arg = VoigtArgument.from_polar(6, mctx.pi * mctx.mpf("0.42"), ctx40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = theorem1(arg, plan, 3, ctx40)
    assert mctx.isfinite(est.Khat) and mctx.isfinite(est.Lhat)
