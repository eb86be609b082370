"""Optimally truncated expansions and their exponentially improved remainders.

The algebraic expansion of K - iL in inverse powers of w is divergent; cut
it at m terms and the remainder is exactly 2 e^{w^2} T_nu(w^2) with
nu = m + 1/2. Stopping near the least term, m ~ r^2, makes that remainder
exponentially small, of order e^{-r^2}, and this module estimates it two
ways:

* ``theorem1`` ("eq41"): a Poincare-type series in the A_2k coefficients,
  valid away from the Stokes line theta = pi/2 and increasingly wrong as it
  is approached;
* ``theorem2`` ("eq42"): the uniform form, with the Stokes jump smoothed by
  an error function through E(phi) and corrections in the B^_2k
  coefficients, valid up to and on the Stokes line.

``leading_remainder`` gives the one-term versions of both, and
``terminant_asymptotic`` exposes the underlying terminant estimate itself.
All estimates here are asymptotic, not exact; the matching exact quantities
live in ``oracle.remainder_exact``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .coefficients import (
    PHI_SWITCH,
    A2k,
    B2k,
    Bhat2k,
    E_of_phi,
    c_of_phi,
)
from .exceptions import (
    BelowAsymptoticRangeWarning,
    DomainError,
    StokesCollarWarning,
    UnsupportedOrderError,
)
from .numerics import DEFAULT_CONTEXT, GUARD_DIGITS, PrecisionContext, pochhammer, to_mpf
from .oracle import Evaluation, VoigtArgument

# theta within this collar (in radians, as a fraction of pi) of the Stokes
# line is outside the stated validity of the non-uniform expansion
THETA_COLLAR_OVER_PI = 0.02

# past this theta the non-uniform expansion still evaluates but its accuracy
# is visibly degrading; callers get a warning rather than a refusal
STOKES_WARN_OVER_PI = 0.40

# the uniform leading-order display linearized in phi holds only near the
# Stokes line
NEAR_PHI_MAX = 0.5

MAX_K_TERMS = 5
MAX_K_TERMS_SMALL_PHI = 3

# the first omitted term estimates the truncation error but does not bound
# it; this margin absorbs the O(1) wobble so err_estimate can be trusted
EST_SAFETY = 3


@dataclass(frozen=True)
class TruncationPlan:
    """A truncation order m with its interpolation parameter.

    alpha = m + 1/2 - r^2 measures the offset from optimal truncation; the
    uniform coefficients are functions of it. ``optimal_truncation`` yields
    alpha in (0, 1]; plans built by hand may carry any alpha, at the price
    of a larger remainder.
    """

    m: int
    alpha: object
    nu: object

    @classmethod
    def for_m(cls, m: int, r, ctx: PrecisionContext = DEFAULT_CONTEXT) -> "TruncationPlan":
        if m < 0:
            raise DomainError("truncation order m must be nonnegative, got %r" % (m,))
        mctx = ctx.mp()
        rr = to_mpf(mctx, r)
        if not rr > 0:
            raise DomainError("truncation needs r > 0, got %s" % (rr,))
        nu = m + mctx.mpf(1) / 2
        return cls(m=m, alpha=nu - rr * rr, nu=nu)


def optimal_truncation(r, ctx: PrecisionContext = DEFAULT_CONTEXT) -> TruncationPlan:
    """The least-term cut m = floor(r^2 + 1/2), giving alpha in (0, 1]."""
    mctx = ctx.mp()
    rr = to_mpf(mctx, r)
    if not rr > 0:
        raise DomainError("optimal truncation needs r > 0, got %s" % (rr,))
    if rr < 1:
        warnings.warn(
            "r = %s is below the asymptotic range; the truncated expansion "
            "carries no accuracy there" % (rr,),
            BelowAsymptoticRangeWarning,
            stacklevel=2,
        )
    m = int(mctx.floor(rr * rr + mctx.mpf(1) / 2))
    return TruncationPlan.for_m(m, rr, ctx)


def algebraic_partial_sums(
    arg: VoigtArgument, m: int, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> Evaluation:
    """The m-term algebraic partial sums K_m, L_m.

    K_m - i L_m = (1/sqrt(pi)) sum_{k<m} (-1)^k (1/2)_k w^{-2k-1}; the real
    trigonometric resummation in (r, theta) is evaluated alongside the
    complex form and the two are required to agree, as a guard against sign
    slips in either.
    """
    if m < 0:
        raise DomainError("partial sum length must be nonnegative, got %r" % (m,))
    if arg.r == 0:
        raise DomainError("the algebraic expansion is undefined at the origin")
    mctx = ctx.mp(extra=GUARD_DIGITS)
    w = mctx.mpc(arg.y, arg.x)
    theta = mctx.convert(arg.theta)
    r = mctx.convert(arg.r)
    inv_sqrt_pi = 1 / mctx.sqrt(mctx.pi)

    S = mctx.mpc(0)
    K_trig = mctx.mpf(0)
    L_trig = mctx.mpf(0)
    winv = 1 / w
    wpow = winv
    rpow = 1 / r
    poch = mctx.mpf(1)
    for k in range(m):
        if k > 0:
            poch *= k - mctx.mpf(1) / 2
            wpow *= winv * winv
            rpow /= r * r
        sgn = -1 if k % 2 else 1
        S += sgn * poch * wpow
        K_trig += sgn * poch * rpow * mctx.cos((2 * k + 1) * theta)
        L_trig += sgn * poch * rpow * mctx.sin((2 * k + 1) * theta)
    S *= inv_sqrt_pi
    K_trig *= inv_sqrt_pi
    L_trig *= inv_sqrt_pi

    scale = abs(K_trig) + abs(L_trig) + mctx.mpf(10) ** (-2 * ctx.digits)
    tol = mctx.mpf(10) ** (5 - ctx.digits)
    assert abs(S.real - K_trig) <= tol * scale, "partial-sum forms disagree (K)"
    assert abs(-S.imag - L_trig) <= tol * scale, "partial-sum forms disagree (L)"

    out = ctx.mp()
    eps = out.mpf(10) ** (1 - ctx.digits)
    return Evaluation(
        K=out.mpf(K_trig), L=out.mpf(L_trig), method="algebraic",
        err_estimate=eps * out.mpf(scale),
    )


@dataclass(frozen=True)
class RemainderEstimate:
    """An asymptotic estimate of the truncation remainder (hat-K, hat-L)."""

    Khat: object
    Lhat: object
    k_used: int
    method: str
    err_estimate: object = None


def _check_k_terms(k_terms: int, small_phi: bool):
    cap = MAX_K_TERMS_SMALL_PHI if small_phi else MAX_K_TERMS
    if not 1 <= k_terms <= cap:
        raise UnsupportedOrderError(
            "k_terms must lie in [1, %d]%s, got %r"
            % (cap, " this close to the Stokes line" if small_phi else "", k_terms)
        )


def terminant_asymptotic(
    z, nu, region: str = "uniform", k_terms: int = 3,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
):
    """Asymptotic value of the terminant T_nu(z) near optimal order.

    Requires nu = |z| + alpha with |alpha| <= 1 and 0 <= arg z <= pi.
    region="away" uses the A-coefficient series (invalid as arg z -> pi,
    where its prefactor pole sits); region="uniform" smooths the Stokes
    jump with an error function and uses the B-coefficient series. On the
    Stokes line arg z = pi the uniform form gives T = 1/2 + O(|z|^{-1/2}).
    """
    mctx = ctx.mp(extra=GUARD_DIGITS)
    zz = mctx.mpc(z)
    absz = abs(zz)
    if absz == 0:
        raise DomainError("the terminant needs z != 0")
    argz = mctx.arg(zz)
    slack = mctx.mpf(10) ** (-12)
    if argz < -slack or argz > mctx.pi + slack:
        raise DomainError("terminant_asymptotic covers 0 <= arg z <= pi, got arg z = %s" % (argz,))
    alpha = to_mpf(mctx, nu) - absz
    if abs(alpha) > 1 + slack:
        raise DomainError(
            "nu must sit within one unit of |z| (|alpha| <= 1), got alpha = %s" % (alpha,)
        )
    phi = mctx.pi - argz
    if phi < 0:
        phi = mctx.mpf(0)

    if region == "away":
        _check_k_terms(k_terms, small_phi=False)
        if phi < mctx.mpf(10) ** (-8):
            raise DomainError(
                "the non-uniform terminant estimate has a pole at arg z = pi; "
                "use region=\"uniform\""
            )
        series = sum(
            A2k(phi, alpha, k, ctx) / absz**k for k in range(k_terms)
        )
        pref = -mctx.mpc(0, 1) * mctx.expj(phi * to_mpf(mctx, nu)) / (1 - mctx.expj(phi))
        return ctx.mp().mpc(
            pref * mctx.exp(-zz - absz) / mctx.sqrt(2 * mctx.pi * absz) * series
        )

    if region != "uniform":
        raise DomainError("unknown terminant region %r" % (region,))
    _check_k_terms(k_terms, small_phi=phi < PHI_SWITCH)
    zeta = c_of_phi(phi, ctx) * mctx.sqrt(absz / 2)
    series = sum(B2k(phi, alpha, k, ctx) / absz**k for k in range(k_terms))
    val = mctx.erfc(zeta) / 2 - mctx.mpc(0, 1) * mctx.exp(
        -zz - absz + mctx.mpc(0, 1) * phi * absz
    ) / mctx.sqrt(2 * mctx.pi * absz) * series
    return ctx.mp().mpc(val)


def _exp_prefactor(mctx, arg: VoigtArgument):
    r = mctx.convert(arg.r)
    return mctx.exp(-r * r) / mctx.sqrt(2 * mctx.pi)


def theorem1(
    arg: VoigtArgument, plan: TruncationPlan, k_terms: int = 3,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> RemainderEstimate:
    """Non-uniform remainder estimate in the A-coefficients.

    hat-K - i hat-L ~ e^{-r^2}/(sqrt(2 pi) cos theta)
    sum_k e^{i m phi} A_2k(phi, alpha) / r^{2k+1}. Refused within
    THETA_COLLAR_OVER_PI of the Stokes line, where cos theta sends the
    prefactor through a pole; a warning marks the band where accuracy decays.
    """
    mctx = ctx.mp(extra=GUARD_DIGITS)
    theta = mctx.convert(arg.theta)
    slack = mctx.mpf(10) ** (-12)
    limit = mctx.pi * (mctx.mpf(1) / 2 - mctx.mpf(THETA_COLLAR_OVER_PI))
    if theta > limit + slack:
        raise DomainError(
            "theta = %s is inside the Stokes collar; the non-uniform estimate "
            "diverges there, use theorem2" % (theta,)
        )
    _check_k_terms(k_terms, small_phi=False)
    if theta > mctx.pi * mctx.mpf(STOKES_WARN_OVER_PI):
        warnings.warn(
            "theta is close to the Stokes line; the non-uniform estimate is "
            "degrading, prefer theorem2",
            StokesCollarWarning,
            stacklevel=2,
        )
    phi = mctx.convert(arg.phi)
    r = mctx.convert(arg.r)
    alpha = plan.m + mctx.mpf(1) / 2 - r * r
    rot = mctx.expj(plan.m * phi)
    pref = _exp_prefactor(mctx, arg) / mctx.cos(theta)
    total = mctx.mpc(0)
    rpow = 1 / r
    last = mctx.mpf(0)
    for k in range(k_terms):
        term = rot * A2k(phi, alpha, k, ctx) * rpow
        total += term
        last = abs(term)
        rpow /= r * r
    omitted = abs(A2k(phi, alpha, k_terms, ctx)) * rpow if k_terms < MAX_K_TERMS else last / (r * r)
    out = ctx.mp()
    return RemainderEstimate(
        Khat=out.mpf((pref * total).real),
        Lhat=out.mpf(-(pref * total).imag),
        k_used=k_terms,
        method="eq41",
        err_estimate=out.mpf(EST_SAFETY * abs(pref) * omitted),
    )


def theorem2(
    arg: VoigtArgument, plan: TruncationPlan, k_terms: int = 3,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> RemainderEstimate:
    """Uniform remainder estimate in the B^-coefficients, valid through the
    Stokes line.

    hat-K - i hat-L ~ e^{-r^2}/sqrt(2 pi) { e^{i r^2 phi} E(phi)
    + sum_k e^{i m phi} B^_2k(phi, alpha) / r^{2k+1} }, with the error
    function inside E(phi) carrying the smoothed Stokes jump.
    """
    mctx = ctx.mp(extra=GUARD_DIGITS)
    phi = mctx.convert(arg.phi)
    r = mctx.convert(arg.r)
    _check_k_terms(k_terms, small_phi=phi < PHI_SWITCH)
    alpha = plan.m + mctx.mpf(1) / 2 - r * r
    E = E_of_phi(phi, r, ctx)
    # e^{i (m + 1/2 - alpha) phi} = e^{i r^2 phi}
    head = mctx.expj((plan.m + mctx.mpf(1) / 2 - alpha) * phi) * E
    rot = mctx.expj(plan.m * phi)
    total = mctx.mpc(head)
    rpow = 1 / r
    last = mctx.mpf(0)
    for k in range(k_terms):
        term = rot * Bhat2k(phi, alpha, k, ctx) * rpow
        total += term
        last = abs(term)
        rpow /= r * r
    try:
        omitted = abs(Bhat2k(phi, alpha, k_terms, ctx)) * rpow
    except UnsupportedOrderError:
        omitted = last / (r * r)
    pref = _exp_prefactor(mctx, arg)
    out = ctx.mp()
    return RemainderEstimate(
        Khat=out.mpf((pref * total).real),
        Lhat=out.mpf(-(pref * total).imag),
        k_used=k_terms,
        method="eq42",
        err_estimate=out.mpf(EST_SAFETY * pref * omitted),
    )


def leading_remainder(
    arg: VoigtArgument, plan: TruncationPlan, regime: str = "away",
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> RemainderEstimate:
    """Leading-order remainder in closed trigonometric form.

    regime="away" (theta below the Stokes collar):
    hat-K, hat-L ~ (-1)^m e^{-r^2}/(sqrt(2 pi) y) {cos, sin}(2 m theta).
    regime="near" (phi < NEAR_PHI_MAX): the uniform head e^{i r^2 phi}
    E(phi) plus the first correction linearized in phi.
    """
    mctx = ctx.mp(extra=GUARD_DIGITS)
    theta = mctx.convert(arg.theta)
    r = mctx.convert(arg.r)
    out = ctx.mp()
    sgn = -1 if plan.m % 2 else 1
    if regime == "away":
        slack = mctx.mpf(10) ** (-12)
        limit = mctx.pi * (mctx.mpf(1) / 2 - mctx.mpf(THETA_COLLAR_OVER_PI))
        if theta > limit + slack:
            raise DomainError(
                "theta = %s is inside the Stokes collar; use regime=\"near\"" % (theta,)
            )
        pref = sgn * _exp_prefactor(mctx, arg) / mctx.convert(arg.y)
        est_next = abs(pref) * mctx.mpf(3) / (2 * r * r)  # next term is O(A_2/r^2)
        return RemainderEstimate(
            Khat=out.mpf(pref * mctx.cos(2 * plan.m * theta)),
            Lhat=out.mpf(pref * mctx.sin(2 * plan.m * theta)),
            k_used=1,
            method="leading-away",
            err_estimate=out.mpf(est_next),
        )
    if regime != "near":
        raise DomainError("unknown leading-remainder regime %r" % (regime,))
    phi = mctx.convert(arg.phi)
    if phi >= NEAR_PHI_MAX:
        raise DomainError(
            "phi = %s is too far from the Stokes line for the linearized "
            "near form; use regime=\"away\" or theorem2" % (phi,)
        )
    alpha = plan.m + mctx.mpf(1) / 2 - r * r
    E = E_of_phi(phi, r, ctx)
    head = mctx.expj((plan.m + mctx.mpf(1) / 2 - alpha) * phi) * E
    a43 = mctx.mpf(4) / 3 - 2 * alpha
    poly = mctx.mpf(1) / 2 - 4 * alpha / 3 + alpha * alpha
    smphi = mctx.sin(plan.m * phi)
    cmphi = mctx.cos(plan.m * phi)
    pref = _exp_prefactor(mctx, arg)
    Khat = pref * (head.real + (a43 * smphi + poly * phi * cmphi) / r)
    Lhat = pref * (-head.imag + (a43 * cmphi - poly * phi * smphi) / r)
    est_next = abs(pref) * (phi * phi + 1 / (r * r))
    return RemainderEstimate(
        Khat=out.mpf(Khat), Lhat=out.mpf(Lhat), k_used=1,
        method="leading-near", err_estimate=out.mpf(est_next),
    )


def hat_expansion(
    arg: VoigtArgument,
    plan: TruncationPlan,
    variant: str = "eq42",
    k_terms: int = 3,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> RemainderEstimate:
    """Dispatch to the requested remainder estimate by variant name."""
    if variant == "eq41":
        return theorem1(arg, plan, k_terms, ctx)
    if variant == "eq42":
        return theorem2(arg, plan, k_terms, ctx)
    if variant == "leading-away":
        return leading_remainder(arg, plan, "away", ctx)
    if variant == "leading-near":
        return leading_remainder(arg, plan, "near", ctx)
    raise DomainError("unknown expansion variant %r" % (variant,))


def evaluate_via_expansion(
    arg: VoigtArgument,
    variant: str = "eq42",
    k_terms: int = 3,
    m: int = None,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> Evaluation:
    """Full (K, L) as algebraic partial sums plus the estimated remainder.

    The workhorse behind the CLI expansion methods: cut at m (optimal when
    not given), sum the algebraic terms exactly, and add the asymptotic
    remainder estimate of the requested variant.
    """
    plan = optimal_truncation(arg.r, ctx) if m is None else TruncationPlan.for_m(m, arg.r, ctx)
    sums = algebraic_partial_sums(arg, plan.m, ctx)
    est = hat_expansion(arg, plan, variant, k_terms, ctx)
    out = ctx.mp()
    return Evaluation(
        K=out.mpf(sums.K + est.Khat),
        L=out.mpf(sums.L + est.Lhat),
        method=variant,
        err_estimate=out.mpf((sums.err_estimate or 0) + (est.err_estimate or 0)),
    )
