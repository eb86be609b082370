"""Precision-configurable arithmetic and the gamma/erfc/quadrature primitives.

Everything downstream (oracles, coefficients, expansions) runs on the
primitives defined here. The precision model is a software extended-precision
layer with a configurable number of decimal digits, defaulting to 40: the
exponentially small remainders studied by this library sit at magnitudes like
e^{-36} ~ 2e-16, and the identity tests at |w| = 6 lose roughly
2|w|^2 log10(e) ~ 31 digits to cancellation, so IEEE doubles are not even in
the running.

mpmath supplies the underlying arbitrary-precision arithmetic. Each precision
gets its own ``MPContext`` instance rather than touching mpmath's global
context; instances are created once, cached per decimal-digit count, and
never mutated afterwards, which keeps every operation in this package a pure
function of its inputs and safe for unrestricted concurrent use.

Branch conventions: principal branch for sqrt and log everywhere. All square
roots of complex quantities below are principal (argument in (-pi, pi]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

from mpmath.ctx_mp import MPContext

from .exceptions import DomainError, PrecisionError, QuadratureError

# Extra working digits carried by every operation so that results are
# correctly rounded at the advertised precision.
GUARD_DIGITS = 5

# Downward incomplete-gamma recurrence: hard cap on the number of steps.
GAMMA_RECURRENCE_CAP = 200


@lru_cache(maxsize=None)
def mp_context(dps: int) -> MPContext:
    """A shared mpmath context at ``dps`` decimal digits.

    Treated as immutable after creation; do not assign to ``.dps`` on the
    returned object.
    """
    ctx = MPContext()
    ctx.dps = dps
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Requested precision for a computation.

    ``digits`` is the number of decimal significant digits results are good
    to; ``quad_tol`` is the absolute tolerance quadratures are driven to,
    defaulting to 10^(6-digits). Operations run internally with guard digits
    (and, where a formula cancels, with explicitly widened precision) so that
    well-conditioned results carry relative error at most 10^(1-digits).
    """

    digits: int = 40
    quad_tol: float | None = None

    def __post_init__(self):
        if self.digits < 16:
            raise DomainError("digits must be at least 16, got %r" % (self.digits,))
        if self.quad_tol is None:
            object.__setattr__(self, "quad_tol", 10.0 ** (6 - self.digits))
        elif not self.quad_tol > 0:
            raise DomainError("quad_tol must be positive, got %r" % (self.quad_tol,))

    def mp(self, extra: int = 0):
        """Working mpmath context: guard digits plus ``extra`` widening."""
        return mp_context(self.digits + GUARD_DIGITS + max(0, extra))

    def eps(self, ctx=None):
        """One unit of advertised relative accuracy, 10^(1-digits)."""
        ctx = ctx if ctx is not None else self.mp()
        return ctx.mpf(10) ** (1 - self.digits)


DEFAULT_CONTEXT = PrecisionContext()


@dataclass(frozen=True)
class ComplexValue:
    """Serialization-facing record of a complex quantity.

    Computational routines exchange mpmath ``mpc`` values directly (same two
    components, cheaper to do arithmetic with); this record is the stable
    exchange form used at API boundaries and by the CLI. The polar accessors
    are consistent with the rectangular fields by construction.
    """

    re: object
    im: object

    @classmethod
    def from_complex(cls, z) -> "ComplexValue":
        z = mp_context(DEFAULT_CONTEXT.digits + GUARD_DIGITS).convert(z)
        return cls(re=z.real, im=z.imag)

    def as_mpc(self, ctx=None):
        ctx = ctx if ctx is not None else mp_context(DEFAULT_CONTEXT.digits + GUARD_DIGITS)
        return ctx.mpc(self.re, self.im)

    def modulus(self, ctx=None):
        ctx = ctx if ctx is not None else mp_context(DEFAULT_CONTEXT.digits + GUARD_DIGITS)
        return abs(self.as_mpc(ctx))

    def argument(self, ctx=None):
        ctx = ctx if ctx is not None else mp_context(DEFAULT_CONTEXT.digits + GUARD_DIGITS)
        return ctx.arg(self.as_mpc(ctx))


def to_mpf(ctx, x):
    """Convert a real input to mpf, parsing strings at context precision."""
    if isinstance(x, str):
        return ctx.mpf(x)
    return ctx.convert(x)


def to_mpc(ctx, z):
    """Convert a complex-like input (ComplexValue included) to mpc."""
    if isinstance(z, ComplexValue):
        return z.as_mpc(ctx)
    if isinstance(z, str):
        return ctx.mpc(ctx.mpf(z))
    return ctx.mpc(ctx.convert(z))


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1).

    Exact: the result is a Fraction whenever ``a`` is an int, Fraction, or
    float (floats are dyadic rationals, so half-integers stay exact).
    """
    if k < 0:
        raise DomainError("pochhammer order must be nonnegative, got %r" % (k,))
    a = Fraction(a)
    acc = Fraction(1)
    for j in range(k):
        acc *= a + j
    return acc


def erfc_complex(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Complementary error function of a complex argument, to context
    precision. Satisfies erfc(z) + erfc(-z) = 2 and agrees with the real
    erfc on the real axis."""
    mctx = ctx.mp()
    zz = to_mpc(mctx, z)
    if not (mctx.isfinite(zz.real) and mctx.isfinite(zz.imag)):
        raise DomainError("erfc_complex requires a finite argument")
    try:
        val = mctx.erfc(zz)
    except Exception as exc:  # mpmath failure surfaces as a precision error
        raise PrecisionError("erfc evaluation failed at z=%s: %s" % (zz, exc)) from exc
    if zz.imag == 0:
        val = mctx.mpc(val.real if hasattr(val, "real") else val, 0)
    return mctx.mpc(val)


def erfc_asymptotic(z, n_terms: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Large-|z| expansion of erfc: (e^{-z^2}/sqrt(pi)) sum of
    (-1)^k (1/2)_k z^{-2k-1} over k < n_terms.

    Valid in the sector |arg z| < 3pi/4 with |z| >= 2; outside that the
    expansion does not represent erfc and the call is refused.
    """
    if n_terms < 1:
        raise DomainError("n_terms must be at least 1")
    mctx = ctx.mp()
    zz = to_mpc(mctx, z)
    if abs(zz) < 2:
        raise DomainError("erfc_asymptotic needs |z| >= 2, got |z|=%s" % abs(zz))
    if abs(mctx.arg(zz)) >= 3 * mctx.pi / 4:
        raise DomainError(
            "erfc_asymptotic valid only for |arg z| < 3*pi/4, got arg z=%s" % mctx.arg(zz)
        )
    zinv2 = 1 / (zz * zz)
    term = 1 / zz
    total = mctx.mpc(0)
    for k in range(n_terms):
        if k:
            term *= -(mctx.mpf(2 * k - 1) / 2) * zinv2
        total += term
    return mctx.exp(-zz * zz) / mctx.sqrt(mctx.pi) * total


def _gamma_widening(absz: float, digits: int) -> int:
    # Cancellation rule: the downward recurrence loses about |z| log10(e)
    # digits; provision twice that plus a fixed guard.
    return digits + math.ceil(2 * absz * math.log10(math.e)) + 10


def upper_incomplete_gamma_half_ladder(
    m_max: int, z, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list:
    """All of Gamma(1/2 - m, z) for m = 0..m_max, by one downward sweep.

    Base case Gamma(1/2, z) = sqrt(pi) erfc(sqrt(z)) with the principal
    square root, then Gamma(a-1, z) = (Gamma(a, z) - z^{a-1} e^{-z})/(a-1)
    repeatedly. The sweep runs at precision widened per the cancellation
    rule; an a-posteriori loss check turns silent digit loss into an
    explicit error.
    """
    if m_max < 0:
        raise DomainError("m_max must be nonnegative, got %r" % (m_max,))
    if m_max > GAMMA_RECURRENCE_CAP:
        raise DomainError(
            "recurrence depth %d exceeds the configured cap %d"
            % (m_max, GAMMA_RECURRENCE_CAP)
        )
    probe = to_mpc(ctx.mp(), z)
    if probe == 0:
        raise DomainError("upper_incomplete_gamma_half requires z != 0")
    absz = float(abs(probe))

    effective = _gamma_widening(absz, ctx.digits)
    attained = 0.0
    for attempt in range(2):
        wctx = mp_context(effective)
        ulp = wctx.mpf(10) ** (-effective)
        zz = to_mpc(wctx, z)
        g = wctx.sqrt(wctx.pi) * wctx.erfc(wctx.sqrt(zz))
        emz = wctx.exp(-zz)
        a = wctx.mpf(1) / 2
        za = zz ** (a - 1)  # z^{a-1}, kept in step with a
        ladder = [g]
        # running absolute error bound, to turn cancellation into a number
        err = abs(g) * ulp
        worst = float(wctx.log10(abs(g) / err)) if g != 0 else 0.0
        for _ in range(m_max):
            a -= 1
            sub = za * emz
            err = (err + (abs(g) + abs(sub)) * ulp) / abs(a)
            g = (g - sub) / a
            za = za / zz
            ladder.append(g)
            if g == 0:
                worst = 0.0
                break
            worst = min(worst, float(wctx.log10(abs(g) / err)))
        attained = worst
        if attained >= ctx.digits:
            return ladder
        effective += int(math.ceil(ctx.digits - attained)) + 10
    raise PrecisionError(
        "incomplete-gamma recurrence at m=%d, |z|=%.3g attained only %.0f of "
        "%d requested digits despite widening" % (m_max, absz, attained, ctx.digits),
        attained=attained,
    )


def upper_incomplete_gamma_half(
    m: int, z, ctx: PrecisionContext = DEFAULT_CONTEXT
):
    """Gamma(1/2 - m, z) for nonnegative integer m, principal branch."""
    return upper_incomplete_gamma_half_ladder(m, z, ctx)[m]


class QuadratureResult(NamedTuple):
    value: object
    err_estimate: object


# Error estimates reported by the double-exponential rule are scaled by this
# factor before being compared with quad_tol, so that reported <= actual
# never happens on reasonable integrands.
QUAD_SAFETY = 10


def _round_natural(mctx, value):
    # round to the target context, keeping a real result real
    try:
        return mctx.mpf(value)
    except (TypeError, ValueError):
        return mctx.mpc(value)


def integrate_semi_infinite(
    f: Callable,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    pole_hints: Sequence = (),
    extra_points: Sequence = (),
    quad_tol=None,
    extra_dps: int = 0,
) -> QuadratureResult:
    """Integral of ``f`` over (0, inf) by double-exponential quadrature.

    ``pole_hints`` are complex locations of nearby poles of ``f``; each hint
    with positive real part triggers extra subdivision points bracketing its
    real part at a distance of its imaginary part, which is what tanh-sinh
    panels need to converge geometrically past a nearby singularity.
    ``extra_points`` are additional real split abscissae (saddles, peaks).
    The integrand must decay fast enough at infinity for the transformed
    rule to converge; all integrands in this package decay exponentially.

    Returns the value together with a conservative absolute error estimate.
    If the estimate cannot be driven below ``quad_tol`` (default: the
    context's), raises QuadratureError carrying the best value and the gap.
    """
    tol_ctx = ctx.mp(extra_dps)
    tol = tol_ctx.mpf(ctx.quad_tol if quad_tol is None else quad_tol)

    splits = set()
    for p in pole_hints:
        pc = to_mpc(tol_ctx, p)
        re, im = float(pc.real), abs(float(pc.imag))
        if re <= 0:
            continue
        # only a pole close to the path needs bracketing
        if im < 0.7 * (1.0 + re):
            for s in (re - im, re + im):
                if s > 0:
                    splits.add(s)
            if im == 0.0:
                raise DomainError(
                    "pole hint %s lies on the integration path" % (pc,)
                )
    for s in extra_points:
        sf = float(to_mpf(tol_ctx, s))
        if sf > 0:
            splits.add(sf)

    attempt_dps = ctx.digits + GUARD_DIGITS + max(0, extra_dps)
    best = None
    best_err = None
    maxdegree = None
    for attempt in range(3):
        wctx = mp_context(attempt_dps)
        points = [wctx.mpf(0)]
        points.extend(wctx.mpf(s) for s in sorted(splits))
        points.append(wctx.inf)
        try:
            if maxdegree is None:
                value, raw_err = wctx.quad(f, points, error=True)
            else:
                value, raw_err = wctx.quad(f, points, error=True, maxdegree=maxdegree)
        except Exception as exc:
            raise QuadratureError("quadrature failed: %s" % (exc,)) from exc
        # floor the estimate at roundoff level of the working precision
        floor = abs(value) * wctx.mpf(10) ** (5 - attempt_dps)
        err = QUAD_SAFETY * raw_err + floor
        if best_err is None or err < best_err:
            best, best_err = value, err
        if err <= tol:
            return QuadratureResult(_round_natural(tol_ctx, value), tol_ctx.mpf(err))
        attempt_dps += 10
        maxdegree = 8 + 2 * attempt
    raise QuadratureError(
        "quadrature did not reach tol=%s (best error estimate %s)" % (tol, best_err),
        best=_round_natural(tol_ctx, best),
        gap=tol_ctx.mpf(best_err),
    )
