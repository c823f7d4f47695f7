r"""Shifted spectral zeta function of a cross-section.

.. math::

    \zeta^h_N(s) = \sum_{\lambda + h^2 > 0} (\lambda + h^2)^{-s}

Modes with :math:`\lambda + h^2 = 0` are left out and reported through
:attr:`ZetaContext.zero_modes`.  The meromorphic continuation is obtained from
the Mellin representation of the shifted heat trace
:math:`\Theta(t) = \sum e^{-t(\lambda + h^2)}`: the small-time expansion
built from the heat coefficients is subtracted on :math:`(0, \tau)`, its
Mellin transform is added back in closed form, and the large-time part is an
entire function of ``s``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .cross_section import (ModelCrossSection, available_cutoff, heat_coefficients,
                            spectrum, storage_estimate, weyl_constant)
from .errors import (DomainError, InsufficientSpectrum, QuadratureFailure, Unsupported,
                     ValidationError)
from .laurent import LaurentValue
from .specfun import rgamma_taylor

__all__ = ["LaurentValue", "ZetaContext", "zeta_eval", "zeta_laurent",
           "zeta_residue_formula", "EXCLUDE", "INCLUDE"]

EXCLUDE = "exclude_and_report"
INCLUDE = "include"


@dataclass(frozen=True)
class ZetaContext:
    """Cross-section, shift ``h`` and continuation settings.

    Parameters
    ----------
    model : ModelCrossSection
    h : float
        Shift, ``h >= 0``.
    zero_mode_policy : str
        ``"exclude_and_report"`` (default) or ``"include"``.  Including is only
        meaningful when no mode has ``lambda + h**2 == 0``.
    expansion_order : int
        Number ``K`` of heat-coefficient orders subtracted in the continuation;
        terms ``t**(i + j - n/2)`` with ``i + j <= K - 1`` are used.
    """

    model: ModelCrossSection
    h: float = 0.0
    zero_mode_policy: str = EXCLUDE
    expansion_order: int = 3

    def __post_init__(self):
        if not self.h >= 0:
            raise DomainError("shift h must be >= 0")
        if self.zero_mode_policy not in (EXCLUDE, INCLUDE):
            raise ValidationError(f"unknown zero-mode policy {self.zero_mode_policy!r}")
        if self.expansion_order < 1:
            raise ValidationError("expansion_order must be >= 1")
        if self.zero_mode_policy == INCLUDE and self.zero_modes > 0:
            raise ValidationError("zero modes (lambda + h^2 = 0) must be excluded")

    @property
    def n(self) -> int:
        return self.model.n

    @cached_property
    def zero_modes(self) -> int:
        """Number of excluded modes with ``lambda + h**2 == 0``."""
        if self.h > 0:
            return 0
        sl = spectrum(self.model, min(1.0, available_cutoff(self.model)))
        return int(sl.multiplicities[sl.eigenvalues == 0.0].sum())

    def modes(self, cutoff: float) -> tuple[np.ndarray, np.ndarray]:
        """Shifted eigenvalues ``lambda + h**2 > 0`` up to ``cutoff`` and multiplicities."""
        sl = spectrum(self.model, cutoff)
        mu = sl.eigenvalues + self.h**2
        keep = mu > 0
        return mu[keep], sl.multiplicities[keep].astype(float)

    def expansion_terms(self) -> dict[float, float]:
        r"""Small-time expansion of :math:`\Theta` as ``{exponent: coefficient}``.

        Includes ``-zero_modes * t**0`` for the excluded modes.
        """
        n, K = self.n, self.expansion_order
        try:
            a = heat_coefficients(self.model, K - 1)
        except Unsupported as exc:
            raise Unsupported(f"expansion_order={K} needs heat coefficients up to "
                              f"j={K - 1}: {exc}") from None
        pref = (4 * math.pi) ** (-n / 2)
        terms: dict[float, float] = {}
        h2 = self.h**2
        for j in range(K):
            for i in range(K - j):
                c = pref * a[j] * (-h2) ** i / math.factorial(i)
                alpha = i + j - n / 2
                terms[alpha] = terms.get(alpha, 0.0) + c
        if self.zero_modes:
            terms[0.0] = terms.get(0.0, 0.0) - self.zero_modes
        return terms


# --------------------------------------------------------------------------
# direct summation

def _weyl_terms(model: ModelCrossSection) -> list[tuple[float, float]]:
    r"""Smooth counting function :math:`N_w(\lambda) = \sum w_j \lambda^{e_j}` as ``(w_j, e_j)``.

    Uses every available heat coefficient with ``e_j = n/2 - j >= 0``.
    """
    n = model.n
    try:
        a = heat_coefficients(model, min(2, n // 2))
    except Unsupported:
        return [(weyl_constant(model), n / 2)]
    return [(a[j] / ((4 * math.pi) ** (n / 2) * math.gamma(n / 2 - j + 1)), n / 2 - j)
            for j in range(len(a)) if n / 2 - j >= 0]


def _weyl_tail(terms, h2: float, lam: float, s: float) -> float:
    r""":math:`\int_\Lambda^\infty (\mu + h^2)^{-s}\, dN_w(\mu)`."""
    # substitute mu = lam / u**2 (u in (0, 1]) to map the tail onto a finite range
    def f(u):
        mu = lam / (u * u)
        dens = sum(w * e * mu ** (e - 1) for w, e in terms if e > 0)
        return dens * (mu + h2) ** (-s) * 2 * lam / u**3
    val, _ = integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def _summed(ctx: ZetaContext, s: float, lam: float) -> float:
    h2 = ctx.h**2
    sl = spectrum(ctx.model, lam)
    ev = sl.eigenvalues
    if ev.size >= 2 and lam < available_cutoff(ctx.model):
        # cut midway between the last two distinct eigenvalues, where the
        # counting-function steps straddle the smooth curve
        nxt = spectrum(ctx.model, lam * 1.5 + 1.0).eigenvalues
        above = nxt[nxt > ev[-1]]
        if above.size:
            lam = 0.5 * (ev[-1] + above[0])
    terms = _weyl_terms(ctx.model)
    mu, mult = ctx.modes(lam)
    head = math.fsum(mult * mu ** (-s))
    n_smooth = sum(w * lam**e for w, e in terms)
    return head + _weyl_tail(terms, h2, lam, s) + (n_smooth - sl.count()) * (lam + h2) ** (-s)


MAX_DIRECT_STORAGE = 4_000_000


def zeta_eval(ctx: ZetaContext, s: float, tol: float = 1e-10,
              cutoff: float | None = None) -> float:
    """Direct evaluation for ``s > n/2``.

    The spectrum is summed up to a cutoff ``Lambda`` and the rest is replaced
    by the Weyl-law integral with a Stieltjes correction at ``Lambda``.  The
    error is estimated by repeating the evaluation at ``Lambda / 2``; the
    cutoff grows until the two agree to ``tol``.  With an explicit ``cutoff``
    a single evaluation is returned.

    Raises
    ------
    DomainError
        If ``s <= n/2``.
    InsufficientSpectrum
        If the tolerance cannot be met with the available spectrum or within
        ``MAX_DIRECT_STORAGE`` stored eigenvalues.
    """
    n = ctx.n
    if not s > n / 2:
        raise DomainError(f"direct summation needs s > n/2 = {n / 2}")
    limit = available_cutoff(ctx.model)
    if cutoff is not None:
        return _summed(ctx, s, min(cutoff, limit))
    lam = min(256.0, limit)
    while True:
        cur = _summed(ctx, s, lam)
        err = abs(cur - _summed(ctx, s, lam / 2))
        if err <= tol:
            return cur
        if lam >= limit or storage_estimate(ctx.model, 6 * lam) > MAX_DIRECT_STORAGE:
            raise InsufficientSpectrum(
                f"zeta tail estimate {err:.3g} exceeds tol {tol:.3g} at cutoff {lam:.3g}")
        lam = min(limit, 4 * lam)


# --------------------------------------------------------------------------
# continuation

@dataclass(frozen=True)
class _ThetaData:
    mu: np.ndarray
    mult: np.ndarray

    def __call__(self, t: float) -> float:
        return math.fsum(self.mult * np.exp(-t * self.mu))


def _expansion_value(terms: dict[float, float], t: float) -> float:
    return math.fsum(c * t**a for a, c in terms.items())


def _quad(f, a: float, b: float, max_err: float = 1e-9) -> tuple[float, float]:
    # the remainder carries cancellation noise of order eps * Theta, so the
    # requested tolerance is an aim; only a large error estimate is fatal
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
    if not (math.isfinite(val) and err <= max(max_err, 1e-9 * abs(val))):
        raise QuadratureFailure(f"quadrature error estimate {err:.3g} too large")
    return val, err


def zeta_laurent(ctx: ZetaContext, s0: float, split: float = 1.0,
                 t_small: float = 1e-3) -> LaurentValue:
    r"""Laurent data of the continued :math:`\zeta^h_N` at ``s0``.

    Parameters
    ----------
    ctx : ZetaContext
    s0 : float
        Evaluation point.  Requires ``s0 + K - n/2 > 0`` so that the
        subtracted remainder is integrable at ``t = 0``.
    split : float
        Split point :math:`\tau` between small- and large-time integrals.
    t_small : float
        Below this time the remainder :math:`\Theta - E` is replaced by its
        two leading power terms, fitted at ``t_small`` and ``2 t_small``; the
        spectrum is summed up to ``40 / t_small``.

    Notes
    -----
    With :math:`B(s) = \Gamma(s)\zeta(s)` written as

    .. math::

        \int_0^\tau t^{s-1}(\Theta - E)\,dt
        + \sum_\alpha c_\alpha \frac{\tau^{s+\alpha}}{s+\alpha}
        + \int_\tau^\infty t^{s-1}\Theta\,dt,

    the residue and finite part follow from the Taylor data of
    :math:`1/\Gamma` at ``s0``.
    """
    n, K = ctx.n, ctx.expansion_order
    p = K - n / 2
    if not s0 + p > 0:
        raise Unsupported(f"s0={s0} is outside the continuation range s > {-p} "
                          f"for expansion_order={K}")
    if not (0 < 2 * t_small < split):
        raise DomainError("need 0 < 2*t_small < split")
    terms = ctx.expansion_terms()
    cutoff = 40.0 / t_small
    if cutoff > available_cutoff(ctx.model):
        raise InsufficientSpectrum(f"continuation needs eigenvalues up to {cutoff:.3g}")
    mu, mult = ctx.modes(cutoff)
    theta = _ThetaData(mu, mult)

    def remainder(t):
        return theta(t) - _expansion_value(terms, t)

    # (0, t_small): fitted power model R ~ c1 t^p + c2 t^(p+1)
    r1, r2 = remainder(t_small), remainder(2 * t_small)
    A = np.array([[t_small**p, t_small ** (p + 1)],
                  [(2 * t_small) ** p, (2 * t_small) ** (p + 1)]])
    c1, c2 = np.linalg.solve(A, [r1, r2])
    tiny = (c1 * t_small ** (s0 + p) / (s0 + p)
            + c2 * t_small ** (s0 + p + 1) / (s0 + p + 1))

    # (t_small, split) in the log variable
    def mid_integrand(u):
        t = math.exp(u)
        return t**s0 * remainder(t)
    mid, _ = _quad(mid_integrand, math.log(t_small), math.log(split))

    # (split, infinity): truncate when the integrand is negligible
    mu_min = float(mu.min()) if mu.size else math.inf
    if mu.size:
        t_end = split + (45.0 + math.log(max(mult.sum(), 1.0))) / mu_min
        def big_integrand(u):
            t = math.exp(u)
            return t**s0 * theta(t)
        big, _ = _quad(big_integrand, math.log(split), math.log(t_end))
    else:
        big = 0.0

    res = 0.0
    regular = [tiny, mid, big]
    for alpha, c in terms.items():
        if abs(s0 + alpha) < 1e-12:
            res += c
            regular.append(c * math.log(split))
        else:
            regular.append(c * split ** (s0 + alpha) / (s0 + alpha))
    b0 = math.fsum(regular)
    g0, g1 = rgamma_taylor(s0)
    res1 = g0 * res
    res0 = g0 * b0 + g1 * res
    return LaurentValue(float(s0), float(res1), float(res0))


def zeta_residue_formula(ctx: ZetaContext, l: int) -> float:
    r"""Closed-form residue at ``s = n/2 - l``.

    .. math::

        \operatorname{Res}_1 \zeta^h_N(n/2 - l) = \frac{1}{(4\pi)^{n/2}\Gamma(n/2 - l)}
        \sum_{i=0}^{l} \frac{(-h^2)^i}{i!} a^N_{l-i}

    Exactly zero when ``n/2 - l`` is a non-positive integer.
    """
    if int(l) != l or l < 0:
        raise DomainError("l must be a non-negative integer")
    l = int(l)
    n = ctx.n
    g0, _ = rgamma_taylor(n / 2 - l)
    if g0 == 0.0:
        return 0.0
    a = heat_coefficients(ctx.model, l)
    h2 = ctx.h**2
    total = math.fsum((-h2) ** i / math.factorial(i) * a[l - i] for i in range(l + 1))
    return g0 * total / (4 * math.pi) ** (n / 2)
