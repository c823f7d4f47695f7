r"""Short-time heat-trace expansion of a cone :math:`(0, \varepsilon) \times N`.

.. math::

    \operatorname{tr} e^{-t\Delta} \sim (4\pi t)^{-m/2} \sum_j \tilde a_j t^j + b + c \log t

The regularized interior coefficients :math:`\tilde a_j` come from the local
heat invariants of the cone, ``c`` from residues of the shifted zeta function
of the cross-section, and the nonlocal constant ``b`` is computed twice: from
a closed residue formula (:func:`b_formula`) and from a regularized sum over
Bessel orders (:func:`b_direct`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .conegeom import cone_u_hat
from .cross_section import ModelCrossSection, heat_coefficients, nu_of, spectrum
from .errors import (CutoffTooSmall, DomainError, NumericFailure, Unsupported,
                     UnsupportedPoleOrder)
from .laurent import LaurentValue
from .regint import finite_part_power
from .specfun import (bernoulli, bessel_ik_product_deriv, digamma, gamma, GammaGerm, gamma_germ,
                      log_gamma, rgamma_germ)
from .zeta import ZetaContext, zeta_laurent, zeta_residue_formula

__all__ = [
    "AsymptoticTerm",
    "HeatTraceExpansion",
    "BDiscrepancyWarning",
    "gamma_ratio_asymptotic",
    "mellin_bessel_value",
    "b_formula",
    "b_direct",
    "c_coefficient",
    "c_direct",
    "a_tilde_cone",
    "resolvent_to_heat",
    "local_resolvent_expansion",
    "trace_resolvent_fiber",
    "FiberTrace",
    "assemble_expansion",
]


class BDiscrepancyWarning(UserWarning):
    """The two evaluations of the constant term disagree."""


@dataclass(frozen=True)
class AsymptoticTerm:
    """``amplitude * z**(-2*power) [* log z]`` (resolvent side) or
    ``amplitude * t**power [* log t]`` (heat side)."""

    amplitude: object
    power: object
    has_log: bool = False

    def __post_init__(self):
        try:
            finite = math.isfinite(float(self.amplitude))
        except TypeError:  # symbolic amplitude
            finite = True
        if not finite:
            raise DomainError("amplitude must be finite")


# --------------------------------------------------------------------------
# Gamma ratio and the Mellin closed form

def gamma_ratio_asymptotic(nu: float, s: float, J: int) -> float:
    r"""Large-``nu`` approximation of :math:`\Gamma(\nu - s + 1)/\Gamma(\nu + s)`.

    .. math::

        \nu^{1-2s}\Bigl(1 + s\sum_{j=1}^{J} \frac{B_{2j}}{j\,\nu^{2j}}\Bigr)

    exact at ``s = 0`` and accurate to first order in ``s``.
    """
    if not nu > 0:
        raise DomainError("nu must be positive")
    if J < 0:
        raise DomainError("J must be >= 0")
    corr = math.fsum(float(bernoulli(2 * j)) / (j * nu ** (2 * j)) for j in range(1, J + 1))
    return nu ** (1 - 2 * s) * (1 + s * corr)


def mellin_bessel_value(nu: float, d: int, p: float) -> LaurentValue:
    r"""Closed form of :math:`\int_0^\infty \zeta^p \bigl(-\tfrac{1}{2\zeta}\partial_\zeta\bigr)^{d-1} I_\nu K_\nu\,d\zeta`.

    .. math::

        \frac{\Gamma(\nu - d + \frac{p+3}{2})\,\Gamma(d - 1 - \frac p2)\,
        \Gamma(\frac{p+1}{2})}{4\sqrt\pi\,\Gamma(d + 1 + \nu - \frac{p+3}{2})}

    The result is returned as Laurent data in ``l`` with ``p = 2l + 2d - 3``,
    i.e. :math:`\Gamma(\nu+l)\Gamma(\tfrac12-l)\Gamma(l+d-1)/(4\sqrt\pi\,\Gamma(\nu+1-l))`.
    The integral converges for ``max(-1, 2d - 2nu - 3) < p < 2d - 2``;
    elsewhere this is the meromorphic continuation.

    Raises
    ------
    UnsupportedPoleOrder
        At a pole of order two or more.
    """
    if not nu >= 0 or d < 1:
        raise DomainError("need nu >= 0 and d >= 1")
    l0 = (p - 2 * d + 3) / 2
    x1, x2 = nu + l0, nu + 1 - l0
    if x1 > 0 and x2 > 0:
        # ratio in log space: the two factors overflow separately for large nu
        (lg1, s1), (lg2, s2) = log_gamma(x1), log_gamma(x2)
        ratio = s1 * s2 * math.exp(lg1 - lg2)
        ratio_germ = GammaGerm(0, ratio, ratio * (digamma(x1) + digamma(x2)))
    else:
        ratio_germ = gamma_germ(x1) * rgamma_germ(x2, -1)
    germ = ratio_germ * gamma_germ(0.5 - l0, -1) * gamma_germ(l0 + d - 1)
    scale = 1.0 / (4.0 * math.sqrt(math.pi))
    if germ.order <= -2:
        raise UnsupportedPoleOrder(f"pole of order {-germ.order} at l={l0}")
    if germ.order == -1:
        return LaurentValue(l0, scale * germ.c0, scale * germ.c1)
    if germ.order == 0:
        return LaurentValue.regular(l0, scale * germ.c0)
    return LaurentValue.regular(l0, 0.0)


# --------------------------------------------------------------------------
# resolvent <-> heat

def _is_symbolic(*xs) -> bool:
    return any(type(x).__module__.startswith("sympy") for x in xs)


def resolvent_to_heat(term: AsymptoticTerm, d: int) -> list[AsymptoticTerm]:
    r"""Heat-side terms produced by a resolvent term :math:`C z^{-2a}[\log z]`.

    With :math:`e^{-t\Delta} = -t^{1-d}\frac{(d-1)!}{2\pi i}\int e^{-t\mu}(\Delta-\mu)^{-d}d\mu`
    and :math:`z^2 = -\mu`,

    * :math:`C z^{-2a} \mapsto C\frac{(d-1)!}{\Gamma(a)} t^{a-d}`,
    * :math:`C z^{-2a}\log z \mapsto -\frac C2\frac{(d-1)!}{\Gamma(a)} t^{a-d}\log t
      + \frac C2 \frac{(d-1)!\,\psi(a)}{\Gamma(a)} t^{a-d}`.

    Symbolic (sympy) amplitudes or powers are handled exactly.
    """
    C, a = term.amplitude, term.power
    if _is_symbolic(C, a):
        import sympy
        if not bool(sympy.sympify(a) > 0):
            raise DomainError("power a must be positive")
        fac = sympy.factorial(d - 1) / sympy.gamma(a)
        if not term.has_log:
            return [AsymptoticTerm(sympy.simplify(C * fac), a - d, False)]
        return [AsymptoticTerm(sympy.simplify(-C / 2 * fac), a - d, True),
                AsymptoticTerm(sympy.simplify(C / 2 * fac * sympy.polygamma(0, a)), a - d, False)]
    if not a > 0:
        raise DomainError("power a must be positive")
    lg, sg = log_gamma(a)
    fac = math.factorial(d - 1) * sg * math.exp(-lg)
    if not term.has_log:
        return [AsymptoticTerm(C * fac, a - d, False)]
    return [AsymptoticTerm(-C / 2 * fac, a - d, True),
            AsymptoticTerm(C / 2 * fac * digamma(a), a - d, False)]


def local_resolvent_expansion(u: list, m: int, d: int) -> list[AsymptoticTerm]:
    r"""Diagonal resolvent expansion :math:`\sum_j (4\pi)^{-m/2}\frac{\Gamma(d-m/2+j)}{\Gamma(d)} u_j z^{-2(d-m/2+j)}`.

    Exact when ``u`` holds sympy numbers.
    """
    if not d > m / 2:
        raise DomainError("need d > m/2")
    if _is_symbolic(*u):
        import sympy
        half_m = sympy.Rational(m, 2)
        return [AsymptoticTerm((4 * sympy.pi) ** (-half_m) * sympy.gamma(d - half_m + j)
                               / sympy.gamma(d) * uj, d - half_m + j)
                for j, uj in enumerate(u)]
    return [AsymptoticTerm((4 * math.pi) ** (-m / 2) * math.gamma(d - m / 2 + j)
                           / math.gamma(d) * uj, d - m / 2 + j)
            for j, uj in enumerate(u)]


# --------------------------------------------------------------------------
# constant term b

def _check_dims(model: ModelCrossSection, m: int) -> None:
    if m != model.n + 1:
        raise DomainError(f"m={m} inconsistent with dim N={model.n} (need m = n + 1)")


def _cone_zeta(model: ModelCrossSection) -> ZetaContext:
    return ZetaContext(model, (model.n - 1) / 2)


@lru_cache(maxsize=256)
def _zeta_at(model: ModelCrossSection, s0: float) -> LaurentValue:
    return zeta_laurent(_cone_zeta(model), s0)


def _residue_crosscheck(model: ModelCrossSection, s0: float, res1: float) -> None:
    """Compare a continued residue with the closed residue formula."""
    n = model.n
    l = n / 2 - s0
    if l != math.floor(l) or l < 0:
        expected = 0.0
    else:
        try:
            expected = zeta_residue_formula(_cone_zeta(model), int(l))
        except Unsupported:
            return
    if abs(expected - res1) > 1e-6 * max(1.0, abs(expected)):
        raise NumericFailure(f"residue at s={s0}: continuation {res1} vs formula {expected}")


def _sum_upper(m: int) -> int:
    return m // 2


def b_formula(model: ModelCrossSection, m: int) -> float:
    r"""Constant term from the closed residue formula.

    .. math::

        b = -\tfrac12 \operatorname{Res}_0\zeta(-\tfrac12)
            + \frac{\Gamma'(-\frac12)}{4\sqrt\pi}\operatorname{Res}_1\zeta(-\tfrac12)
            - \tfrac14 \sum_{1 \le j \le m/2} \frac{B_{2j}}{j}\operatorname{Res}_1\zeta(j - \tfrac12)

    with :math:`\zeta = \zeta^{(n-1)/2}_N`.  Modes with
    :math:`\lambda + ((n-1)/2)^2 = 0` are excluded from the zeta function and
    their own Mellin contribution at ``l = 1`` is added back.
    """
    _check_dims(model, m)
    z = _zeta_at(model, -0.5)
    _residue_crosscheck(model, -0.5, z.res1)
    # Gamma'(-1/2) / (4 sqrt(pi)) = -psi(-1/2) / 2
    terms = [-0.5 * z.res0, -0.5 * digamma(-0.5) * z.res1]
    for j in range(1, _sum_upper(m) + 1):
        zj = _zeta_at(model, j - 0.5)
        _residue_crosscheck(model, j - 0.5, zj.res1)
        terms.append(-0.25 * float(bernoulli(2 * j)) / j * zj.res1)
    zero = _cone_zeta(model).zero_modes
    if zero:
        d = m // 2 + 1
        zm = mellin_bessel_value(0.0, d, 2 * d - 1)
        terms.append(zero * zm.res0 / math.factorial(d - 1))
    return math.fsum(terms)


@dataclass(frozen=True)
class _DirectParts:
    laurent: LaurentValue      # nu-sum in the variable l, at l = 1
    b: float
    c: float
    nu_split: float
    head_modes: int


def _nu_sum_laurent(model: ModelCrossSection, d: int, nu_split: float, J: int) -> tuple[LaurentValue, int]:
    r"""Laurent data at ``l = 1`` of :math:`\sum_\nu \mathrm{mult}\,M_\nu(l)/(d-1)!`.

    Modes with ``nu <= nu_split`` use the exact Mellin value; the rest use
    the asymptotic Gamma ratio and shifted-zeta continuation.
    """
    n = model.n
    lam_split = max(nu_split**2 - (n - 1) ** 2 / 4, 0.0)
    sl = spectrum(model, lam_split)
    nus = np.array([nu_of(lam, n) for lam in sl.eigenvalues])
    mults = sl.multiplicities
    keep = nus <= nu_split
    nus, mults = nus[keep], mults[keep]
    fact = math.factorial(d - 1)

    head = [mellin_bessel_value(float(nu), d, 2 * d - 1) for nu in nus]
    if any(h.res1 for h in head):
        raise NumericFailure("unexpected pole in a single-mode Mellin value")
    head_res0 = math.fsum(int(k) * h.res0 for k, h in zip(mults, head)) / fact

    # F(l) = Gamma(1/2 - l) Gamma(l + d - 1) / (4 sqrt(pi) (d-1)!), Taylor at l = 1
    F1 = gamma(-0.5) * gamma(d) / (4 * math.sqrt(math.pi) * fact)
    dF1 = F1 * (digamma(d) - digamma(-0.5))
    pos = nus > 0
    head_pow = lambda e: math.fsum(mults[pos] * nus[pos] ** e)

    # tail: sum nu^{2l-1} (1 + (1-l) A_J(nu)) over nu > nu_split, with l = 1 + delta
    z = _zeta_at(model, -0.5)               # sum nu^{-2s}, s = 1/2 - l = -1/2 - delta
    tail_res1 = -z.res1                     # residue in delta
    tail_res0 = z.res0 - head_pow(1.0)
    for j in range(1, J + 1):
        zj = _zeta_at(model, j - 0.5)       # (1-l) zeta(j - 1/2 - delta) = -delta * zeta
        tail_res0 += float(bernoulli(2 * j)) / j * zj.res1
    res1 = F1 * tail_res1
    res0 = head_res0 + F1 * tail_res0 + dF1 * tail_res1
    return LaurentValue(1.0, res1, res0), int(mults.sum())


def _direct_parts(model: ModelCrossSection, m: int, d: int, nu_split: float, J: int) -> _DirectParts:
    lv, count = _nu_sum_laurent(model, d, nu_split, J)
    # a pole rho/(l - 1) of the Mellin transform is the resolvent term -2 rho z^{-2d} log z
    terms = [AsymptoticTerm(lv.res0, d, False), AsymptoticTerm(-2.0 * lv.res1, d, True)]
    heat = [h for t in terms for h in resolvent_to_heat(t, d)]
    b = math.fsum(h.amplitude for h in heat if h.power == 0 and not h.has_log)
    c = math.fsum(h.amplitude for h in heat if h.power == 0 and h.has_log)
    return _DirectParts(lv, b, c, nu_split, count)


def _default_nu_split(model: ModelCrossSection, min_modes: int = 50) -> float:
    lam = 16.0
    while True:
        sl = spectrum(model, lam)
        if len(sl) >= min_modes:
            return nu_of(float(sl.eigenvalues[-1]), model.n)
        lam *= 2


def b_direct(model: ModelCrossSection, m: int, d: int | None = None,
             cutoff: float | None = None, J: int | None = None,
             tol: float = 1e-6) -> float:
    r"""Constant term from the regularized sum over Bessel orders.

    The Mellin transform of the fiber resolvent trace is
    :math:`\sum_\nu \mathrm{mult}\,M_\nu(l)/(d-1)!` with :math:`M_\nu` from
    :func:`mellin_bessel_value`.  Orders up to :math:`\nu_{split}` are summed
    exactly; beyond it the Gamma ratio is replaced by
    :func:`gamma_ratio_asymptotic` and each power sum is continued through the
    shifted zeta function.  The Laurent data at ``l = 1`` is converted to the
    heat side with :func:`resolvent_to_heat`, which supplies the
    :math:`\psi(d)` counterterm, so the result does not depend on ``d``.

    Parameters
    ----------
    d : int, optional
        Resolvent power, ``d > m/2``; default ``m // 2 + 1``.
    cutoff : float, optional
        Eigenvalue cutoff of N defining :math:`\nu_{split}`; by default the
        smallest cutoff holding 50 distinct eigenvalues.
    J : int, optional
        Order of the Gamma-ratio series, default ``m // 2 + 1``.
    tol : float
        Required agreement between :math:`\nu_{split}` and half of it.

    Raises
    ------
    CutoffTooSmall
        If fewer than 50 modes lie below the cutoff or the two splits disagree.
    """
    _check_dims(model, m)
    d = m // 2 + 1 if d is None else int(d)
    if not d > m / 2:
        raise DomainError(f"need d > m/2 = {m / 2}")
    J = m // 2 + 1 if J is None else int(J)
    if J < m // 2:
        raise DomainError("J must cover every pole of the shifted zeta function")
    if cutoff is None:
        nu_split = _default_nu_split(model)
    else:
        sl = spectrum(model, cutoff)
        if len(sl) < 50:
            raise CutoffTooSmall(f"only {len(sl)} distinct eigenvalues below {cutoff}")
        nu_split = nu_of(float(sl.eigenvalues[-1]), model.n)
    full = _direct_parts(model, m, d, nu_split, J)
    half = _direct_parts(model, m, d, nu_split / 2, J)
    if abs(full.b - half.b) > tol:
        raise CutoffTooSmall(f"b_direct changes by {abs(full.b - half.b):.3g} between "
                             "nu_split and nu_split/2")
    return full.b


def c_direct(model: ModelCrossSection, m: int, d: int | None = None) -> float:
    """Log coefficient read off the same Laurent data as :func:`b_direct`."""
    _check_dims(model, m)
    d = m // 2 + 1 if d is None else int(d)
    return _direct_parts(model, m, d, _default_nu_split(model), m // 2 + 1).c


# --------------------------------------------------------------------------
# log coefficient and interior coefficients

def c_coefficient(model: ModelCrossSection, m: int) -> float:
    r"""Coefficient of :math:`\log t`.

    Zero for odd ``m``; for even ``m``

    .. math::

        c = \frac{1}{2(4\pi)^{m/2}} \sum_{k=0}^{m/2} (-1)^{k+1}
            \frac{(m-2)^{2k}}{4^k k!} a^N_{m/2-k}
          = \tfrac12 \operatorname{Res}_1 \zeta^{(m-2)/2}_N(-\tfrac12).

    Both forms are evaluated and must agree to ``1e-10``.
    """
    _check_dims(model, m)
    if m % 2:
        return 0.0
    half = m // 2
    a = heat_coefficients(model, half)
    total = math.fsum((-1) ** (k + 1) * (m - 2) ** (2 * k) / (4**k * math.factorial(k))
                      * a[half - k] for k in range(half + 1))
    c = total / (2 * (4 * math.pi) ** half)
    other = 0.5 * zeta_residue_formula(_cone_zeta(model), half)
    if abs(c - other) > 1e-10 * max(1.0, abs(c)):
        raise NumericFailure(f"log coefficient forms disagree: {c} vs {other}")
    return c


def a_tilde_cone(model: ModelCrossSection, m: int, j: int, eps: float) -> tuple[float, bool]:
    r"""Regularized :math:`\tilde a_j` of the truncated cone :math:`(0,\varepsilon)\times N`.

    :math:`\bigl(\int_N \hat u_j\bigr)\,⨏_0^\varepsilon r^{m-1-2j}\,dr`, flagged as
    regularized when ``m - 1 - 2j <= -1``.
    """
    _check_dims(model, m)
    if not 0 <= j <= 2:
        raise Unsupported("cone coefficients are provided for j <= 2 only")
    u = cone_u_hat(model, j)
    power = m - 1 - 2 * j
    regularized = power <= -1
    if u == 0.0:
        return 0.0, regularized
    return model.vol * u * finite_part_power(power, eps), regularized


# --------------------------------------------------------------------------
# fiber trace of the resolvent power

@dataclass(frozen=True)
class FiberTrace:
    value: float
    tail: float
    modes: int


def trace_resolvent_fiber(model: ModelCrossSection, m: int, r: float, z: float, d: int,
                          cutoff: float, rtol: float = 1e-2) -> FiberTrace:
    r""":math:`\sigma(r, rz) = \frac{r^{2d-1}}{(d-1)!}\bigl(-\tfrac{1}{2x}\partial_x\bigr)^{d-1}
    \sum_\nu \mathrm{mult}\, I_\nu(x) K_\nu(x)\big|_{x = rz}`.

    Modes of N up to ``cutoff`` are summed; the remainder is estimated from
    the uniform leading term :math:`\tfrac12(\tfrac12)_{d-1}(\nu^2 + x^2)^{1/2-d}`
    integrated against the Weyl law, added to ``value`` and reported as ``tail``.

    Raises
    ------
    CutoffTooSmall
        If the tail estimate exceeds ``rtol`` of the value.
    """
    _check_dims(model, m)
    if not d > m / 2:
        raise DomainError("need d > m/2")
    if not (r > 0 and z > 0):
        raise DomainError("r and z must be positive")
    from scipy import integrate  # local: only used for the tail estimate
    from .cross_section import weyl_constant

    x = r * z
    n = model.n
    sl = spectrum(model, cutoff)
    vals = [int(k) * bessel_ik_product_deriv(nu_of(lam, n), x, d)
            for lam, k in zip(sl.eigenvalues, sl.multiplicities)]
    head = math.fsum(vals)
    poch = math.gamma(0.5 + d - 1) / math.gamma(0.5)
    C = weyl_constant(model)
    h2 = (n - 1) ** 2 / 4
    lam0 = float(cutoff)
    # lambda = lam0 / v**2 turns the tail into a bounded integrand on (0, 1]
    def dens(v):
        lam = lam0 / (v * v)
        return (C * n / 2 * lam ** (n / 2 - 1) * 0.5 * poch * (lam + h2 + x * x) ** (0.5 - d)
                * 2.0 * lam0 / v**3)
    tail, _ = integrate.quad(dens, 0.0, 1.0, epsrel=1e-8)
    total = head + tail
    if abs(tail) > rtol * abs(total):
        raise CutoffTooSmall(f"fiber trace tail {tail:.3g} exceeds {rtol} of {total:.3g}")
    scale = r ** (2 * d - 1) / math.factorial(d - 1)
    return FiberTrace(scale * total, scale * tail, int(sl.count()))


# --------------------------------------------------------------------------
# assembly

@dataclass
class HeatTraceExpansion:
    """Assembled coefficients of the cone heat-trace expansion.

    ``a_tilde`` holds ``(j, value, regularized)`` for ``j <= 2``; higher
    orders are listed in ``gaps``.
    """

    m: int
    epsilon: float
    a_tilde: list[tuple[int, float, bool]]
    b_formula: float
    c: float
    b_direct: float | None = None
    provenance: dict = field(default_factory=dict)
    warnings: list[dict] = field(default_factory=list)
    gaps: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "epsilon": self.epsilon,
            "a_tilde": [{"j": j, "value": v, "regularized": reg} for j, v, reg in self.a_tilde],
            "b_formula": self.b_formula,
            "b_direct": self.b_direct,
            "c": self.c,
            "gaps": list(self.gaps),
            "warnings": list(self.warnings),
            "provenance": self.provenance,
        }


def assemble_expansion(model: ModelCrossSection, m: int, eps: float,
                       with_direct: bool = True, b_tol: float = 1e-6) -> HeatTraceExpansion:
    """Populate every coefficient of the expansion for the cone over ``model``.

    A disagreement between :func:`b_formula` and :func:`b_direct` above
    ``b_tol`` is recorded in ``warnings`` and emitted as a
    :class:`BDiscrepancyWarning`; both values are kept.
    """
    _check_dims(model, m)
    if not eps > 0:
        raise DomainError("epsilon must be positive")
    a_t = [(j, *a_tilde_cone(model, m, j, eps)) for j in range(3)]
    c = c_coefficient(model, m)
    out = HeatTraceExpansion(m, float(eps), a_t, b_formula(model, m), c)
    if m % 2 == 0 and m // 2 <= 2:
        j = m // 2
        if c == 0.0:
            # no log contribution from the tip: the coefficient is an honest integral
            out.a_tilde[j] = (j, out.a_tilde[j][1], False)
            out.provenance["log_free_coefficient"] = j
    out.gaps = [f"a_tilde[{j}] needs local invariants u_{j}" for j in range(3, m // 2 + 1)]
    d = m // 2 + 1
    out.provenance.update({
        "model": model.describe(),
        "d": d,
        "zeta_shift": (model.n - 1) / 2,
        "zero_modes_excluded": _cone_zeta(model).zero_modes,
        "j_sum_upper": _sum_upper(m),
    })
    if with_direct:
        nu_split = _default_nu_split(model)
        out.b_direct = b_direct(model, m, d)
        out.provenance.update({"nu_split": nu_split, "gamma_ratio_order": m // 2 + 1})
        delta = out.b_direct - out.b_formula
        if abs(delta) > b_tol:
            info = {"kind": "b_discrepancy", "b_formula": out.b_formula,
                    "b_direct": out.b_direct, "delta": delta, "tol": b_tol}
            out.warnings.append(info)
            warnings.warn(f"b_formula and b_direct differ by {delta:.6g}",
                          BDiscrepancyWarning, stacklevel=2)
    return out
