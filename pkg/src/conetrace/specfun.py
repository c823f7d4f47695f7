r"""Special-function kernel.

Gamma family, Bernoulli numbers, the product :math:`I_\nu(x) K_\nu(x)` of
modified Bessel functions together with its iterated derivatives
:math:`(-\tfrac{1}{2x}\tfrac{d}{dx})^{d-1}`, and positive zeros of
:math:`J_\nu`.

Scaled Bessel values come from ``scipy.special.ive``/``kve``; whenever those
under- or overflow (large order, small argument) the Debye uniform expansion
is used in logarithmic form, so :math:`e^{\pm x}` and :math:`e^{\pm\nu\eta}`
never materialize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import ConvergenceFailure, DomainError, OutOfRange, PoleArgument

__all__ = [
    "PrecisionConfig",
    "DEFAULT_PRECISION",
    "ordered_sum",
    "log_gamma",
    "gamma",
    "digamma",
    "rgamma_taylor",
    "GammaGerm",
    "gamma_germ",
    "rgamma_germ",
    "bernoulli",
    "log_bessel_ik",
    "bessel_ik_product",
    "bessel_ik_product_deriv",
    "bessel_j_zero",
    "bessel_j_zeros_below",
    "mcmahon_zero",
]

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class PrecisionConfig:
    """Tolerances used by the numerical routines."""

    target_abs_tol: float = 1e-12
    max_series_terms: int = 64
    quadrature_rel_tol: float = 1e-12

    def __post_init__(self):
        if not self.target_abs_tol > 0:
            raise DomainError("target_abs_tol must be positive")
        if self.max_series_terms < 16:
            raise DomainError("max_series_terms must be at least 16")


DEFAULT_PRECISION = PrecisionConfig()


def ordered_sum(values) -> float:
    """Correctly rounded sum of ``values`` (independent of their order)."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def _check_not_pole(x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    if x <= 0 and x == math.floor(x):
        raise PoleArgument(f"Gamma has a pole at {x!r}")


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Negative non-integers go through scipy's implementation of the reflection
    formula.
    """
    _check_not_pole(x)
    return float(special.gammaln(x)), int(special.gammasgn(x))


def gamma(x: float) -> float:
    value, sign = log_gamma(x)
    return sign * math.exp(value)


def digamma(x: float) -> float:
    _check_not_pole(x)
    return float(special.psi(x))


def rgamma_taylor(x: float) -> tuple[float, float]:
    """Value and first derivative of ``1/Gamma`` at ``x`` (entire function)."""
    if x <= 0 and x == math.floor(x):
        k = int(-x)
        return 0.0, float((-1) ** k * math.factorial(k))
    g = float(special.rgamma(x))
    return g, -float(special.psi(x)) * g


@dataclass(frozen=True)
class GammaGerm:
    """``delta**order * (c0 + c1 * delta)``: leading behaviour of a Gamma product."""

    order: int
    c0: float
    c1: float

    def __mul__(self, other: "GammaGerm") -> "GammaGerm":
        return GammaGerm(self.order + other.order, self.c0 * other.c0,
                         self.c0 * other.c1 + self.c1 * other.c0)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma_germ(x0: float, sign: int = 1) -> GammaGerm:
    """Germ of ``Gamma(x0 + sign * delta)`` at ``delta = 0``."""
    if _is_nonpositive_integer(x0):
        k = int(-x0)
        c = (-1) ** k / math.factorial(k)
        return GammaGerm(-1, c / sign, c * float(special.psi(k + 1)))
    g = float(special.gamma(x0))
    return GammaGerm(0, g, sign * g * float(special.psi(x0)))


def rgamma_germ(x0: float, sign: int = 1) -> GammaGerm:
    """Germ of ``1 / Gamma(x0 + sign * delta)`` at ``delta = 0``."""
    if _is_nonpositive_integer(x0):
        k = int(-x0)
        c = (-1) ** k * math.factorial(k)
        return GammaGerm(1, c * sign, -c * float(special.psi(k + 1)))
    g0, g1 = rgamma_taylor(x0)
    return GammaGerm(0, g0, sign * g1)


@lru_cache(maxsize=None)
def _bernoulli_table(kmax: int) -> tuple[Fraction, ...]:
    # B_j = -sum_{i<j} C(j, i) B_i / (j - i + 1)
    table = [Fraction(1)]
    for j in range(1, kmax + 1):
        acc = Fraction(0)
        for i in range(j):
            acc += math.comb(j, i) * table[i] / (j - i + 1)
        table.append(-acc)
    return tuple(table)


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number ``B_k`` for even ``2 <= k <= 64``."""
    if int(k) != k or k < 2 or k > 64 or k % 2:
        raise OutOfRange(f"bernoulli(k) needs even 2 <= k <= 64, got {k!r}")
    return _bernoulli_table(64)[int(k)]


# --------------------------------------------------------------------------
# modified Bessel functions

DEBYE_TERMS = 12
DEBYE_MIN_ORDER = 10.0


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def _debye_u_polys(kmax: int) -> tuple[tuple[Fraction, ...], ...]:
    """Coefficient lists (in powers of p) of the Debye polynomials u_k(p).

    u_{k+1}(p) = p^2 (1 - p^2) u_k'(p) / 2 + (1/8) int_0^p (1 - 5 s^2) u_k(s) ds
    """
    polys = [[Fraction(1)]]
    for _ in range(kmax):
        u = polys[-1]
        du = [i * c for i, c in enumerate(u)][1:] or [Fraction(0)]
        first = _poly_mul([Fraction(0), Fraction(0), Fraction(1, 2), Fraction(0), Fraction(-1, 2)], du)
        integrand = _poly_mul([Fraction(1), Fraction(0), Fraction(-5)], u)
        second = [Fraction(0)] + [c / (i + 1) / 8 for i, c in enumerate(integrand)]
        n = max(len(first), len(second))
        first += [Fraction(0)] * (n - len(first))
        second += [Fraction(0)] * (n - len(second))
        polys.append([x + y for x, y in zip(first, second)])
    return tuple(tuple(p) for p in polys)


@lru_cache(maxsize=None)
def _debye_product_polys(kmax: int) -> tuple[tuple[float, ...], ...]:
    """w_k(p) with sum_k w_k / nu^(2k) = (sum u_k/nu^k)(sum (-1)^k u_k/nu^k)."""
    u = _debye_u_polys(2 * kmax)
    out = []
    for k in range(kmax + 1):
        acc: list[Fraction] = [Fraction(0)]
        for i in range(2 * k + 1):
            term = _poly_mul(list(u[i]), list(u[2 * k - i]))
            if (2 * k - i) % 2:
                term = [-c for c in term]
            if len(acc) < len(term):
                acc += [Fraction(0)] * (len(term) - len(acc))
            for j, c in enumerate(term):
                acc[j] += c
        out.append(tuple(float(c) for c in acc))
    return tuple(out)


def _log_ik_debye(mu: float, x: float) -> tuple[float, float]:
    z = x / mu
    sq = math.sqrt(1.0 + z * z)
    p = 1.0 / sq
    eta = sq + math.log(z / (1.0 + sq))
    si = sk = 0.0
    for k, coeffs in enumerate(_debye_u_polys(DEBYE_TERMS)):
        uk = float(sum(float(c) * p**j for j, c in enumerate(coeffs))) / mu**k
        si += uk
        sk += (-1) ** k * uk
    base = 0.5 * math.log(p)
    log_i = mu * eta - 0.5 * math.log(2.0 * math.pi * mu) + base + math.log(si)
    log_k = -mu * eta + 0.5 * math.log(math.pi / (2.0 * mu)) + base + math.log(sk)
    return log_i, log_k


def _ik_deriv_debye(nu: float, x: float, d: int) -> float:
    # I_nu K_nu = sum_k sum_m w_km nu^(m-2k) / 2 * (nu^2 + y)^(-(m+1)/2), y = x^2,
    # and (-1/(2x) d/dx) = -d/dy acts on each power without cancellation.
    y = x * x
    s = nu * nu + y
    parts = []
    for k, coeffs in enumerate(_debye_product_polys(DEBYE_TERMS // 2)):
        for m, c in enumerate(coeffs):
            if not c:
                continue
            a = 0.5 * (m + 1)
            poch = math.exp(math.lgamma(a + d - 1) - math.lgamma(a))
            parts.append(0.5 * c * poch * nu ** (m - 2 * k) * s ** (-a - d + 1))
    return math.fsum(parts)


def log_bessel_ik(mu: float, x: float) -> tuple[float, float]:
    """``(log I_mu(x), log K_mu(x))`` for ``mu >= 0`` and ``x > 0``."""
    ie = float(special.ive(mu, x))
    ke = float(special.kve(mu, x))
    if ie > 1e-290 and 0.0 < ke < 1e290 and math.isfinite(ie):
        return math.log(ie) + x, math.log(ke) - x
    if mu < DEBYE_MIN_ORDER:
        raise ConvergenceFailure(f"Bessel I/K evaluation failed at mu={mu}, x={x}")
    return _log_ik_debye(mu, x)


def _check_nu_x(nu: float, x: float) -> None:
    if not (nu >= 0) or not math.isfinite(nu):
        raise DomainError(f"order must be >= 0, got {nu!r}")
    if not (x > 0) or not math.isfinite(x):
        raise DomainError(f"argument must be > 0, got {x!r}")


def bessel_ik_product(nu: float, x: float) -> float:
    r"""``I_nu(x) * K_nu(x)`` without forming the exponential factors."""
    _check_nu_x(nu, x)
    log_i, log_k = log_bessel_ik(nu, x)
    return math.exp(log_i + log_k)


def bessel_ik_product_deriv(nu: float, x: float, d: int) -> float:
    r"""Apply ``(-1/(2x) d/dx)^(d-1)`` to ``I_nu(x) K_nu(x)``.

    No numerical differentiation is involved.  For ``d >= 2`` three routes:

    * ``nu < SERIES_MAX_ORDER`` and ``x`` small relative to ``nu`` (at most 12):
      residue series of the Mellin transform;
    * otherwise ``nu < RECURRENCE_MAX_ORDER``: recurrences for ``I'`` and
      ``K'`` expand the derivative into products ``I_{nu+i} K_{nu+j}``;
    * otherwise: Debye expansion of the product in ``y = x**2``, where the
      operator is ``-d/dy`` and acts termwise.

    Relative accuracy is about ``1e-10`` for ``d <= 3`` and a few times ``1e-9``
    for ``d <= 5``.
    ``d = 1`` is the product itself.
    """
    _check_nu_x(nu, x)
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d!r}")
    d = int(d)
    if d == 1:
        return _ik_deriv_debye(nu, x, 1) if nu >= DEBYE_MIN_ORDER else bessel_ik_product(nu, x)
    # the series cancels like exp(2x); larger orders tolerate larger x
    if nu < SERIES_MAX_ORDER and x <= max(SERIES_MAX_ARG, min(0.8 * nu, 0.5 * nu + 3.0, 12.0)):
        return _ik_deriv_series(nu, x, d)
    if nu >= RECURRENCE_MAX_ORDER:
        return _ik_deriv_debye(nu, x, d)
    terms = _poly_deriv_terms(d)
    logs_i: dict[int, float] = {}
    logs_k: dict[int, float] = {}
    parts = []
    for (a, i, j), coeffs in terms:
        if i not in logs_i:
            logs_i[i] = log_bessel_ik(nu + i, x)[0]
        if j not in logs_k:
            logs_k[j] = log_bessel_ik(nu + j, x)[1]
        c = sum(ck * nu**k for k, ck in enumerate(coeffs))
        if c:
            parts.append(c * x**a * math.exp(logs_i[i] + logs_k[j]))
    return math.fsum(parts) / 2.0 ** (d - 1)


SERIES_MAX_ARG = 4.5
SERIES_MAX_ORDER = 40.0
RECURRENCE_MAX_ORDER = 15.0
SERIES_TERMS = 48


def _ik_deriv_series(nu: float, x: float, d: int) -> float:
    r"""Small-``x`` expansion from the residues of the Mellin transform.

    The Mellin transform of :math:`(-\tfrac{1}{2x}\partial_x)^{d-1} I_\nu K_\nu`
    is :math:`\Gamma(\nu+l)\Gamma(\tfrac12-l)\Gamma(l+d-1)/(4\sqrt\pi\,\Gamma(\nu+1-l))`
    with ``s = 2l + 2d - 2``.  Its left poles sit at ``s = -2k`` and
    ``s = 2d - 2 - 2nu - 2k``; for integer ``nu`` the two families merge into
    double poles, which produce the ``log x`` terms.  Pole positions are
    indexed exactly so coincidences are detected without rounding.
    """
    lx = math.log(x)
    c = 1.0 / (4.0 * math.sqrt(math.pi))
    nu_int = nu == math.floor(nu)
    out = []

    def add(g: GammaGerm, power: float) -> None:
        # residue of M(s) x^{-s}; in s the germ variable is delta_s = 2 delta_l
        if g.order == -1:
            out.append(2.0 * c * g.c0 * x**power)
        elif g.order == -2:
            out.append(c * (2.0 * g.c1 - 4.0 * g.c0 * lx) * x**power)

    for k in range(SERIES_TERMS + int(2 * x)):
        if not (nu_int and nu + 1 - d - k <= 0):
            add(gamma_germ(nu + 1 - d - k) * gamma_germ(d - 0.5 + k, -1)
                * gamma_germ(-k) * rgamma_germ(nu + d + k, -1), 2.0 * k)
        add(gamma_germ(-k) * gamma_germ(0.5 + nu + k, -1)
            * gamma_germ(d - 1 - nu - k) * rgamma_germ(2 * nu + 1 + k, -1),
            2.0 * nu + 2.0 * k - 2.0 * d + 2.0)
    return math.fsum(out)


@lru_cache(maxsize=64)
def _poly_deriv_terms(d: int) -> tuple[tuple[tuple[int, int, int], tuple[int, ...]], ...]:
    """Symbolic expansion of ``(-1/x d/dx)^(d-1) [I_nu K_nu]``.

    Entry ``((a, i, j), (c_0, c_1, ...))`` stands for
    ``sum_k c_k nu**k * x**a * I_{nu+i}(x) K_{nu+j}(x)``.  Coefficients are
    exact integers; the caller divides by ``2**(d-1)``.
    """
    terms: dict[tuple[int, int, int], list[int]] = {(0, 0, 0): [1]}

    def padd(dst, src, shift=0, scale=1):
        need = len(src) + shift
        if len(dst) < need:
            dst.extend([0] * (need - len(dst)))
        for k, c in enumerate(src):
            dst[k + shift] += scale * c

    for _ in range(d - 1):
        new: dict[tuple[int, int, int], list[int]] = {}
        for (a, i, j), poly in terms.items():
            # -(1/x) * d/dx [ x^a I_{nu+i} K_{nu+j} ]
            #   = -a x^{a-2} I K
            #     - x^{a-1} I_{nu+i+1} K - (nu+i) x^{a-2} I K
            #     + x^{a-1} I K_{nu+j+1} - (nu+j) x^{a-2} I K
            lower = new.setdefault((a - 2, i, j), [])
            padd(lower, poly, scale=-(a + i + j))
            padd(lower, poly, shift=1, scale=-2)
            padd(new.setdefault((a - 1, i + 1, j), []), poly, scale=-1)
            padd(new.setdefault((a - 1, i, j + 1), []), poly, scale=1)
        terms = new
    return tuple((key, tuple(poly)) for key, poly in sorted(terms.items())
                 if any(poly))


# --------------------------------------------------------------------------
# zeros of J_nu

def mcmahon_zero(nu: float, k: int) -> float:
    """McMahon asymptotic approximation of the ``k``-th zero of ``J_nu``."""
    mu = 4.0 * nu * nu
    beta = (k + 0.5 * nu - 0.25) * math.pi
    e = 8.0 * beta
    return (beta - (mu - 1.0) / e
            - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e**3)
            - 32.0 * (mu - 1.0) * (83.0 * mu**2 - 982.0 * mu + 3779.0) / (15.0 * e**5))


def _refine_zeros(nu: float, lo: np.ndarray, hi: np.ndarray,
                  tol: float, max_iter: int = 100) -> np.ndarray:
    """Safeguarded Newton on a batch of sign-change brackets of ``J_nu``."""
    lo = lo.astype(float).copy()
    hi = hi.astype(float).copy()
    f_lo = special.jv(nu, lo)
    x = 0.5 * (lo + hi)
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(max_iter):
        fx = special.jv(nu, x)
        done |= fx == 0.0
        same = np.sign(fx) == np.sign(f_lo)
        lo = np.where(same, x, lo)
        f_lo = np.where(same, fx, f_lo)
        hi = np.where(same, hi, x)
        dfx = special.jvp(nu, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - fx / dfx
        ok = np.isfinite(newton) & (newton >= lo) & (newton <= hi)
        x_new = np.where(ok, newton, 0.5 * (lo + hi))
        x_new = np.where(done, x, x_new)
        step = np.abs(x_new - x)
        done |= step <= tol * np.maximum(1.0, np.abs(x))
        x = x_new
        if np.all(done):
            return x
    if np.all(hi - lo <= 4 * tol * np.maximum(1.0, np.abs(x))):
        return x
    raise ConvergenceFailure(f"zeros of J_{nu} did not converge")


def bessel_j_zeros_below(nu: float, xmax: float, tol: float = 1e-14) -> np.ndarray:
    """All positive zeros of ``J_nu`` in ``(0, xmax]``, increasing."""
    if not nu >= 0:
        raise DomainError(f"order must be >= 0, got {nu!r}")
    if xmax <= nu:
        return np.empty(0)
    # j_{nu,1} > nu and consecutive zeros are more than 2.4 apart
    start = max(nu, 1e-12)
    n_steps = int(math.ceil((xmax + 1.0 - start) / 0.25)) + 1
    grid = start + 0.25 * np.arange(n_steps + 1)
    values = special.jv(nu, grid)
    sign = np.sign(values)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    exact = np.nonzero(values == 0.0)[0]
    zeros = _refine_zeros(nu, grid[idx], grid[idx + 1], tol) if idx.size else np.empty(0)
    if exact.size:
        zeros = np.sort(np.concatenate([zeros, grid[exact]]))
    return zeros[zeros <= xmax]


def bessel_j_zero(nu: float, k: int, tol: float = 1e-14) -> float:
    """The ``k``-th positive zero of ``J_nu``.

    The search window is sized from McMahon's expansion and widened until
    ``k`` sign changes have been bracketed; each bracket is then polished by
    safeguarded Newton iteration.
    """
    if not nu >= 0:
        raise DomainError(f"order must be >= 0, got {nu!r}")
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    xmax = max(mcmahon_zero(nu, k), nu) + 2.0 * nu + 4.0
    for _ in range(60):
        zeros = bessel_j_zeros_below(nu, xmax, tol)
        if zeros.size >= k:
            return float(zeros[k - 1])
        xmax = 1.5 * xmax + math.pi
    raise ConvergenceFailure(f"could not bracket zero {k} of J_{nu}")
