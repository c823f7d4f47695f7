r"""Mellin transforms and regularized integrals of expansion-tagged functions.

A tagged function ``f`` on :math:`(0, \infty)` carries finitely many terms

.. math::

    f(x) \sim \sum a\, x^{\alpha} \log^k x \quad (x \to 0), \qquad
    f(x) \sim \sum b\, x^{\beta} \log^k x \quad (x \to \infty),

together with callables for the two remainders ``f - (small terms)`` and
``f - (large terms)``.  The Mellin transform is split at ``c``; the tagged
terms are integrated in closed form, which gives the meromorphic
continuation, and the remainders are integrated numerically.  The
regularized integral is the finite part of the Mellin transform at ``s = 1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

from scipy import integrate

from .errors import DomainError, QuadratureFailure, UnsupportedPoleOrder, ValidationError
from .laurent import LaurentValue

__all__ = ["TaggedFunction", "mellin", "regularized_integral", "finite_part_power"]

Term = tuple[float, int, float]


def _zero(x: float) -> float:
    return 0.0


@dataclass(frozen=True)
class TaggedFunction:
    """Locally integrable function with power-log data at both ends.

    Parameters
    ----------
    small_terms, large_terms : list of (exponent, k, coefficient)
        ``coefficient * x**exponent * log(x)**k`` as ``x -> 0`` and ``x -> oo``.
    f1 : callable
        ``f(x)`` minus the small terms; used on ``(0, split]``.
    f2 : callable
        ``f(x)`` minus the large terms; used on ``[split, oo)``.
    p, q : float
        ``f1 = O(x**(p - 1 + delta))`` at 0 and ``f2 = O(x**(-q - 1 - delta))`` at
        infinity, so the Mellin transform lives in ``1 - p < s < 1 + q``.
    split : float
        The point ``c`` where the transform is split.

    Notes
    -----
    Evaluator callables must be reentrant; they may be called concurrently.
    """

    small_terms: tuple[Term, ...] = ()
    large_terms: tuple[Term, ...] = ()
    f1: Callable[[float], float] = _zero
    f2: Callable[[float], float] = _zero
    p: float = 1.0
    q: float = 1.0
    split: float = 1.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "small_terms", tuple((float(a), int(k), float(c))
                                                      for a, k, c in self.small_terms))
        object.__setattr__(self, "large_terms", tuple((float(b), int(k), float(c))
                                                      for b, k, c in self.large_terms))
        if not (self.p > 0 and self.q > 0 and self.split > 0):
            raise ValidationError("p, q and split must be positive")
        alphas = [a for a, _, _ in self.small_terms]
        betas = [b for b, _, _ in self.large_terms]
        if any(k < 0 for _, k, _ in self.small_terms + self.large_terms):
            raise ValidationError("log powers must be non-negative")
        if alphas != sorted(alphas) or any(a > self.p - 1 + 1e-12 for a in alphas):
            raise ValidationError("small-end exponents must increase and stay <= p - 1")
        if betas != sorted(betas, reverse=True) or any(b < -self.q - 1 - 1e-12 for b in betas):
            raise ValidationError("large-end exponents must decrease and stay >= -q - 1")

    def with_split(self, c: float) -> "TaggedFunction":
        return replace(self, split=float(c))

    def __mul__(self, alpha: float) -> "TaggedFunction":
        alpha = float(alpha)
        f1, f2 = self.f1, self.f2
        return replace(self,
                       small_terms=tuple((a, k, alpha * c) for a, k, c in self.small_terms),
                       large_terms=tuple((b, k, alpha * c) for b, k, c in self.large_terms),
                       f1=lambda x: alpha * f1(x), f2=lambda x: alpha * f2(x))

    __rmul__ = __mul__

    def __add__(self, other: "TaggedFunction") -> "TaggedFunction":
        if not isinstance(other, TaggedFunction):
            return NotImplemented
        if self.split != other.split:
            raise ValidationError("cannot add tagged functions with different splits")
        a1, a2, b1, b2 = self.f1, other.f1, self.f2, other.f2
        return TaggedFunction(
            small_terms=_merge_terms(self.small_terms, other.small_terms, reverse=False),
            large_terms=_merge_terms(self.large_terms, other.large_terms, reverse=True),
            f1=lambda x: a1(x) + a2(x), f2=lambda x: b1(x) + b2(x),
            p=min(self.p, other.p), q=min(self.q, other.q), split=self.split)


def _merge_terms(t1, t2, reverse: bool) -> tuple[Term, ...]:
    acc: dict[tuple[float, int], float] = {}
    for e, k, c in t1 + t2:
        acc[(e, k)] = acc.get((e, k), 0.0) + c
    keys = sorted(acc, key=lambda ek: (ek[0], ek[1]), reverse=reverse)
    return tuple((e, k, acc[(e, k)]) for e, k in keys)


def _power_log_piece(w: float, k: int, c: float) -> tuple[float, float]:
    r"""Laurent data in ``w`` of :math:`\frac{d^k}{dw^k} \frac{c^w}{w}` at ``w``.

    Equals :math:`\int_0^c x^{w-1}\log^k x\,dx` for ``w > 0``.
    """
    logc = math.log(c)
    if w == 0.0:
        if k > 0:
            raise UnsupportedPoleOrder(f"pole of order {k + 1} from a log^{k} term")
        return 1.0, logc
    cw = c**w
    total = math.fsum(math.comb(k, i) * logc ** (k - i) * cw * (-1) ** i * math.factorial(i)
                      / w ** (i + 1) for i in range(k + 1))
    return 0.0, total


def _quad(f, a, b) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)
    if not math.isfinite(val) or err > max(1e-10, 1e-9 * abs(val)):
        raise QuadratureFailure(f"remainder integral did not converge (err {err:.3g})")
    return val


def mellin(f: TaggedFunction, s: float) -> LaurentValue:
    r"""Laurent data of :math:`(\mathcal M f)(s) = \int_0^\infty x^{s-1} f(x)\,dx` at ``s``.

    Raises
    ------
    DomainError
        If ``s`` lies outside ``1 - p < s < 1 + q``.
    UnsupportedPoleOrder
        At a pole of order two or more.
    QuadratureFailure
        If a remainder integral fails.
    """
    if not (1 - f.p < s < 1 + f.q):
        raise DomainError(f"s={s} outside the strip ({1 - f.p}, {1 + f.q})")
    c = f.split
    res, parts = [], []
    for alpha, k, a in f.small_terms:
        r1, r0 = _power_log_piece(s + alpha, k, c)
        res.append(a * r1)
        parts.append(a * r0)
    for beta, k, b in f.large_terms:
        r1, r0 = _power_log_piece(s + beta, k, c)
        res.append(-b * r1)
        parts.append(-b * r0)

    # x = u^2 removes integrable endpoint singularities at 0
    f1 = f.f1
    parts.append(_quad(lambda u: 2.0 * u ** (2 * s - 1) * f1(u * u) if u > 0 else 0.0,
                       0.0, math.sqrt(c)))
    f2 = f.f2
    parts.append(_quad(lambda x: x ** (s - 1) * f2(x), c, math.inf))
    return LaurentValue(float(s), math.fsum(res), math.fsum(parts))


def regularized_integral(f: TaggedFunction) -> float:
    r"""Finite part :math:`\operatorname{Res}_0 (\mathcal M f)(1)`."""
    return mellin(f, 1.0).res0


def finite_part_power(a: float, eps: float) -> float:
    r"""Regularized :math:`\int_0^\varepsilon r^a\,dr`.

    ``eps**(a + 1) / (a + 1)`` for ``a != -1`` and ``log(eps)`` for ``a = -1``.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    if a == -1:
        return math.log(eps)
    return eps ** (a + 1) / (a + 1)
