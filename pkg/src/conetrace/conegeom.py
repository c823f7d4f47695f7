r"""Curvature of the cone metric :math:`dr^2 + r^2 g_N` and its local heat invariants.

For a homogeneous cross-section every invariant of the cone at ``(r, x)`` is
a constant times a power of ``r``.  Tensor deviations are taken with lowered
indices,

.. math::

    \widetilde{\mathrm{Ric}}_{ij} = \mathrm{Ric}_{ij} - (n-1) g_{ij}, \qquad
    \tilde R_{ijkl} = r^2 (R_{ijkl} - g_{ik}g_{jl} + g_{il}g_{jk}),

so that contracting with :math:`\tilde g^{-1} = r^{-2} g^{-1}` gives the cone
scalar curvature :math:`r^{-2}(\mathrm{Scal}_N - n(n-1))` and both squared
norms scale like :math:`r^{-4}`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cross_section import ModelCrossSection
from .errors import DomainError, Unsupported

__all__ = ["CurvatureData", "curvature_data", "cone_scalar", "cone_u", "cone_u_hat",
           "sigma_coefficient", "cone_potential_constant", "LAPLACIAN_SIGN"]

# +1: positive Laplacian -div grad, for which the radial function A r^-2 maps
# to (2n - 6) A r^-4.  Set to -1 for the analyst's sign convention.
LAPLACIAN_SIGN = 1


@dataclass(frozen=True)
class CurvatureData:
    """Curvature invariants of a homogeneous cross-section.

    Attributes
    ----------
    scal_N : float
        Scalar curvature of N.
    ric_dev_sq : float
        :math:`|\\mathrm{Ric} - (n-1) g|^2_{g_N}`.
    riem_dev_sq : float
        :math:`|R - G|^2_{g_N}` with :math:`G_{ijkl} = g_{ik}g_{jl} - g_{il}g_{jk}`.
    lap_scal : float
        Laplacian of the scalar curvature of N (zero when homogeneous).
    """

    n: int
    scal_N: float
    ric_dev_sq: float
    riem_dev_sq: float
    lap_scal: float = 0.0

    def __post_init__(self):
        vals = (self.scal_N, self.ric_dev_sq, self.riem_dev_sq, self.lap_scal)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("curvature data must be finite")

    @property
    def scal_dev(self) -> float:
        """``Scal_N - n(n-1)``, the trace of the Ricci deviation."""
        return self.scal_N - self.n * (self.n - 1)


def curvature_data(model: ModelCrossSection) -> CurvatureData:
    """Deviation invariants from the plain norms stored on ``model``."""
    if model.scal is None or model.ric_sq is None or model.riem_sq is None:
        raise Unsupported(f"no curvature data for a {model.kind} cross-section")
    n, scal = model.n, model.scal
    # |Ric - (n-1)g|^2 = |Ric|^2 - 2(n-1) Scal + n(n-1)^2
    ric_dev = model.ric_sq - 2 * (n - 1) * scal + n * (n - 1) ** 2
    # <R, G> = 2 Scal and |G|^2 = 2n(n-1)
    riem_dev = model.riem_sq - 4 * scal + 2 * n * (n - 1)
    # exact zeros should stay exact (round spheres of radius 1)
    tiny = 1e-13 * (1 + abs(model.ric_sq) + abs(model.riem_sq) + n**3)
    return CurvatureData(n, scal, 0.0 if abs(ric_dev) < tiny else ric_dev,
                         0.0 if abs(riem_dev) < tiny else riem_dev)


def _require_homogeneous(model: ModelCrossSection) -> CurvatureData:
    if not model.homogeneous:
        raise Unsupported("cone invariants need a homogeneous cross-section")
    return curvature_data(model)


def cone_scalar(model: ModelCrossSection, r: float) -> float:
    """Scalar curvature of the cone at radius ``r``: ``r**-2 (Scal_N - n(n-1))``."""
    if not r > 0:
        raise DomainError("r must be positive")
    return _require_homogeneous(model).scal_dev / r**2


def cone_u_hat(model: ModelCrossSection, j: int) -> float:
    """``r**(2j) u_j(r)``, which is independent of ``r``."""
    cd = _require_homogeneous(model)
    n, A = cd.n, cd.scal_dev
    if j == 0:
        return 1.0
    if j == 1:
        return A / 6.0
    if j == 2:
        lap = LAPLACIAN_SIGN * (2 * n - 6) * A
        return (12.0 * lap + 5.0 * A * A - 2.0 * cd.ric_dev_sq + 2.0 * cd.riem_dev_sq) / 360.0
    raise Unsupported("local heat invariants are provided for j <= 2 only")


def cone_u(model: ModelCrossSection, j: int, r: float) -> float:
    r"""Local heat invariant :math:`u_j` of the cone at radius ``r``.

    :math:`u_0 = 1`, :math:`u_1 = \widetilde{\mathrm{Scal}}/6` and

    .. math::

        u_2 = \tfrac{1}{360}\bigl(12\,\tilde\Delta\widetilde{\mathrm{Scal}}
        + 5\,\widetilde{\mathrm{Scal}}^2 - 2|\widetilde{\mathrm{Ric}}|^2
        + 2|\tilde R|^2\bigr).
    """
    if not r > 0:
        raise DomainError("r must be positive")
    return cone_u_hat(model, j) / r ** (2 * j)


def sigma_coefficient(model: ModelCrossSection, d: int, j: int) -> float:
    r"""Radial-free factor :math:`\hat\sigma_j` with :math:`\sigma_j(r) = \hat\sigma_j r^{2d-1}`.

    .. math::

        \hat\sigma_j = (4\pi)^{-m/2}\,\frac{\Gamma(d - m/2 + j)}{(d-1)!}
        \int_N \hat u_j\, d\mathrm{vol}_N, \qquad m = n + 1.
    """
    m = model.n + 1
    if not d > m / 2:
        raise DomainError(f"need d > m/2 = {m / 2}")
    u = cone_u_hat(model, j)
    if u == 0.0:
        return 0.0
    return ((4 * math.pi) ** (-m / 2) * math.gamma(d - m / 2 + j) / math.factorial(d - 1)
            * model.vol * u)


def cone_potential_constant(n: int) -> float:
    """Constant ``n/2 (n/2 - 1)`` in the radial form of the cone Laplacian."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return n / 2 * (n / 2 - 1)
