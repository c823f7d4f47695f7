"""Model cross-sections (N, g_N): exact spectra, heat coefficients, curvature.

Built-in kinds are homogeneous, so every local heat invariant is constant and
``a^N_j = Vol(N) * u_j``.  A ``Custom`` cross-section reads its spectrum (and
optionally its heat coefficients) from CSV files.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError, FileFormat, InsufficientSpectrum, Unsupported

__all__ = [
    "ModelCrossSection",
    "SpectrumSlice",
    "Circle",
    "Sphere",
    "ProjectiveSpace",
    "FlatTorus",
    "Custom",
    "spectrum",
    "heat_coefficients",
    "nu_of",
    "sphere_multiplicity",
    "unit_ball_volume",
    "weyl_constant",
]


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_multiplicity(l: int, n: int) -> int:
    """Dimension of the degree-``l`` spherical harmonics on ``S^n``."""
    if l < 0:
        return 0
    if n == 1:
        return 1 if l == 0 else 2
    return math.comb(l + n, n) - (math.comb(l + n - 2, n) if l >= 2 else 0)


@dataclass(frozen=True)
class ModelCrossSection:
    """Closed Riemannian manifold used as the cross-section of a cone.

    Attributes
    ----------
    kind : str
        ``"circle"``, ``"sphere"``, ``"projective"``, ``"torus"`` or ``"custom"``.
    n : int
        Dimension of N.
    vol : float
        Riemannian volume of N.
    scal : float or None
        Scalar curvature (constant for all built-ins, ``None`` if unknown).
    """

    kind: str
    n: int
    vol: float
    scal: float | None
    params: tuple = ()
    ric_sq: float | None = None
    riem_sq: float | None = None
    coefficients: tuple[float, ...] | None = None
    spectrum_path: str | None = field(default=None, compare=True)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dimension of the cross-section must be >= 1")
        if not self.vol > 0:
            raise DomainError("volume must be positive")

    @property
    def homogeneous(self) -> bool:
        return self.kind != "custom"

    def describe(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "params": list(self.params)}
        if self.spectrum_path:
            out["spectrum_path"] = self.spectrum_path
        return out


def Circle(circumference: float) -> ModelCrossSection:
    if not circumference > 0:
        raise DomainError("circumference must be positive")
    return ModelCrossSection("circle", 1, float(circumference), 0.0,
                             (float(circumference),), 0.0, 0.0)


def _round_sphere(kind: str, n: int, a: float, vol_factor: float) -> ModelCrossSection:
    if n < 1 or not a > 0:
        raise DomainError("need n >= 1 and radius > 0")
    vol = vol_factor * 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2) * a**n
    scal = n * (n - 1) / a**2
    ric_sq = n * (n - 1) ** 2 / a**4
    riem_sq = 2.0 * n * (n - 1) / a**4
    return ModelCrossSection(kind, n, vol, scal, (n, float(a)), ric_sq, riem_sq)


def Sphere(n: int, radius: float = 1.0) -> ModelCrossSection:
    return _round_sphere("sphere", int(n), float(radius), 1.0)


def ProjectiveSpace(n: int, radius: float = 1.0) -> ModelCrossSection:
    if n < 2:
        raise DomainError("projective space needs n >= 2")
    return _round_sphere("projective", int(n), float(radius), 0.5)


def FlatTorus(*lengths: float) -> ModelCrossSection:
    if len(lengths) == 1 and isinstance(lengths[0], (list, tuple)):
        lengths = tuple(lengths[0])
    if not lengths or any(not L > 0 for L in lengths):
        raise DomainError("torus lengths must be positive")
    lengths = tuple(float(L) for L in lengths)
    return ModelCrossSection("torus", len(lengths), float(np.prod(lengths)), 0.0,
                             lengths, 0.0, 0.0)


def Custom(spectrum_path: str | Path, n: int, vol: float,
           coefficients_path: str | Path | None = None,
           scal: float | None = None) -> ModelCrossSection:
    """Cross-section defined by a ``lambda,multiplicity`` CSV file.

    The optional coefficient file has header ``j,a_j``.
    """
    coeffs = None
    if coefficients_path is not None:
        coeffs = tuple(_read_coefficients(Path(coefficients_path)))
    path = str(Path(spectrum_path))
    _read_spectrum_file(path)  # validate eagerly
    return ModelCrossSection("custom", int(n), float(vol), scal, (path,),
                             coefficients=coeffs, spectrum_path=path)


# --------------------------------------------------------------------------
# spectra

@dataclass(frozen=True)
class SpectrumSlice:
    """Eigenvalues ``0 <= lambda <= cutoff`` with multiplicities."""

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    cutoff: float

    @property
    def pairs(self) -> list[tuple[float, int]]:
        return [(float(l), int(m)) for l, m in zip(self.eigenvalues, self.multiplicities)]

    def count(self) -> int:
        return int(self.multiplicities.sum())

    def __len__(self) -> int:
        return len(self.eigenvalues)


@lru_cache(maxsize=16)
def _read_spectrum_file(path: str) -> tuple[tuple[float, ...], tuple[int, ...]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["lambda", "multiplicity"]:
                raise FileFormat(f"{path}: header must be 'lambda,multiplicity'")
            lams, mults = [], []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 2:
                    raise FileFormat(f"{path}:{lineno}: expected 2 columns")
                try:
                    lam = float(row[0])
                    mult = int(row[1])
                except ValueError as exc:
                    raise FileFormat(f"{path}:{lineno}: {exc}") from None
                if lam < 0 or mult < 1 or (lams and lam <= lams[-1]):
                    raise FileFormat(f"{path}:{lineno}: eigenvalues must be >= 0, "
                                     "strictly increasing, with positive multiplicity")
                lams.append(lam)
                mults.append(mult)
    except OSError as exc:
        raise FileFormat(f"cannot read {path}: {exc}") from None
    if not lams:
        raise FileFormat(f"{path}: no eigenvalues")
    return tuple(lams), tuple(mults)


def _read_coefficients(path: Path) -> list[float]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["j", "a_j"]:
            raise FileFormat(f"{path}: header must be 'j,a_j'")
        rows = {}
        for row in reader:
            if not row:
                continue
            try:
                rows[int(row[0])] = float(row[1])
            except (ValueError, IndexError) as exc:
                raise FileFormat(f"{path}: {exc}") from None
    if sorted(rows) != list(range(len(rows))):
        raise FileFormat(f"{path}: coefficients must be given for j = 0, 1, ..., J")
    return [rows[j] for j in range(len(rows))]


def _merge(lams: np.ndarray, mults: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(lams, kind="stable")
    lams, mults = lams[order], mults[order]
    out_l, out_m = [], []
    for lam, mult in zip(lams, mults):
        if out_l and abs(lam - out_l[-1]) <= 1e-12 * max(1.0, lam):
            out_m[-1] += int(mult)
        else:
            out_l.append(float(lam))
            out_m.append(int(mult))
    return np.array(out_l), np.array(out_m, dtype=np.int64)


@lru_cache(maxsize=32)
def _spectrum_cached(model: ModelCrossSection, cutoff: float) -> SpectrumSlice:
    kind = model.kind
    if kind == "circle":
        gamma = model.params[0]
        kmax = int(math.floor(math.sqrt(cutoff) * gamma / (2 * math.pi)))
        k = np.arange(kmax + 1)
        lams = (2 * math.pi * k / gamma) ** 2
        mults = np.where(k == 0, 1, 2)
        keep = lams <= cutoff
        return SpectrumSlice(lams[keep], mults[keep].astype(np.int64), cutoff)
    if kind in ("sphere", "projective"):
        n, a = model.params
        step = 2 if kind == "projective" else 1
        # largest l with l(l+n-1) <= cutoff a^2
        lmax = int(math.floor((-(n - 1) + math.sqrt((n - 1) ** 2 + 4 * cutoff * a * a)) / 2))
        while (lmax + 1) * (lmax + n) <= cutoff * a * a:
            lmax += 1
        while lmax > 0 and lmax * (lmax + n - 1) > cutoff * a * a:
            lmax -= 1
        l = np.arange(0, lmax + 1, step)
        lams = l * (l + n - 1) / a**2
        mults = np.array([sphere_multiplicity(k, n) for k in l.tolist()], dtype=np.int64)
        return SpectrumSlice(lams.astype(float), mults, cutoff)
    if kind == "torus":
        lengths = np.array(model.params)
        freqs = 2 * math.pi / lengths
        kmax = [int(math.floor(math.sqrt(cutoff) / f)) for f in freqs]
        axes = [np.arange(-k, k + 1) for k in kmax]
        grids = np.meshgrid(*axes, indexing="ij")
        lam = sum((f * g.astype(float)) ** 2 for f, g in zip(freqs, grids)).ravel()
        lam = lam[lam <= cutoff * (1 + 1e-14)]
        lam = np.minimum(lam, cutoff)
        lams, mults = _merge(lam, np.ones_like(lam, dtype=np.int64))
        return SpectrumSlice(lams, mults, cutoff)
    if kind == "custom":
        lams, mults = _read_spectrum_file(model.spectrum_path)
        if cutoff > lams[-1]:
            raise InsufficientSpectrum(
                f"custom spectrum ends at {lams[-1]}, requested cutoff {cutoff}")
        lam_arr = np.array(lams)
        keep = lam_arr <= cutoff
        return SpectrumSlice(lam_arr[keep], np.array(mults, dtype=np.int64)[keep], cutoff)
    raise Unsupported(f"unknown cross-section kind {kind!r}")


def spectrum(model: ModelCrossSection, cutoff: float) -> SpectrumSlice:
    """All eigenvalues of the Laplacian on N in ``[0, cutoff]``."""
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    return _spectrum_cached(model, float(cutoff))


def available_cutoff(model: ModelCrossSection) -> float:
    """Largest usable cutoff (infinite for built-ins)."""
    if model.kind == "custom":
        return _read_spectrum_file(model.spectrum_path)[0][-1]
    return math.inf


def storage_estimate(model: ModelCrossSection, cutoff: float) -> float:
    """Rough number of array entries needed to list the spectrum up to ``cutoff``."""
    if model.kind == "circle":
        return math.sqrt(cutoff) * model.params[0] / (2 * math.pi) + 1
    if model.kind in ("sphere", "projective"):
        return math.sqrt(cutoff) * model.params[1] + 1
    if model.kind == "torus":
        return math.prod(2 * math.sqrt(cutoff) * L / (2 * math.pi) + 1 for L in model.params)
    return float(len(_read_spectrum_file(model.spectrum_path)[0]))


def weyl_constant(model: ModelCrossSection) -> float:
    """``C`` in the Weyl law ``N(lambda) ~ C * lambda**(n/2)``."""
    n = model.n
    return model.vol * unit_ball_volume(n) / (2 * math.pi) ** n


def heat_coefficients(model: ModelCrossSection, jmax: int = 2) -> list[float]:
    """``[a^N_0, ..., a^N_jmax]`` for ``tr exp(-t Delta_N)``."""
    if jmax < 0:
        raise DomainError("jmax must be >= 0")
    if model.kind == "custom":
        if model.coefficients is None or len(model.coefficients) <= jmax:
            raise Unsupported("custom cross-section lacks heat coefficients up to "
                              f"j={jmax}")
        return list(model.coefficients[: jmax + 1])
    if jmax > 2:
        raise Unsupported("built-in heat coefficients are provided for j <= 2 only")
    scal = model.scal
    u = [1.0, scal / 6.0,
         (5.0 * scal**2 - 2.0 * model.ric_sq + 2.0 * model.riem_sq) / 360.0]
    return [model.vol * uj for uj in u[: jmax + 1]]


def nu_of(lam: float, n: int) -> float:
    """Bessel order attached to the eigenvalue ``lam`` of an ``n``-dimensional N."""
    if lam < 0:
        raise DomainError("eigenvalue must be non-negative")
    return math.sqrt(lam + (n - 1) ** 2 / 4.0)

