"""Physical mode fields: Gaussian envelope, LG, HG, IG and helical IG.

All evaluators accept scalar or array coordinates and broadcast.  Fields are
normalized to unit L2 norm over the transverse plane except the bare
Gaussian envelope, which is 1 on axis at the waist.  Propagation support is
a thin scale-and-phase wrapper: the transverse profile at z is the waist
profile with w(z), f(z) scaled together plus curvature and Gouy phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre, eval_hermite

from .errors import GridError, InvalidModeError
from .ince import ModeIndex, Parity, eval_angular, eval_radial, solve_ince
from .linalg import plane_quadrature_grid

_NORM_HALF_WIDTH_WAISTS = 8.0
_NORM_NODES = 160


@dataclass(frozen=True)
class BeamGeometry:
    """Waist w(0), wavenumber k, and evaluation plane z."""

    waist: float
    wavenumber: float
    z: float = 0.0

    def __post_init__(self):
        if self.waist <= 0.0:
            raise InvalidModeError(f"waist must be positive, got {self.waist}")
        if self.wavenumber <= 0.0:
            raise InvalidModeError(f"wavenumber must be positive, got {self.wavenumber}")

    @property
    def rayleigh_range(self) -> float:
        return self.wavenumber * self.waist**2 / 2.0

    @property
    def width(self) -> float:
        """Beam width w(z)."""
        return self.waist * math.hypot(1.0, self.z / self.rayleigh_range)

    @property
    def gouy(self) -> float:
        """Fundamental Gouy phase arctan(2z / (k w(0)^2))."""
        return math.atan2(self.z, self.rayleigh_range)

    @property
    def inverse_curvature(self) -> float:
        """1/R(z) with R = z + k^2 w(0)^4 / (4 z); zero at the waist."""
        if self.z == 0.0:
            return 0.0
        return self.z / (self.z**2 + self.rayleigh_range**2)

    def semifocal(self, ellipticity: float) -> float:
        """f(z) for the elliptic frame fixed by eps = 2 f(0)^2 / w(0)^2."""
        return self.width * math.sqrt(ellipticity / 2.0)


@dataclass(frozen=True)
class EllipticPoint:
    """Elliptic coordinates with xi >= 0 and eta wrapped to [0, 2*pi)."""

    xi: float
    eta: float


@dataclass(frozen=True)
class ComplexField:
    """Complex samples on a uniform rectangular grid, row-major in y then x."""

    nx: int
    ny: int
    origin: tuple
    spacing: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.ny, self.nx):
            raise GridError(f"values shape {values.shape} != (ny={self.ny}, nx={self.nx})")
        if self.spacing <= 0.0:
            raise GridError(f"spacing must be positive, got {self.spacing}")
        if not np.all(np.isfinite(values)):
            raise GridError("field contains non-finite samples")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def x_coords(self) -> np.ndarray:
        return self.origin[0] + self.spacing * np.arange(self.nx)

    def y_coords(self) -> np.ndarray:
        return self.origin[1] + self.spacing * np.arange(self.ny)


def _elliptic_coords(x, y, semifocal: float):
    """(xi, eta) arrays via the complex arccosh branch with xi >= 0."""
    if semifocal <= 0.0:
        raise ValueError(f"semifocal separation must be positive, got {semifocal}")
    w = (np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)) / semifocal
    zeta = np.arccosh(w.astype(complex))
    xi = np.abs(zeta.real)
    eta = np.mod(zeta.imag, 2.0 * np.pi)
    return xi, eta


def cartesian_to_elliptic(x, y, semifocal: float) -> EllipticPoint:
    """Invert x = f cosh(xi) cos(eta), y = f sinh(xi) sin(eta).

    Stable near the foci and the inter-focal segment; round-trips to 1e-12
    relative.  Scalar inputs yield scalar fields.
    """
    xi, eta = _elliptic_coords(x, y, semifocal)
    if np.ndim(xi) == 0:
        return EllipticPoint(xi=float(xi), eta=float(eta))
    return EllipticPoint(xi=xi, eta=eta)


def elliptic_to_cartesian(point: EllipticPoint, semifocal: float):
    x = semifocal * np.cosh(point.xi) * np.cos(point.eta)
    y = semifocal * np.sinh(point.xi) * np.sin(point.eta)
    return x, y


def eval_gaussian(geometry: BeamGeometry, x, y):
    """Fundamental Gaussian envelope, amplitude 1 on axis at the waist."""
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    w = geometry.width
    amplitude = (geometry.waist / w) * np.exp(-r2 / w**2)
    phase = 0.5 * geometry.wavenumber * geometry.inverse_curvature * r2 - geometry.gouy
    return amplitude * np.exp(1j * phase)


def _lg_radial(n: int, l: int, w: float, r2):
    arg = 2.0 * r2 / w**2
    norm = math.sqrt(2.0 * math.factorial(n) / (math.pi * math.factorial(n + l))) / w
    return norm * arg ** (l / 2.0) * eval_genlaguerre(n, l, arg) * np.exp(-r2 / w**2)


def eval_lg(n: int, l: int, kind: str, geometry: BeamGeometry, x, y):
    """Normalized Laguerre-Gauss mode of radial number n and charge l >= 0.

    ``kind`` selects the azimuthal factor: "even" (cos), "odd" (sin),
    "helical_plus"/"helical_minus" (exp(+-i l phi)).  Even/odd pairs are
    orthonormal; helical combinations are (even +- i odd)/sqrt(2).
    """
    if n < 0 or l < 0:
        raise InvalidModeError(f"LG indices must be non-negative, got n={n}, l={l}")
    if kind not in ("even", "odd", "helical_plus", "helical_minus"):
        raise InvalidModeError(f"unknown LG kind {kind!r}")
    if kind != "even" and l == 0:
        raise InvalidModeError(f"LG kind {kind!r} requires l >= 1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x**2 + y**2
    phi = np.arctan2(y, x)
    radial = _lg_radial(n, l, geometry.width, r2)
    if kind == "even":
        angular = np.cos(l * phi) * (math.sqrt(2.0) if l > 0 else 1.0)
    elif kind == "odd":
        angular = np.sin(l * phi) * math.sqrt(2.0)
    elif kind == "helical_plus":
        angular = np.exp(1j * l * phi)
    else:
        angular = np.exp(-1j * l * phi)
    order = 2 * n + l
    phase = 0.5 * geometry.wavenumber * geometry.inverse_curvature * r2 - (order + 1) * geometry.gouy
    return radial * angular * np.exp(1j * phase)


def eval_hg(nx_index: int, ny_index: int, geometry: BeamGeometry, x, y):
    """Normalized Hermite-Gauss mode; used for the large-ellipticity limit."""
    if nx_index < 0 or ny_index < 0:
        raise InvalidModeError("HG indices must be non-negative")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = geometry.width
    r2 = x**2 + y**2
    norm = (
        math.sqrt(2.0 / math.pi)
        / math.sqrt(2.0 ** (nx_index + ny_index) * math.factorial(nx_index) * math.factorial(ny_index))
        / w
    )
    field = (
        norm
        * eval_hermite(nx_index, math.sqrt(2.0) * x / w)
        * eval_hermite(ny_index, math.sqrt(2.0) * y / w)
        * np.exp(-r2 / w**2)
    )
    order = nx_index + ny_index
    phase = 0.5 * geometry.wavenumber * geometry.inverse_curvature * r2 - (order + 1) * geometry.gouy
    return field * np.exp(1j * phase)


def _ig_profile(poly, semifocal: float, waist: float, x, y):
    """Unnormalized waist-plane IG profile: radial * angular * envelope."""
    xi, eta = _elliptic_coords(x, y, semifocal)
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    return eval_radial(poly, xi) * eval_angular(poly, eta) * np.exp(-r2 / waist**2)


@lru_cache(maxsize=2048)
def _ig_norm_constant(p: int, m: int, parity_value: str, ellipticity: float, waist: float) -> float:
    """1 / L2 norm of the unnormalized waist-plane profile (quadrature).

    The Gaussian envelope confines every mode, so a fixed window of
    8 waists always captures the norm to well below 1e-10.
    """
    poly = solve_ince(ModeIndex(p, m, Parity(parity_value)), ellipticity)
    f0 = waist * math.sqrt(ellipticity / 2.0)
    X, Y, W = plane_quadrature_grid(_NORM_HALF_WIDTH_WAISTS * waist, _NORM_NODES)
    profile = _ig_profile(poly, f0, waist, X, Y)
    return 1.0 / math.sqrt(float(np.sum(profile**2 * W)))


def eval_ig(mode: ModeIndex, ellipticity: float, geometry: BeamGeometry, x, y):
    """Unit-norm Ince-Gauss field at the given transverse points and z.

    Odd modes absorb the factor i from the sine series at imaginary
    argument into their (real, positive) normalization constant, so even
    and odd fields are both real at the waist.
    """
    if ellipticity <= 0.0:
        raise InvalidModeError(f"ellipticity must be positive, got {ellipticity}")
    poly = solve_ince(mode, ellipticity)
    norm = _ig_norm_constant(mode.p, mode.m, mode.parity.value, float(ellipticity), geometry.waist)
    fz = geometry.semifocal(ellipticity)
    xi, eta = _elliptic_coords(x, y, fz)
    profile = eval_radial(poly, xi) * eval_angular(poly, eta) * norm
    envelope = eval_gaussian(geometry, x, y)
    # order-p Gouy phase from the longitudinal separation equation
    return profile * envelope * np.exp(-1j * mode.p * geometry.gouy)


def eval_hig(mode: ModeIndex, sign, ellipticity: float, geometry: BeamGeometry, x, y):
    """Helical Ince-Gauss field (even +- i odd)/sqrt(2); requires m >= 1."""
    if mode.m < 1:
        raise InvalidModeError("helical modes need m >= 1 (no odd partner for m = 0)")
    sign = getattr(sign, "value", sign)
    if sign not in ("plus", "minus"):
        raise InvalidModeError(f"sign must be 'plus' or 'minus', got {sign!r}")
    even = eval_ig(ModeIndex(mode.p, mode.m, Parity.EVEN), ellipticity, geometry, x, y)
    odd = eval_ig(ModeIndex(mode.p, mode.m, Parity.ODD), ellipticity, geometry, x, y)
    s = 1.0 if sign == "plus" else -1.0
    return (even + s * 1j * odd) / math.sqrt(2.0)


def sample_grid(field, window_half_width: float, resolution: int) -> ComplexField:
    """Sample a field callable on a uniform square grid.

    The grid spans [-W, W] per axis inclusive with ``resolution`` points, so
    spacing is 2 W / (resolution - 1).  Deterministic row-major output.
    """
    if resolution < 16:
        raise GridError(f"resolution must be at least 16, got {resolution}")
    if window_half_width <= 0.0:
        raise GridError("window_half_width must be positive")
    coords = np.linspace(-window_half_width, window_half_width, resolution)
    X, Y = np.meshgrid(coords, coords, indexing="xy")
    values = np.asarray(field(X, Y), dtype=complex)
    return ComplexField(
        nx=resolution,
        ny=resolution,
        origin=(-window_half_width, -window_half_width),
        spacing=float(coords[1] - coords[0]),
        values=values,
    )
