"""Phase-singularity detection on sampled complex fields.

A vortex is located by the quantized winding of the phase around each grid
plaquette.  Real-valued fields (even/odd modes) produce pi phase jumps
across nodal lines that must not be mistaken for vortices, so a plaquette
only counts when both the real and the imaginary part change sign among its
corners, i.e. when an isolated zero of the complex field can lie inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beams import BeamGeometry, ComplexField, eval_hig, sample_grid
from .errors import GridError, InvalidModeError
from .ince import ModeIndex

DEFAULT_AMPLITUDE_FLOOR = 1e-9


@dataclass(frozen=True)
class Vortex:
    """Position and integer topological charge of one phase singularity."""

    x: float
    y: float
    charge: int

    def __post_init__(self):
        if self.charge == 0:
            raise GridError("a vortex must carry nonzero charge")


def _wrap(angles: np.ndarray) -> np.ndarray:
    return np.mod(angles + np.pi, 2.0 * np.pi) - np.pi


def _bilinear_zero(f00, f10, f01, f11) -> tuple:
    """Newton solve for the zero of the bilinear interpolant, in cell units."""
    u, v = 0.5, 0.5
    for _ in range(30):
        value = (
            f00 * (1 - u) * (1 - v)
            + f10 * u * (1 - v)
            + f01 * (1 - u) * v
            + f11 * u * v
        )
        du = (f10 - f00) * (1 - v) + (f11 - f01) * v
        dv = (f01 - f00) * (1 - u) + (f11 - f10) * u
        det = du.real * dv.imag - du.imag * dv.real
        if det == 0.0:
            break
        step_u = (value.real * dv.imag - value.imag * dv.real) / det
        step_v = (du.real * value.imag - du.imag * value.real) / det
        u -= step_u
        v -= step_v
        if abs(step_u) < 1e-14 and abs(step_v) < 1e-14:
            break
    return min(max(u, 0.0), 1.0), min(max(v, 0.0), 1.0)


def find_vortices(field: ComplexField, amplitude_floor: float = DEFAULT_AMPLITUDE_FLOOR):
    """Detect phase singularities and their charges on a sampled field.

    For each plaquette the wrapped phase differences around the four corners
    are summed; a nonzero multiple of 2*pi marks an enclosed singularity,
    positioned at the bilinear zero-crossing estimate.  Plaquettes whose
    corner amplitudes do not all clear ``amplitude_floor * max|field|`` are
    treated as numerical noise, as are plaquettes without a sign change in
    both field quadratures.  Result is sorted by x then y.
    """
    if field.nx < 8 or field.ny < 8:
        raise GridError(f"grid {field.ny}x{field.nx} too small for winding detection (need 8x8)")
    if amplitude_floor < 0.0:
        raise GridError("amplitude_floor must be non-negative")
    values = field.values
    phase = np.angle(values)
    p00 = phase[:-1, :-1]
    p10 = phase[:-1, 1:]
    p11 = phase[1:, 1:]
    p01 = phase[1:, :-1]
    winding = (
        _wrap(p10 - p00) + _wrap(p11 - p10) + _wrap(p01 - p11) + _wrap(p00 - p01)
    )
    charge = np.rint(winding / (2.0 * np.pi)).astype(int)

    amplitude = np.abs(values)
    floor = amplitude_floor * float(amplitude.max())
    corner_min = np.minimum(
        np.minimum(amplitude[:-1, :-1], amplitude[:-1, 1:]),
        np.minimum(amplitude[1:, :-1], amplitude[1:, 1:]),
    )

    def _sign_change(component):
        c00 = component[:-1, :-1]
        c10 = component[:-1, 1:]
        c11 = component[1:, 1:]
        c01 = component[1:, :-1]
        top = np.maximum(np.maximum(c00, c10), np.maximum(c11, c01))
        bottom = np.minimum(np.minimum(c00, c10), np.minimum(c11, c01))
        return (top > 0.0) & (bottom < 0.0)

    candidates = (
        (charge != 0)
        & (corner_min > floor)
        & _sign_change(values.real)
        & _sign_change(values.imag)
    )

    x0, y0 = field.origin
    spacing = field.spacing
    found = []
    for iy, ix in zip(*np.nonzero(candidates)):
        u, v = _bilinear_zero(
            values[iy, ix], values[iy, ix + 1], values[iy + 1, ix], values[iy + 1, ix + 1]
        )
        found.append(
            Vortex(
                x=x0 + (ix + u) * spacing,
                y=y0 + (iy + v) * spacing,
                charge=int(charge[iy, ix]),
            )
        )
    found.sort(key=lambda vtx: (vtx.x, vtx.y))
    return found


def merge_vortex_regions(vortices, radius: float):
    """Cluster vortices closer than ``radius`` and sum their charges.

    Serves the unresolved-splitting regime near zero ellipticity, where
    several unit charges share one or two plaquettes.  Clusters whose total
    charge cancels are dropped.  Returns merged vortices at the cluster
    centroids, sorted by x then y.
    """
    if radius < 0.0:
        raise GridError("merge radius must be non-negative")
    remaining = list(vortices)
    clusters = []
    while remaining:
        seed = remaining.pop()
        members = [seed]
        changed = True
        while changed:
            changed = False
            for other in remaining[:]:
                if any(
                    math.hypot(other.x - m.x, other.y - m.y) <= radius for m in members
                ):
                    members.append(other)
                    remaining.remove(other)
                    changed = True
        clusters.append(members)
    merged = []
    for members in clusters:
        total = sum(m.charge for m in members)
        if total == 0:
            continue
        merged.append(
            Vortex(
                x=sum(m.x for m in members) / len(members),
                y=sum(m.y for m in members) / len(members),
                charge=total,
            )
        )
    merged.sort(key=lambda vtx: (vtx.x, vtx.y))
    return merged


def census_window(waist: float, ellipticity: float) -> float:
    """Half-width of the adaptive sampling window for a vortex census."""
    semifocal = waist * math.sqrt(ellipticity / 2.0)
    return max(6.0 * waist, 3.0 * semifocal)


def vortex_census(
    mode: ModeIndex,
    sign,
    epsilons,
    resolution: int,
    waist: float = 1.0,
    wavenumber: float = 2.0 * math.pi,
    amplitude_floor: float = DEFAULT_AMPLITUDE_FLOOR,
):
    """Vortex inventory of a helical mode across ellipticities.

    Samples the helical field per ellipticity on an adaptive window (six
    waists, or three semifocal separations if larger) and runs
    find_vortices.  Returns [(eps, [Vortex, ...]), ...] in input order.
    """
    if mode.m < 1:
        raise InvalidModeError("vortex census needs a helical mode (m >= 1)")
    geometry = BeamGeometry(waist=waist, wavenumber=wavenumber)
    results = []
    for eps in epsilons:
        half_width = census_window(waist, eps)
        field = sample_grid(
            lambda x, y: eval_hig(mode, sign, eps, geometry, x, y), half_width, resolution
        )
        results.append((float(eps), find_vortices(field, amplitude_floor)))
    return results
