"""Tests for phase-singularity detection and the ellipticity census."""

import math

import numpy as np
import pytest

from elliptic_oam.beams import ComplexField, eval_hig, eval_ig, eval_lg, sample_grid
from elliptic_oam.errors import GridError, InvalidModeError
from elliptic_oam.ince import ModeIndex, Parity
from elliptic_oam.vortex import (
    Vortex,
    census_window,
    find_vortices,
    merge_vortex_regions,
    vortex_census,
)

from oracles import geometry

M53 = ModeIndex(5, 3, Parity.EVEN)
M22 = ModeIndex(2, 2, Parity.EVEN)


def hig_field(mode, eps, resolution, sign="plus"):
    geo = geometry()
    half = census_window(1.0, eps)
    return sample_grid(lambda x, y: eval_hig(mode, sign, eps, geo, x, y), half, resolution)


class TestFindVortices:
    def test_canonical_helical_lg_vortex(self):
        geo = geometry()
        field = sample_grid(lambda x, y: eval_lg(0, 1, "helical_plus", geo, x, y), 4.0, 256)
        found = find_vortices(field)
        assert len(found) == 1
        assert found[0].charge == 1
        assert math.hypot(found[0].x, found[0].y) < field.spacing

    def test_parity_fields_have_no_vortices(self):
        geo = geometry()
        for parity in (Parity.EVEN, Parity.ODD):
            field = sample_grid(
                lambda x, y: eval_ig(ModeIndex(5, 3, parity), 2.0, geo, x, y), 6.0, 256
            )
            assert find_vortices(field) == []

    def test_hig53_on_axis_structure(self):
        field = hig_field(M53, 2.0, 512)
        found = find_vortices(field)
        spacing = field.spacing
        on_axis = [v for v in found if abs(v.y) < spacing]
        plus_one = sorted(v.x for v in on_axis if v.charge == 1)
        assert len(plus_one) == 3
        # central vortex plus the symmetric pair at the innermost angular
        # nodal crossings of the interfocal segment
        assert abs(plus_one[1]) < spacing
        assert abs(plus_one[0] + plus_one[2]) < 1e-10
        assert abs(plus_one[2] - 0.626) < 2.0 * spacing
        assert all(abs(v.charge) == 1 for v in found)

    def test_winding_is_quantized(self):
        field = hig_field(M53, 2.0, 256)
        values = field.values
        phase = np.angle(values)

        def wrap(t):
            return np.mod(t + np.pi, 2.0 * np.pi) - np.pi

        total = (
            wrap(phase[:-1, 1:] - phase[:-1, :-1])
            + wrap(phase[1:, 1:] - phase[:-1, 1:])
            + wrap(phase[1:, :-1] - phase[1:, 1:])
            + wrap(phase[:-1, :-1] - phase[1:, :-1])
        )
        nearest = np.rint(total / (2.0 * np.pi))
        assert np.max(np.abs(total - 2.0 * np.pi * nearest)) < 1e-6 * 2.0 * np.pi

    def test_mirror_symmetry(self):
        field = hig_field(M53, 2.0, 384)
        found = find_vortices(field)
        spacing = field.spacing
        for v in found:
            partner = min(found, key=lambda u: math.hypot(u.x - v.x, u.y + v.y))
            assert math.hypot(partner.x - v.x, partner.y + v.y) <= spacing

    def test_resolution_stability(self):
        coarse = find_vortices(hig_field(M53, 2.0, 256))
        fine = find_vortices(hig_field(M53, 2.0, 512))
        assert len(coarse) == len(fine)
        coarse_cell = 2.0 * census_window(1.0, 2.0) / 255
        for c in coarse:
            partner = min(
                (f for f in fine if f.charge == c.charge),
                key=lambda f: math.hypot(f.x - c.x, f.y - c.y),
            )
            assert math.hypot(partner.x - c.x, partner.y - c.y) < coarse_cell

    def test_sorted_output(self):
        found = find_vortices(hig_field(M53, 2.0, 256))
        keys = [(v.x, v.y) for v in found]
        assert keys == sorted(keys)

    def test_degenerate_grid_rejected(self):
        values = np.ones((4, 4), dtype=complex)
        field = ComplexField(nx=4, ny=4, origin=(0.0, 0.0), spacing=1.0, values=values)
        with pytest.raises(GridError):
            find_vortices(field)


class TestMergeRegions:
    def test_merges_nearby_unit_charges(self):
        cluster = [Vortex(0.0, 0.0, 1), Vortex(0.01, 0.0, 1), Vortex(5.0, 5.0, -1)]
        merged = merge_vortex_regions(cluster, 0.05)
        assert len(merged) == 2
        assert {v.charge for v in merged} == {2, -1}

    def test_cancelling_cluster_dropped(self):
        pair = [Vortex(0.0, 0.0, 1), Vortex(0.01, 0.0, -1)]
        assert merge_vortex_regions(pair, 0.05) == []

    def test_zero_radius_keeps_everything(self):
        spread = [Vortex(0.0, 0.0, 1), Vortex(1.0, 0.0, 1)]
        assert len(merge_vortex_regions(spread, 0.0)) == 2


class TestCensus:
    def test_unresolved_split_at_tiny_ellipticity(self):
        results = vortex_census(M22, "plus", [1e-6], 512)
        eps, found = results[0]
        spacing = 2.0 * census_window(1.0, eps) / 511
        merged = merge_vortex_regions(found, 2.0 * spacing)
        assert len(merged) == 1
        assert merged[0].charge == 2
        assert math.hypot(merged[0].x, merged[0].y) < 2.0 * spacing

    def test_resolved_pair_at_moderate_ellipticity(self):
        results = vortex_census(M22, "plus", [2.0], 512)
        _, found = results[0]
        assert len(found) == 2
        assert all(v.charge == 1 for v in found)
        xs = sorted(v.x for v in found)
        # on-axis zeros of the even angular series, strictly inside the foci
        root = math.sqrt(5.0)
        expected = math.sqrt((1.0 + root - 2.0) / (2.0 * (1.0 + root)))
        assert abs(xs[1] - expected) < 1e-3
        assert abs(xs[0] + expected) < 1e-3

    def test_off_axis_count_non_decreasing_for_71(self):
        mode = ModeIndex(7, 1, Parity.EVEN)
        results = vortex_census(mode, "plus", [0.5, 2.0, 5.0, 10.0], 384)
        counts = []
        for eps, found in results:
            spacing = 2.0 * census_window(1.0, eps) / 383
            counts.append(sum(1 for v in found if abs(v.y) > spacing))
        assert counts == sorted(counts)

    def test_requires_helical_mode(self):
        with pytest.raises(InvalidModeError):
            vortex_census(ModeIndex(2, 0, Parity.EVEN), "plus", [1.0], 128)
