from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lbmcrack.errors import ConfigError, GeometryError
from lbmcrack.geometry import (DIRICHLET, NEUMANN, TRACTION_FREE, BoundaryCondition, CrackPath,
                               DomainOutline, Tip, closest_boundary_point, polar_about_tip,
                               segment_intersects_link, segments_cross_links,
                               shift_origin_off_crack)

coord = st.floats(-5, 5, allow_nan=False)
point = st.tuples(coord, coord)


class TestSegmentLink:
    seg = ((0.5, -0.5), (0.5, 0.5))

    def test_perpendicular_crossing(self):
        assert segment_intersects_link(self.seg, (0, 0), (1, 0))

    def test_parallel_disjoint(self):
        assert not segment_intersects_link(self.seg, (0, 0), (0, 1))

    def test_between_columns(self):
        seg = ((0.2, 0.5), (0.8, 0.5))
        assert not segment_intersects_link(seg, (0, 0), (0, 1))
        assert not segment_intersects_link(seg, (0, 1), (1, 1))

    def test_endpoint_on_link_counts(self):
        assert segment_intersects_link(((0.5, 0.0), (0.5, 1.0)), (0, 0), (1, 0))

    def test_collinear_overlap_rejected(self):
        with pytest.raises(GeometryError):
            segment_intersects_link(((0.0, 0.0), (2.0, 0.0)), (1, 0), (3, 0))

    @given(point, point, point, point)
    def test_symmetry(self, a, b, p, q):
        try:
            ref = segment_intersects_link((a, b), p, q)
        except GeometryError:
            return
        assert segment_intersects_link((a, b), q, p) == ref
        assert segment_intersects_link((b, a), p, q) == ref

    def test_vectorised_form(self):
        P = np.array([[0.0, 0.0], [0.0, 0.0], [2.0, 0.0]])
        Q = np.array([[1.0, 0.0], [0.0, 1.0], [3.0, 0.0]])
        hit = segments_cross_links(np.array([0.5, -0.5]), np.array([0.5, 0.5]), P, Q)
        assert hit.tolist() == [True, False, False]


class TestPolar:
    def test_examples(self):
        tip, d = (0.0, 0.0), (1.0, 0.0)
        r, phi = polar_about_tip(tip, d, (-1.0, 0.0))
        assert (r, phi) == (1.0, pytest.approx(math.pi))
        assert polar_about_tip(tip, d, (1.0, 0.0)) == (1.0, 0.0)
        r, phi = polar_about_tip(tip, d, (0.0, 1.0))
        assert r == 1.0 and phi == pytest.approx(math.pi / 2)

    @given(point, point, st.floats(0, 2 * math.pi), point)
    def test_translation_and_reflection(self, tip, x, ang, shift):
        d = (math.cos(ang), math.sin(ang))
        tip, x = np.array(tip), np.array(x)
        rel = x - tip
        n = np.array([-d[1], d[0]])
        if np.hypot(*rel) < 1e-3 or abs(rel @ n) < 1e-9:
            return
        r, phi = polar_about_tip(tip, d, x)
        r2, phi2 = polar_about_tip(tip + shift, d, x + shift)
        assert r2 == pytest.approx(r, rel=1e-9, abs=1e-9)
        mirrored = x - 2 * (rel @ n) * n
        _, phi_m = polar_about_tip(tip, d, mirrored)
        assert phi_m == pytest.approx(-phi, abs=1e-9)

    def test_at_tip_rejected(self):
        with pytest.raises(GeometryError):
            polar_about_tip((0, 0), (1, 0), (0, 0))


def _outline():
    dirichlet = BoundaryCondition(DIRICHLET, lambda t, xy: 0.0)
    # bottom, right, top(Dirichlet), left
    return DomainOutline([[0, -1], [4, -1], [4, 1], [0, 1]],
                         [TRACTION_FREE, TRACTION_FREE, dirichlet, TRACTION_FREE])


class TestClosestPoint:
    def test_crack_face(self):
        crack = CrackPath([[0.0, 0.0], [2.0, 0.0]], [Tip("end", np.array([1.0, 0.0]))])
        cp = closest_boundary_point(_outline(), crack, (1.0, 0.05))
        np.testing.assert_allclose(cp.point, [1.0, 0.0])
        assert cp.bc.kind == NEUMANN and cp.edge == 4
        np.testing.assert_allclose(cp.normal, [0.0, 1.0])
        below = closest_boundary_point(_outline(), crack, (1.0, -0.05))
        np.testing.assert_allclose(below.normal, [0.0, -1.0])

    def test_top_edge(self):
        cp = closest_boundary_point(_outline(), None, (2.0, 0.95))
        np.testing.assert_allclose(cp.point, [2.0, 1.0])
        assert cp.bc.kind == DIRICHLET and cp.edge == 2
        np.testing.assert_allclose(cp.normal, [0.0, -1.0])

    def test_reentrant_corner_tie(self):
        # L-shape; the re-entrant corner is at (1, 1)
        verts = [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]
        out = DomainOutline(verts, [TRACTION_FREE] * 6)
        cp = closest_boundary_point(out, None, (0.9, 0.9))
        assert cp.edge == 2

    def test_polygon_checks(self):
        with pytest.raises(GeometryError):
            DomainOutline([[0, 0], [1, 1], [1, 0], [0, 1]], [TRACTION_FREE] * 4)
        with pytest.raises(ConfigError):
            DomainOutline([[0, 0], [1, 0]], [TRACTION_FREE] * 2)

    def test_contains(self):
        inside = _outline().contains(np.array([[1.0, 0.0], [5.0, 0.0], [2.0, -0.99]]))
        assert inside.tolist() == [True, False, True]


class TestCrackPath:
    def test_tips_sorted_and_advance(self):
        crack = CrackPath([[-0.5, 0.0], [0.5, 0.0]],
                          [Tip("end", np.array([1.0, 0.0])), Tip("start", np.array([-1.0, 0.0]))])
        assert [t.side for t in crack.tips] == ["left", "right"]
        old, new = crack.advance(crack.tips[1], 0.1)
        np.testing.assert_allclose(old, [0.5, 0.0])
        np.testing.assert_allclose(new, [0.6, 0.0])
        crack.advance(crack.tips[0], 0.2)
        np.testing.assert_allclose(crack.start, [-0.7, 0.0])
        assert crack.tips[0].extension == pytest.approx(0.2)

    def test_rejects_bad_geometry(self):
        with pytest.raises(GeometryError):
            CrackPath([[0, 0], [1, 0.1], [2, 0]])
        with pytest.raises(GeometryError):
            CrackPath([[0, 0], [1, 0]], [Tip("end", np.array([-1.0, 0.0]))])
        with pytest.raises(GeometryError):
            CrackPath([[0, 0], [1, 0]], [Tip("end", np.array([1.0, 1.0]))])


def test_origin_shift_off_crack_line():
    assert shift_origin_off_crack(0.0, 0.0, 0.1, (0, 0.3), (1, 0.3)) == (0.0, 0.05)
    assert shift_origin_off_crack(0.0, 0.0, 0.1, (0, 0.35), (1, 0.35)) == (0.0, 0.0)
    assert shift_origin_off_crack(0.0, 0.0, 0.1, (0.2, 0), (0.2, 1)) == (0.05, 0.0)
