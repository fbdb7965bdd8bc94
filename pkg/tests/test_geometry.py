import numpy as np
import pytest

from reegeom import geometry, spectra
from reegeom.errors import OutsideTetrahedron
from reegeom.geometry import Vertex
from reegeom.spectra import ZParallelState


class TestTetrahedron:
    def test_vertices_inside(self):
        for v in geometry.TETRA_VERTICES.values():
            assert geometry.in_tetrahedron(v)

    def test_octahedron_inside(self):
        for o in geometry.OCTA_VERTICES.values():
            assert geometry.in_tetrahedron(o)

    def test_outside_point(self):
        assert not geometry.in_tetrahedron([1.0, 1.0, 1.0])

    def test_face_normals_touch_opposite_faces(self):
        # each vertex saturates n.t = 1 on exactly three of the four faces
        for v in geometry.TETRA_VERTICES.values():
            sat = sum(abs(float(n @ v) - 1.0) < 1e-14
                      for n in geometry.TETRA_FACE_NORMALS)
            assert sat == 3

    def test_nearest_vertex(self):
        assert geometry.nearest_vertex([0.9, -0.9, 0.9]).label == "v1"
        assert geometry.nearest_vertex([-0.9, 0.9, 0.9]).label == "v2"
        assert geometry.nearest_vertex([0.9, 0.9, -0.9]).label == "v3"
        assert geometry.nearest_vertex([-0.9, -0.9, -0.9]).label == "v4"

    def test_nearest_vertex_tie_break(self):
        # the origin is equidistant from all four; label order wins
        assert geometry.nearest_vertex([0.0, 0.0, 0.0]).label == "v1"

    def test_nearest_vertex_outside_raises(self):
        with pytest.raises(OutsideTetrahedron):
            geometry.nearest_vertex([1.0, 1.0, 1.0])


class TestSurfaceMesh:
    def test_state_body_degenerates_to_tetrahedron(self):
        mesh = geometry.surface_mesh("T", 0.0, 0.0, 16)
        assert len(mesh.points) > 0
        for p in mesh.points:
            assert min(abs(float(n @ p) - 1.0)
                       for n in geometry.TETRA_FACE_NORMALS) < 1e-8
            assert geometry.in_tetrahedron(p)

    def test_separable_body_degenerates_to_octahedron(self):
        mesh = geometry.surface_mesh("L", 0.0, 0.0, 16)
        assert len(mesh.points) > 0
        one_norms = np.sum(np.abs(mesh.points), axis=1)
        assert np.max(np.abs(one_norms - 1.0)) < 1e-8

    def test_points_are_physical(self):
        mesh = geometry.surface_mesh("L", 0.4, -0.2, 12)
        for p in mesh.points:
            assert spectra.min_branch(ZParallelState(0.4, -0.2, *p)) >= -1e-10

    def test_row_major_grid_order(self):
        mesh = geometry.surface_mesh("T", 0.0, 0.0, 8)
        q1 = mesh.points[:, 0]
        assert np.all(np.diff(q1) >= -1e-15)

    def test_deformation_shrinks_body(self):
        # a nonzero Bloch pair strictly shrinks the surface footprint
        full = geometry.surface_mesh("T", 0.0, 0.0, 16)
        deformed = geometry.surface_mesh("T", 0.5, 0.5, 16)
        assert 0 < len(deformed.points) < len(full.points)

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            geometry.surface_mesh("T", 0.0, 0.0, 1)


class TestLineSurfaceCrossing:
    def test_bell_diagonal_face_crossing(self):
        v = geometry.nearest_vertex([0.8, -0.8, 0.8])
        crossings = geometry.line_surface_crossing(
            np.array([0.8, -0.8, 0.8]), v, 0.0, 0.0)
        assert np.allclose(crossings[0].coords, [1 / 3, -1 / 3, 1 / 3], atol=1e-9)

    def test_crossings_sorted_by_distance(self):
        t = np.array([0.5, -0.5, 0.05])
        v = geometry.nearest_vertex(t)
        crossings = geometry.line_surface_crossing(t, v, 0.2, -0.2)
        dists = [np.linalg.norm(c.coords - t) for c in crossings]
        assert dists == sorted(dists)

    def test_crossing_points_on_boundary(self):
        t = np.array([0.5, -0.5, 0.1])
        v = geometry.nearest_vertex(t)
        for c in geometry.line_surface_crossing(t, v, 0.1, 0.1):
            z = ZParallelState(0.1, 0.1, *c.coords)
            assert abs(spectra.min_pt_branch(z)) < 1e-9

    def test_tangential_touch_found(self):
        # ray through a one-Bell-plus-diagonal state grazes the boundary
        # without a sign change; the refinement must still find it
        t = np.array([0.5, -0.5, 1.0])
        v = geometry.nearest_vertex(t)
        crossings = geometry.line_surface_crossing(t, v, 0.1, 0.1)
        assert len(crossings) >= 1

    def test_degenerate_start_raises(self):
        v = Vertex("v1", geometry.TETRA_VERTICES["v1"])
        with pytest.raises(ValueError):
            geometry.line_surface_crossing(v.coords, v, 0.0, 0.0)
