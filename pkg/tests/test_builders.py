import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import (
    random_axial_design,
    random_design,
    random_revolution_data,
    random_translational_data,
    revolution_design,
)
from thedra import errors
from thedra.builders import (
    THedron,
    TranslationalData,
    build_axial,
    build_miura,
    build_molding,
    build_revolution,
    build_thedron,
    build_translational,
    classify,
    lift,
    miura_data,
)
from thedra.design import (
    DesignData,
    build_tnet,
    derive,
    ground_view,
    recover_signed_lengths,
)
from thedra.metrology import planarity


class TestLift:
    def test_unit_prism_patch(self):
        d = DesignData(phi=[0.0], psi=[0.0], f0=[1.0], g0=[1.0], z=[0.0, 1.0])
        surf = lift(build_tnet(d), [0.0, 1.0])
        assert surf.points[0, 0] == pytest.approx([0.0, 0.0, 0.0])
        assert surf.points[1, 1] == pytest.approx([1.0, 1.0, 1.0])

    def test_equal_consecutive_heights_rejected(self):
        d = DesignData(phi=[0.3], psi=[0.1], f0=[1.0, 0.5], g0=[1.0], z=[0.0, 1.0, 2.0])
        net = build_tnet(d)
        with pytest.raises(errors.DegenerateHeights):
            lift(net, [0.0, 1.0, 1.0])

    def test_collinear_profile_rejected(self):
        d = DesignData(phi=[0.3], psi=[0.1], f0=[1.0, 1.0], g0=[1.0], z=[0.0, 1.0, 2.5])
        net = build_tnet(d)
        # heights proportional to the cumulative lengths make straight profiles
        with pytest.raises(errors.CollinearProfile):
            lift(net, [0.0, 2.0, 4.0])

    def test_lifting_flat_herringbone_gives_miura(self):
        # lift every second trajectory polygon of the flat pattern to height d
        a, b, c, d = 1.0, 1.2, 0.8, 0.6
        m = n = 4
        flat = build_miura(a, b, c, 0.0, m, n)
        net = ground_view(flat)
        z = np.where(np.arange(n + 1) % 2 == 0, 0.0, d)
        lifted = lift(net, z)
        assert np.allclose(lifted.points, build_miura(a, b, c, d, m, n).points, atol=1e-14)


class TestBuildThedron:
    def test_identity_angles_give_prism_like_patch(self):
        # a second zero-angle strip would straighten the trajectory polygon,
        # so the smallest identity-angle patch has one strip
        d = DesignData(
            phi=[0.0], psi=[0.0], f0=[1.0, -0.5], g0=[1.0], z=[0.0, 1.0, 1.5]
        )
        surf = build_thedron(d)
        assert classify(surf) == "translational"

    def test_self_overlapping_net_lifts_cleanly(self, rng):
        # mixed-sign widths produce overlapping ground views; the lift is a
        # valid surface regardless
        d = DesignData(
            phi=[0.6, 1.0], psi=[0.3, 0.8], f0=[0.25, -0.3], g0=[1.0, -1.3],
            z=[0.0, 0.8, 1.4],
        )
        surf = build_thedron(d)
        assert planarity(surf) < 1e-12

    def test_matches_revolution_constructor(self, rng):
        F, phi, z = random_revolution_data(rng)
        d = revolution_design(F, phi, z)
        general = build_thedron(d)
        special = build_revolution(F, phi, z)
        shift = special.points[0, 0] - general.points[0, 0]
        assert np.allclose(general.points + shift, special.points, atol=1e-12)


class TestTranslational:
    def test_single_cell(self):
        data = TranslationalData(x_row=[0.0, 1.0], x_col=[0.0, 1.0], y=[0.0, 1.0], z=[0.0, 1.0])
        surf = build_translational(data)
        assert surf.points[1, 1] == pytest.approx([2.0, 1.0, 1.0])

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1))
    def test_parallelogram_identity(self, seed):
        data = random_translational_data(np.random.default_rng(seed))
        pts = build_translational(data).points
        i, k = 0, data.m
        j, l = 0, data.n
        assert np.allclose(
            pts[i, j] + pts[k, l], pts[i, l] + pts[k, j], atol=1e-12
        )

    def test_parallel_generator_edges_rejected(self):
        data = TranslationalData(
            x_row=[0.0, 1.0], x_col=[0.0, 1.0], y=[0.0, 0.0], z=[0.0, 0.0]
        )
        with pytest.raises(errors.ParallelGenerators):
            build_translational(data)

    def test_paraboloid_grid_is_planar(self):
        # square grid lifted to a paraboloid of revolution, permuted so the
        # trajectory planes are horizontal: all quads stay planar
        h = 0.125
        i = np.arange(5)
        data = TranslationalData(
            x_row=(i * h) ** 2, x_col=(i * h) ** 2, y=i * h, z=i * h
        )
        surf = build_translational(data)
        assert planarity(surf) < 1e-14


class TestMolding:
    def test_constant_zero_angles_degenerate_to_translational(self):
        d = DesignData(phi=[0.0], psi=[0.0], f0=[1.0], g0=[1.0], z=[0.0, 1.0])
        surf = build_molding(d)
        assert np.allclose(surf.points[:, :, :2], build_tnet(d).points, atol=1e-15)

    def test_bisector_cell_value(self):
        # frozen by direct substitution: psi_1 = phi_1 / 2
        d = DesignData(phi=[math.pi / 3], psi=[math.pi / 6], f0=[1.0], g0=[1.0], z=[0.0, 1.0])
        surf = build_molding(d)
        expected = [
            -math.sin(math.pi / 6) + math.cos(math.pi / 3),
            math.cos(math.pi / 6) + math.sin(math.pi / 3),
        ]
        assert surf.points[1, 1, :2] == pytest.approx(expected, abs=1e-15)

    def test_leg_lengths_equal_across_strips(self, rng):
        from conftest import random_molding_design

        d = random_molding_design(rng)
        f, _ = recover_signed_lengths(build_tnet(d))
        assert np.allclose(f[:-1], f[1:], rtol=1e-12, atol=1e-14)

    def test_non_molding_rejected(self):
        d = DesignData(phi=[math.pi / 3], psi=[math.pi / 4], f0=[1.0], g0=[1.0], z=[0.0, 1.0])
        with pytest.raises(errors.NotMolding):
            build_molding(d)


class TestAxial:
    def test_substitution_values(self):
        # eta = theta = pi/6 gives C = 1 and phi_1 = pi/3
        d = DesignData(
            phi=[math.pi / 3], psi=[math.pi / 6], f0=[1.0], g0=[1.0], z=[0.0, 1.0]
        )
        surf = build_axial(d, f00=1.0)
        assert surf.points[0, 1] == pytest.approx([2.0, 0.0, 1.0])
        assert surf.points[1, 1] == pytest.approx(
            [2.0 * math.cos(math.pi / 3), 2.0 * math.sin(math.pi / 3), 1.0]
        )

    def test_zero_axis_distance_rejected(self):
        d = DesignData(phi=[math.pi / 3], psi=[math.pi / 6], f0=[1.0], g0=[1.0], z=[0.0, 1.0])
        with pytest.raises(errors.AxisDegenerate):
            build_axial(d, f00=0.0)

    def test_profile_lines_pass_through_origin(self, rng):
        d, f00 = random_axial_design(rng)
        surf = build_axial(d, f00)
        net = ground_view(surf)
        for anchor, direction in net.lines:
            # distance from the origin to the line
            dist = abs(anchor[0] * direction[1] - anchor[1] * direction[0])
            assert dist < 1e-12

    def test_common_axis_width_criterion(self, rng):
        # widths recovered from the built surface satisfy the closed-form
        # ratio; perturbing one width breaks it
        d, f00 = random_axial_design(rng)
        surf = build_axial(d, f00)
        net = ground_view(surf)
        _, g = recover_signed_lengths(net)
        der = derive(d)
        s = np.sin(der.eta + der.theta)
        expected = g[0, 0] * s * np.cos(der.theta[0]) * der.C[1:] / (
            s[0] * np.cos(der.eta)
        )
        assert np.allclose(g[:, 0], expected, rtol=1e-12)
        perturbed = np.array(g[:, 0])
        perturbed[-1] *= 1.01
        assert not np.allclose(perturbed, expected, rtol=1e-6)

    def test_equal_sector_angles_coincide_with_revolution(self):
        eta = np.array([0.3, 0.25, 0.4])
        phi = np.cumsum(2.0 * eta)
        psi = phi - eta
        f0 = np.array([0.4, 0.3])
        z = np.array([0.0, 0.7, 1.2])
        d = DesignData(phi=phi, psi=psi, f0=f0, g0=np.ones(3), z=z)
        f00 = 0.8
        F = f00 + np.concatenate(([0.0], np.cumsum(f0)))
        assert np.allclose(
            build_axial(d, f00).points, build_revolution(F, phi, z).points, atol=1e-14
        )


class TestRevolution:
    def test_substitution_value(self):
        surf = build_revolution([1.0, 2.0], [math.pi / 3], [0.0, 1.0])
        assert surf.points[1, 1] == pytest.approx([1.0, math.sqrt(3.0), 1.0])

    def test_profile_polygons_related_by_rotation(self, rng):
        F, phi, z = random_revolution_data(rng)
        surf = build_revolution(F, phi, z)
        phi_full = np.concatenate(([0.0], phi))
        for i in range(1, len(phi_full)):
            a = float(phi_full[i] - phi_full[i - 1])
            R = np.array(
                [[math.cos(a), -math.sin(a), 0.0],
                 [math.sin(a), math.cos(a), 0.0],
                 [0.0, 0.0, 1.0]]
            )
            assert np.allclose(
                surf.points[i], surf.points[i - 1] @ R.T, atol=1e-12
            )

    def test_zero_radius_rejected(self):
        with pytest.raises(errors.ZeroRadius):
            build_revolution([1.0, 0.0], [0.5], [0.0, 1.0])

    def test_paraboloid_preset_is_valid(self):
        from thedra.presets import revolution_paraboloid_design

        d = revolution_paraboloid_design()
        surf = build_thedron(d)
        assert planarity(surf) < 1e-12
        assert classify(surf) == "revolution"


class TestMiura:
    def test_cell_vertex(self):
        surf = build_miura(1.0, 1.0, 1.0, 1.0, 2, 2)
        assert surf.points[1, 1] == pytest.approx([2.0, 1.0, 1.0])

    def test_flat_pattern_allowed(self):
        surf = build_miura(1.0, 1.0, 1.0, 0.0, 3, 3)
        assert np.all(surf.points[..., 2] == 0.0)

    def test_all_faces_congruent(self):
        surf = build_miura(1.0, 1.3, 0.8, 0.6, 4, 4)
        pts = surf.points
        def face_lengths(i, j):
            quad = [pts[i - 1, j - 1], pts[i - 1, j], pts[i, j], pts[i, j - 1]]
            edges = [np.linalg.norm(quad[k] - quad[(k + 1) % 4]) for k in range(4)]
            diags = [np.linalg.norm(quad[0] - quad[2]), np.linalg.norm(quad[1] - quad[3])]
            return sorted(edges) + sorted(diags)
        ref = face_lengths(1, 1)
        for i in range(1, 5):
            for j in range(1, 5):
                assert face_lengths(i, j) == pytest.approx(ref, rel=1e-12)

    def test_positivity_checked(self):
        with pytest.raises(ValueError):
            miura_data(0.0, 1.0, 1.0, 1.0, 2, 2)


class TestClassify:
    def test_constructor_agreement(self, rng):
        assert classify(build_miura(1.0, 1.0, 1.0, 1.0, 3, 3)) == "translational"
        F, phi, z = random_revolution_data(rng)
        assert classify(build_revolution(F, phi, z)) == "revolution"

        from conftest import random_molding_design

        dm = random_molding_design(rng)
        assert classify(build_molding(dm)) == "molding"

        da, f00 = random_axial_design(rng)
        tag = classify(build_axial(da, f00))
        assert tag in ("axial", "revolution")

    def test_axial_with_unequal_angles_is_not_revolution(self):
        d = DesignData(phi=[0.5, 1.1], psi=[0.35, 0.8], f0=[0.3, 0.2], g0=[1.0, 1.0], z=[0.0, 0.5, 1.1])
        der = derive(d)
        assert not np.allclose(der.eta, der.theta)
        f00 = 0.9
        surf = build_axial(d, f00)
        assert classify(surf) == "axial"

    def test_generic_design_is_general(self, rng):
        for _ in range(5):
            d = random_design(rng, m=4, n=4)
            tag = classify(build_thedron(d))
            if tag == "general":
                return
        raise AssertionError("random designs kept landing in special classes")

    def test_garbage_grid_rejected(self):
        pts = np.arange(27, dtype=float).reshape(3, 3, 3)
        pts[1, 1] += 0.7  # break the row lines
        with pytest.raises(errors.NotATHedron):
            classify(THedron(points=pts))
