import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import (
    random_axial_design,
    random_design,
    random_molding_design,
    random_revolution_data,
    random_translational_data,
    revolution_design,
)
from thedra import errors
from thedra.builders import TranslationalData, build_thedron, miura_data
from thedra.design import DesignData, derive
from thedra.kinematics import (
    deform,
    deform_axial,
    deform_molding,
    deform_revolution,
    deform_translational,
    deform_translational_data,
    deformation_state,
    is_parallel,
    miura_flat_parameters,
    parallel_axial,
    parameter_range,
    t_additive_from_exponential,
    t_exponential_from_additive,
    translational_design,
    translational_parameter_range,
)
from thedra.metrology import check_congruent, check_isometric, max_dihedral_change

REV_DESIGN = DesignData(
    phi=[math.pi / 3], psi=[math.pi / 6],
    f0=[1.0], g0=[math.sin(math.pi / 3) / math.cos(math.pi / 6)], z=[0.0, 1.0],
)


def interior_t_samples(design, count=10):
    rng = parameter_range(design)
    hi = rng.t_max if np.isfinite(rng.t_max) else -rng.t_min
    return np.linspace(rng.t_min, hi, count + 2)[1:-1]


class TestParameterRange:
    def test_single_cone_cell(self):
        rng = parameter_range(REV_DESIGN)
        assert rng.t_min == pytest.approx(-math.cos(math.pi / 6) ** 2, rel=1e-12)
        assert rng.t_max == pytest.approx(1.0, rel=1e-12)
        assert rng.min_blocking.reason == "ProfileFlattening"
        assert rng.max_blocking.reason == "TrajectoryFlattening"

    def test_vertical_profile_unbounded(self):
        d = DesignData(
            phi=[0.4, 0.9], psi=[0.2, 0.6], f0=[0.0, 0.0], g0=[1.0, 1.0],
            z=[0.0, 1.0, 1.7],
        )
        rng = parameter_range(d)
        assert math.isinf(rng.t_max)
        assert rng.max_blocking.reason == "Unbounded"

    def test_miura_endpoints_are_flat_states(self):
        data = miura_data(1.0, 1.0, 1.0, 1.0, 3, 3)
        rng = parameter_range(translational_design(data))
        t_minus, t_plus = miura_flat_parameters(1.0, 1.0, 1.0, 1.0)
        assert rng.t_max == pytest.approx(t_additive_from_exponential(t_plus), rel=1e-12)
        assert rng.t_min == pytest.approx(t_additive_from_exponential(t_minus), rel=1e-12)

    def test_range_matches_feasibility_bisection(self, rng):
        # independent oracle: bisect on the largest t at which deform succeeds
        def feasible(design, t):
            try:
                deform(design, t)
                return True
            except errors.OutOfRange:
                return False

        for _ in range(3):
            d = random_design(rng, m=3, n=3)
            r = parameter_range(d)
            lo, hi = r.t_max * 0.5, r.t_max * 2.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if feasible(d, mid):
                    lo = mid
                else:
                    hi = mid
            assert lo == pytest.approx(r.t_max, abs=1e-6)
            lo2, hi2 = r.t_min * 2.0, r.t_min * 0.5
            for _ in range(60):
                mid = 0.5 * (lo2 + hi2)
                if feasible(d, mid):
                    hi2 = mid
                else:
                    lo2 = mid
            assert hi2 == pytest.approx(r.t_min, abs=1e-6)


class TestDeform:
    def test_identity_at_zero(self, rng):
        for _ in range(5):
            d = random_design(rng)
            surf = build_thedron(d)
            moved = deform(d, 0.0)
            scale = surf.bbox_diagonal
            assert np.abs(moved.points - surf.points).max() <= 1e-12 * scale

    def test_cone_cell_frozen_values(self):
        surf = deform(REV_DESIGN, 0.75)
        # height increment shrinks to sqrt(1 - 0.75)
        assert surf.points[0, 1, 2] == pytest.approx(0.5, rel=1e-12)
        state = deformation_state(REV_DESIGN, 0.75)
        assert math.sin(state.eta_t[0]) == pytest.approx(0.5 / math.sqrt(1.75), rel=1e-12)
        assert state.Ct[1] == pytest.approx(math.sqrt(1.75), rel=1e-12)

    def test_faces_stay_congruent(self, rng):
        for _ in range(5):
            d = random_design(rng)
            base = deform(d, 0.0)
            for t in interior_t_samples(d, 5):
                rep = check_isometric(base, deform(d, t), tol=1e-9)
                assert rep.passed, (t, rep)

    def test_out_of_range_reports_reason(self):
        with pytest.raises(errors.OutOfRange) as hi:
            deform(REV_DESIGN, 1.5)
        assert hi.value.reason == "TrajectoryFlattening"
        with pytest.raises(errors.OutOfRange) as lo:
            deform(REV_DESIGN, -0.9)
        assert lo.value.reason == "ProfileFlattening"

    def test_closed_endpoints_evaluate(self):
        rng = parameter_range(REV_DESIGN)
        flat = deform(REV_DESIGN, rng.t_max)
        assert np.abs(flat.points[..., 2]).max() <= 1e-12
        folded = deform(REV_DESIGN, rng.t_min)
        assert np.isfinite(folded.points).all()

    def test_nontrivial_at_half_range(self, rng):
        for _ in range(5):
            d = random_design(rng)
            r = parameter_range(d)
            t = 0.5 * (r.t_max if np.isfinite(r.t_max) else -r.t_min)
            base = deform(d, 0.0)
            moved = deform(d, t)
            assert max_dihedral_change(base, moved) > 1e-6
            assert not check_congruent(base, moved, tol=1e-7)


class TestDeformationState:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), frac=st.floats(0.05, 0.95))
    def test_state_invariants(self, seed, frac):
        rng = np.random.default_rng(seed)
        d = random_design(rng)
        r = parameter_range(d)
        hi = r.t_max if np.isfinite(r.t_max) else -r.t_min
        t = r.t_min + frac * (hi - r.t_min)
        if t == 0.0:
            return
        der = derive(d)
        st_ = deformation_state(d, t, der)
        assert np.allclose(st_.Ct**2, der.C**2 + t, rtol=1e-12)
        assert np.allclose(
            np.sin(st_.eta_t) * st_.Ct[:-1], der.C[:-1] * np.sin(der.eta), rtol=1e-10, atol=1e-12
        )
        assert np.allclose(
            np.sin(st_.theta_t) * st_.Ct[1:], der.C[1:] * np.sin(der.theta), rtol=1e-10, atol=1e-12
        )
        dz = np.diff(d.z)
        dzt = np.diff(st_.z_t)
        assert np.allclose(dzt**2, dz**2 - t * d.f0**2, rtol=1e-9, atol=1e-12)
        # sign preservation in the open range
        assert np.all(np.sign(dzt) == np.sign(dz))
        assert np.allclose(st_.k, st_.Ct / der.C, rtol=1e-15)


class TestTranslational:
    def test_identity(self, rng):
        data = random_translational_data(rng)
        moved = deform_translational(data, 0.0)
        from thedra.builders import build_translational

        assert np.allclose(moved.points, build_translational(data).points, atol=1e-14)

    def test_symmetric_cell_range(self):
        data = TranslationalData(x_row=[0.0, 1.0], x_col=[0.0, 1.0], y=[0.0, 1.0], z=[0.0, 1.0])
        r = translational_parameter_range(data)
        assert r.t_max == pytest.approx(0.5 * math.log(2.0), rel=1e-12)
        assert r.t_min == pytest.approx(-0.5 * math.log(2.0), rel=1e-12)
        flat = deform_translational(data, r.t_max)
        assert flat.points[0, 1, 2] == pytest.approx(0.0, abs=1e-12)

    def test_agrees_with_general_deformation(self, rng):
        for _ in range(5):
            data = random_translational_data(rng)
            d = translational_design(data)
            r = translational_parameter_range(data)
            for t in np.linspace(r.t_min, r.t_max, 7)[1:-1]:
                a = deform_translational(data, t)
                b = deform(d, t_additive_from_exponential(t))
                assert np.abs(a.points - b.points).max() < 1e-9

    def test_parameter_bridge_round_trip(self):
        for t in (-0.3, 0.0, 0.8):
            assert t_exponential_from_additive(t_additive_from_exponential(t)) == pytest.approx(t, rel=1e-14)

    def test_out_of_range_strip_index(self):
        data = TranslationalData(x_row=[0.0, 1.0], x_col=[0.0, 1.0], y=[0.0, 1.0], z=[0.0, 1.0])
        with pytest.raises(errors.OutOfRange) as exc:
            deform_translational(data, 1.0)
        assert exc.value.reason == "TrajectoryFlattening"
        assert exc.value.index == 1


class TestMiura:
    def test_flat_parameters(self):
        t_minus, t_plus = miura_flat_parameters(1.0, 1.0, 1.0, 1.0)
        assert t_plus == pytest.approx(math.log(math.sqrt(2.0)), abs=1e-15)
        assert t_minus == pytest.approx(-math.log(math.sqrt(2.0)), abs=1e-15)
        assert miura_flat_parameters(1.0, 1.0, 1.0, 0.0)[1] == 0.0
        assert miura_flat_parameters(1.0, 1.0, 1.0, 8.0)[1] > miura_flat_parameters(1.0, 1.0, 1.0, 2.0)[1]

    def test_flat_state_cell_lengths(self):
        # frozen closed forms for the unit cell
        data = miura_data(1.0, 1.0, 1.0, 1.0, 2, 2)
        _, t_plus = miura_flat_parameters(1.0, 1.0, 1.0, 1.0)
        moved = deform_translational_data(data, t_plus)
        a = moved.x_col[1] - moved.x_col[0]
        b = moved.y[1] - moved.y[0]
        c = moved.x_row[1] - moved.x_row[0]
        d = moved.z[1] - moved.z[0]
        assert a == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert b == pytest.approx(math.sqrt(1.5), abs=1e-12)
        assert c == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)
        assert d == pytest.approx(0.0, abs=1e-12)

    def test_flat_at_both_ends(self):
        data = miura_data(1.0, 1.0, 1.0, 1.0, 4, 4)
        t_minus, t_plus = miura_flat_parameters(1.0, 1.0, 1.0, 1.0)
        flat_z = deform_translational(data, t_plus)
        assert np.abs(flat_z.points[..., 2]).max() < 1e-12
        flat_y = deform_translational(data, t_minus)
        assert np.ptp(flat_y.points[..., 1]) < 1e-12


class TestMolding:
    def test_identity(self, rng):
        d = random_molding_design(rng)
        assert np.allclose(deform_molding(d, 0.0).points, build_thedron(d).points, atol=1e-12)

    def test_single_strip_frozen_values(self):
        eta = math.pi / 6
        d = DesignData(
            phi=[2 * eta], psi=[eta], f0=[0.25, 0.2], g0=[2.0], z=[0.0, 1.0, 1.5]
        )
        moved = deform_molding(d, 3.0)
        # sin of the deformed sector angle shrinks by sqrt(1 + t) = 2
        assert math.sin(eta) / math.sqrt(1.0 + 3.0) == pytest.approx(0.25, abs=1e-15)
        state = deformation_state(d, 3.0)
        assert math.sin(state.eta_t[0]) == pytest.approx(0.25, rel=1e-14)
        # ground-view leg lengths scale by the same factor
        base = build_thedron(d)
        moved_leg = np.linalg.norm(moved.points[0, 1, :2] - moved.points[0, 0, :2])
        base_leg = np.linalg.norm(base.points[0, 1, :2] - base.points[0, 0, :2])
        assert moved_leg == pytest.approx(2.0 * base_leg, rel=1e-12)

    def test_agrees_with_general_deformation(self, rng):
        for _ in range(5):
            d = random_molding_design(rng)
            for t in interior_t_samples(d, 5):
                a = deform_molding(d, t)
                b = deform(d, t)
                assert np.abs(a.points - b.points).max() < 1e-12

    def test_rejects_non_molding(self, rng):
        d = random_design(rng)
        der = derive(d)
        if np.allclose(der.eta, der.theta, atol=1e-9):
            return
        with pytest.raises(errors.NotMolding):
            deform_molding(d, 0.1)


class TestAxialRevolution:
    def test_axial_identity_and_agreement(self, rng):
        for _ in range(5):
            d, f00 = random_axial_design(rng)
            from thedra.builders import build_axial

            base = build_axial(d, f00)
            assert np.allclose(deform_axial(d, f00, 0.0).points, base.points, atol=1e-12)
            for t in interior_t_samples(d, 5):
                a = deform_axial(d, f00, t)
                assert check_isometric(base, a, tol=1e-9).passed
                b = deform(d, t)
                shift = a.points[0, 0] - b.points[0, 0]
                assert np.abs(b.points + shift - a.points).max() < 1e-9

    def test_revolution_identity_and_agreement(self, rng):
        for _ in range(5):
            F, phi, z = random_revolution_data(rng)
            d = revolution_design(F, phi, z)
            from thedra.builders import build_revolution

            assert np.allclose(
                deform_revolution(F, phi, z, 0.0).points,
                build_revolution(F, phi, z).points,
                atol=1e-12,
            )
            for t in interior_t_samples(d, 5):
                a = deform_revolution(F, phi, z, t)
                b = deform(d, t)
                shift = a.points[0, 0] - b.points[0, 0]
                assert np.abs(b.points + shift - a.points).max() < 1e-9

    def test_paraboloid_sweep_is_isometric(self):
        from thedra.presets import revolution_paraboloid_design

        d = revolution_paraboloid_design()
        base = deform(d, 0.0)
        for t in interior_t_samples(d, 5):
            rep = check_isometric(base, deform(d, t), tol=1e-9)
            assert rep.passed
        # radius scaling is monotone in t
        radii = [
            float(np.hypot(deform(d, t).points[0, -1, 0], deform(d, t).points[0, -1, 1]))
            for t in interior_t_samples(d, 5)
        ]
        assert all(r2 > r1 for r1, r2 in zip(radii, radii[1:]))


class TestParallelPairs:
    def test_axial_partner_satisfies_width_criterion(self, rng):
        for _ in range(5):
            d = random_design(rng)
            try:
                partner = parallel_axial(d)
            except errors.ConsecutiveParallelPlanes:
                continue
            der = derive(d)
            s = np.sin(der.eta + der.theta)
            expected = partner.g0[0] * s * np.cos(der.theta[0]) * der.C[1:] / (
                s[0] * np.cos(der.eta)
            )
            residual = np.abs(partner.g0 - expected) / np.maximum(np.abs(expected), 1e-12)
            assert residual.max() < 1e-12

    def test_axial_input_is_fixed_point(self, rng):
        d, f00 = random_axial_design(rng)
        partner = parallel_axial(d)
        assert np.allclose(partner.g0, d.g0, rtol=1e-12)

    def test_deformations_stay_parallel(self, rng):
        for _ in range(3):
            d = random_design(rng, m=3, n=3)
            try:
                partner = parallel_axial(d)
            except errors.ConsecutiveParallelPlanes:
                continue
            for t in interior_t_samples(d, 10):
                assert is_parallel(deform(d, t), deform(partner, t), tol=1e-9)

    def test_translated_copy_is_parallel(self, rng):
        d = random_design(rng)
        surf = build_thedron(d)
        moved = type(surf)(points=surf.points + np.array([1.0, -2.0, 3.0]), class_tag=surf.class_tag)
        assert is_parallel(surf, moved, tol=1e-12)

    def test_deformed_copy_is_not_parallel(self, rng):
        d = random_design(rng)
        r = parameter_range(d)
        t = 0.5 * (r.t_max if np.isfinite(r.t_max) else -r.t_min)
        assert not is_parallel(deform(d, 0.0), deform(d, t), tol=1e-6)

    def test_parallel_planes_rejected(self):
        # theta = -eta makes consecutive profile planes parallel
        d = DesignData(phi=[0.0, 0.7], psi=[0.3, 0.5], f0=[0.3, 0.2], g0=[1.0, 1.0], z=[0.0, 0.6, 1.3])
        with pytest.raises(errors.ConsecutiveParallelPlanes):
            parallel_axial(d)

    def test_shape_mismatch(self, rng):
        a = build_thedron(random_design(rng, m=2, n=2))
        b = build_thedron(random_design(rng, m=3, n=2))
        with pytest.raises(errors.ShapeMismatch):
            is_parallel(a, b)
