import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from guideval.core import DirectionAngle, SimplifiedDirection
from guideval.criterion import (
    DEFAULT_CONFIG,
    CriterionConfig,
    angle_deviation,
    criterion_curve,
    curve_angles,
    load_config,
    plateau_distance,
    quantize,
    soft_accuracy,
    soft_accuracy_sweep,
)
from guideval.errors import ValidationError

D = SimplifiedDirection

ANGLES_001 = np.round(np.arange(-9000, 9001) * 0.01, 2)  # 18001 points, exact hundredths


def reference_vector(direction: SimplifiedDirection) -> np.ndarray:
    fn = oracle.REFERENCE_CURVES[direction.token]
    return np.array([fn(a) for a in ANGLES_001])


class TestOracleAgreement:
    @pytest.mark.parametrize("direction", list(D), ids=[d.token for d in D])
    def test_sweep_matches_reference_to_1e9(self, direction):
        ours = soft_accuracy_sweep(direction, ANGLES_001)
        theirs = reference_vector(direction)
        worst = float(np.max(np.abs(ours - theirs)))
        assert worst <= 1e-9, f"max deviation {worst} at {ANGLES_001[int(np.argmax(np.abs(ours - theirs)))]}"

    def test_scalar_agrees_with_vector_path(self):
        # the two paths use different exponential implementations that may
        # disagree in the final bit; agreement to 1e-14 relative is the contract
        rng = random.Random(7)
        for _ in range(300):
            a = rng.uniform(-90.0, 90.0)
            d = D(rng.randrange(5))
            scalar = float(soft_accuracy(d, a))
            vector = float(soft_accuracy_sweep(d, np.array([a]))[0])
            assert math.isclose(scalar, vector, rel_tol=1e-14, abs_tol=0.0)


class TestWorkedExample:
    def test_sharp_left_at_49_9(self):
        got = float(soft_accuracy(D.SHARP_LEFT, 49.9))
        assert got == pytest.approx(math.exp(-0.03 * 0.01), abs=1e-6)
        assert got == pytest.approx(0.99970, abs=1e-5)

    def test_sharp_left_at_25_is_exactly_zero(self):
        assert float(soft_accuracy(D.SHARP_LEFT, 25.0)) == 0.0

    def test_straight_at_25(self):
        assert float(soft_accuracy(D.STRAIGHT, 25.0)) == pytest.approx(
            math.exp(-0.75), abs=1e-12
        )


PLATEAUS = {
    D.SHARP_RIGHT: (-90.0, -50.0),
    D.SLIGHT_RIGHT: (-50.0, -20.0),
    D.STRAIGHT: (-20.0, 20.0),
    D.SLIGHT_LEFT: (20.0, 50.0),
    D.SHARP_LEFT: (50.0, 90.0),
}


class TestPlateauAndCutoff:
    def test_plateau_bounds_exposed(self):
        for d, interval in PLATEAUS.items():
            assert DEFAULT_CONFIG.plateau(d) == interval

    @pytest.mark.parametrize("direction", list(D), ids=[d.token for d in D])
    def test_exactly_one_on_closed_plateau(self, direction):
        lo, hi = PLATEAUS[direction]
        rng = random.Random(11)
        samples = [lo, hi] + [rng.uniform(lo, hi) for _ in range(2000)]
        for a in samples:
            assert float(soft_accuracy(direction, a)) == 1.0

    @pytest.mark.parametrize("direction", list(D), ids=[d.token for d in D])
    def test_exactly_zero_at_and_beyond_cutoff(self, direction):
        lo, hi = PLATEAUS[direction]
        rng = random.Random(12)
        samples = []
        if lo - 15.0 >= -90.0:
            samples.append(lo - 15.0)
            samples.extend(rng.uniform(-90.0, lo - 15.0) for _ in range(1000))
        if hi + 15.0 <= 90.0:
            samples.append(hi + 15.0)
            samples.extend(rng.uniform(hi + 15.0, 90.0) for _ in range(1000))
        assert samples, "every direction has a zero region on this config"
        for a in samples:
            assert float(soft_accuracy(direction, a)) == 0.0

    @pytest.mark.parametrize("direction", list(D), ids=[d.token for d in D])
    def test_strictly_monotone_on_ramps(self, direction):
        lo, hi = PLATEAUS[direction]
        rng = random.Random(13)
        for _ in range(2000):
            d1, d2 = sorted((rng.uniform(1e-6, 15.0), rng.uniform(1e-6, 15.0)))
            if d1 == d2:
                continue
            # try the ramp on each side that exists inside the domain
            if lo - d2 >= -90.0 and lo > -90.0:
                assert float(soft_accuracy(direction, lo - d1)) > float(
                    soft_accuracy(direction, lo - d2)
                )
            if hi + d2 <= 90.0 and hi < 90.0:
                assert float(soft_accuracy(direction, hi + d1)) > float(
                    soft_accuracy(direction, hi + d2)
                )

    def test_mirror_symmetry_and_even_straight(self):
        rng = random.Random(14)
        for _ in range(10000):
            a = rng.uniform(-90.0, 90.0)
            assert float(soft_accuracy(D.SLIGHT_LEFT, a)) == float(
                soft_accuracy(D.SLIGHT_RIGHT, -a)
            )
            assert float(soft_accuracy(D.SHARP_LEFT, a)) == float(
                soft_accuracy(D.SHARP_RIGHT, -a)
            )
            assert float(soft_accuracy(D.STRAIGHT, a)) == float(
                soft_accuracy(D.STRAIGHT, -a)
            )

    def test_cutoff_is_a_jump_not_a_fade(self):
        # the decay is truncated: just inside the cutoff the value is still
        # about exp(-6.75), not epsilon
        inside = float(soft_accuracy(D.STRAIGHT, 34.999999))
        assert inside == pytest.approx(math.exp(-0.03 * 15.0**2), rel=1e-3)
        assert float(soft_accuracy(D.STRAIGHT, 35.0)) == 0.0

    @given(st.floats(min_value=-90.0, max_value=90.0, allow_nan=False))
    @settings(max_examples=300, deadline=None)
    def test_range_is_unit_interval(self, a):
        for d in D:
            assert 0.0 <= float(soft_accuracy(d, a)) <= 1.0


class TestQuantize:
    @pytest.mark.parametrize(
        "angle,expected",
        [
            (-90.0, D.SHARP_RIGHT),
            (-50.0000001, D.SHARP_RIGHT),
            (-50.0, D.SLIGHT_RIGHT),
            (-20.0, D.STRAIGHT),
            (0.0, D.STRAIGHT),
            (19.999999, D.STRAIGHT),
            (20.0, D.SLIGHT_LEFT),
            (49.999999, D.SLIGHT_LEFT),
            (50.0, D.SHARP_LEFT),
            (90.0, D.SHARP_LEFT),
        ],
    )
    def test_bin_boundaries(self, angle, expected):
        assert quantize(angle) is expected

    def test_rejects_out_of_domain(self):
        with pytest.raises(ValueError):
            quantize(90.001)

    def test_monotone_over_sorted_angles(self):
        rng = random.Random(15)
        angles = sorted(rng.uniform(-90.0, 90.0) for _ in range(5000))
        codes = [int(quantize(a)) for a in angles]
        assert codes == sorted(codes)

    def test_quantize_soft_consistency_10k(self):
        rng = random.Random(16)
        for _ in range(10000):
            a = rng.uniform(-90.0, 90.0)
            assert float(soft_accuracy(quantize(a), a)) == 1.0

    def test_consistency_holds_on_non_default_config(self):
        cfg = CriterionConfig(
            straight_halfwidth=15.0,
            slight_outer=45.0,
            full_range=90.0,
            ramp_width=10.0,
            gaussian_k=0.05,
        )
        rng = random.Random(17)
        for _ in range(2000):
            a = rng.uniform(-90.0, 90.0)
            assert float(soft_accuracy(quantize(a, cfg), a, cfg)) == 1.0


class TestHelpers:
    def test_angle_deviation_is_absolute_difference(self):
        assert angle_deviation(DirectionAngle(30.0), DirectionAngle(-15.0)).degrees == 45.0
        assert angle_deviation(10.0, 25.0).degrees == 15.0
        assert angle_deviation(-90.0, 90.0).degrees == 180.0

    def test_plateau_distance(self):
        assert plateau_distance(D.STRAIGHT, 25.0) == 5.0
        assert plateau_distance(D.STRAIGHT, -25.0) == 5.0
        assert plateau_distance(D.STRAIGHT, 7.0) == 0.0
        assert plateau_distance(D.SHARP_LEFT, 35.0) == 15.0
        # sharp plateaus have no outer ramp: nothing in the domain is "past" them
        assert plateau_distance(D.SHARP_LEFT, 90.0) == 0.0
        assert plateau_distance(D.SHARP_RIGHT, -90.0) == 0.0


class TestCurves:
    def test_curve_angles_step_1(self):
        angles = curve_angles(1.0)
        assert len(angles) == 181
        assert angles[0] == -90.0
        assert angles[-1] == 90.0

    def test_curve_angles_uneven_step_still_ends_at_90(self):
        angles = curve_angles(0.7)
        assert angles[0] == -90.0
        assert angles[-1] == 90.0
        assert angles.count(90.0) == 1
        assert all(b > a for a, b in zip(angles, angles[1:]))

    def test_curve_angles_rejects_bad_step(self):
        for bad in (0.0, -1.0, 90.1):
            with pytest.raises(ValidationError):
                curve_angles(bad)

    def test_default_curves_span_full_score_range(self):
        for d in D:
            values = [v for _, v in criterion_curve(d, 1.0)]
            assert len(values) == 181
            assert max(values) == 1.0
            assert min(values) == 0.0

    def test_sharp_left_curve_mirrors_sharp_right(self):
        left = criterion_curve(D.SHARP_LEFT, 1.0)
        right = criterion_curve(D.SHARP_RIGHT, 1.0)
        mirrored = [(-a, v) for a, v in reversed(right)]
        assert [v for _, v in left] == [v for _, v in mirrored]
        assert [a for a, _ in left] == [a for a, _ in mirrored]

    def test_straight_curve_is_even(self):
        samples = dict(criterion_curve(D.STRAIGHT, 1.0))
        for a in range(0, 91):
            assert samples[float(a)] == samples[float(-a)]


class TestCriterionConfig:
    def test_defaults(self):
        cfg = DEFAULT_CONFIG
        assert (cfg.straight_halfwidth, cfg.slight_outer, cfg.full_range) == (20.0, 50.0, 90.0)
        assert (cfg.ramp_width, cfg.gaussian_k) == (15.0, 0.03)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(straight_halfwidth=0.0),
            dict(straight_halfwidth=50.0),  # not < slight_outer
            dict(slight_outer=95.0),  # not < full_range
            dict(ramp_width=0.0),
            dict(ramp_width=31.0),  # wider than the slight plateau
            dict(gaussian_k=0.0),
            dict(gaussian_k=-0.01),
        ],
    )
    def test_rejects_inconsistent_geometry(self, kwargs):
        with pytest.raises(ValidationError):
            CriterionConfig(**kwargs)

    def test_mapping_round_trip(self):
        cfg = CriterionConfig(ramp_width=10.0, gaussian_k=0.05)
        again = CriterionConfig.from_mapping(cfg.to_mapping())
        assert again == cfg

    def test_from_mapping_fills_defaults(self):
        cfg = CriterionConfig.from_mapping({"ramp_width": 5.0})
        assert cfg.ramp_width == 5.0
        assert cfg.straight_halfwidth == 20.0

    def test_from_mapping_rejects_unknown_keys(self):
        with pytest.raises(ValidationError):
            CriterionConfig.from_mapping({"rampwidth": 5.0})

    def test_from_mapping_rejects_non_numbers(self):
        with pytest.raises(ValidationError):
            CriterionConfig.from_mapping({"ramp_width": "wide"})

    def test_load_config_file(self, tmp_path):
        path = tmp_path / "criterion.json"
        path.write_text(json.dumps({"gaussian_k": 0.06}))
        cfg = load_config(path)
        assert cfg.gaussian_k == 0.06
        assert cfg.full_range == 90.0

    def test_load_config_rejects_malformed_json(self, tmp_path):
        path = tmp_path / "criterion.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            load_config(path)


class TestSweepValidation:
    def test_sweep_rejects_out_of_domain_angles(self):
        with pytest.raises(ValidationError):
            soft_accuracy_sweep(D.STRAIGHT, np.array([0.0, 91.0]))

    def test_sweep_rejects_nan(self):
        with pytest.raises(ValidationError):
            soft_accuracy_sweep(D.STRAIGHT, np.array([np.nan]))
