"""Physics unit tests: configuration, shots, collisions, integration."""

import json
import math
import random

import pytest

from conftest import cue_and_target
from cuepath.errors import (
    ConfigurationError,
    IllegalStateError,
    ShotWhileMovingError,
    SimulationOverflowError,
    ValidationError,
)
from cuepath.physics import (
    Ball,
    BallKind,
    BallState,
    ShotInput,
    Vec2,
    apply_shot,
    kinetic_energy,
    make_table,
    resolve_ball_collision,
    resolve_wall_collision,
    respot_cue,
    simulate_until_rest,
    step,
)


class TestVec2:
    def test_rejects_nan(self):
        with pytest.raises(ValidationError):
            Vec2(float("nan"), 0.0)

    def test_normalized_zero(self):
        with pytest.raises(ValidationError):
            Vec2(0.0, 0.0).normalized()


class TestMakeTable:
    def test_defaults(self):
        table = make_table()
        assert (table.width, table.height) == (2.0, 1.0)
        assert len(table.pocket_centers) == 6
        corners = {(0.0, 0.0), (2.0, 0.0), (0.0, 1.0), (2.0, 1.0)}
        mids = {(1.0, 0.0), (1.0, 1.0)}
        assert {(p.x, p.y) for p in table.pocket_centers} == corners | mids

    def test_pocket_radius_must_exceed_ball(self):
        with pytest.raises(ConfigurationError):
            make_table(pocket_radius=0.03, ball_radius=0.03)

    def test_override_echo(self):
        table = make_table(friction_decel=0.25)
        assert table.friction_decel == 0.25
        assert table.width == 2.0

    def test_unknown_override(self):
        with pytest.raises(ConfigurationError):
            make_table(spin=1.0)

    def test_tunneling_guard(self):
        with pytest.raises(ConfigurationError):
            make_table(fixed_dt=0.05)


class TestApplyShot:
    def test_full_power(self, table):
        balls = [Ball(id="cue", kind=BallKind.CUE, position=Vec2(0.5, 0.5),
                      velocity=Vec2(0.0, 0.0))]
        out = apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 1.0))
        assert out[0].velocity == Vec2(table.max_launch_speed, 0.0)

    def test_linearity(self, table):
        balls = [Ball(id="cue", kind=BallKind.CUE, position=Vec2(0.5, 0.5),
                      velocity=Vec2(0.0, 0.0))]
        out = apply_shot(table, balls, ShotInput(Vec2(0.0, 1.0), 0.5))
        assert out[0].velocity == Vec2(0.0, 0.5 * table.max_launch_speed)

    def test_other_balls_unchanged(self, table):
        balls = cue_and_target(vx=0.0)
        out = apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 0.3))
        assert out[1].velocity == Vec2(0.0, 0.0)
        assert out[1].position == balls[1].position

    def test_shot_while_moving(self, table):
        balls = cue_and_target(vx=1.0)
        with pytest.raises(ShotWhileMovingError):
            apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 1.0))

    def test_cue_off_table(self, table):
        balls = cue_and_target(vx=0.0)
        balls[0].state = BallState.POCKETED
        with pytest.raises(IllegalStateError):
            apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 1.0))

    def test_non_unit_direction_rejected(self):
        with pytest.raises(ValidationError):
            ShotInput(Vec2(1.0, 1.0), 0.5)
        with pytest.raises(ValidationError):
            ShotInput(Vec2(1.0, 0.0), 0.0)


class TestStep:
    def test_rest_is_fixed_point(self, table):
        balls = cue_and_target(vx=0.0)
        out = step(table, balls, table.fixed_dt)
        assert [b.to_dict() for b in out] == [b.to_dict() for b in balls]

    def test_constant_deceleration_kinematics(self):
        # speed 2.0, friction 0.5 -> rest after ~4.0 s and ~4.0 units (v^2/2a),
        # to within one integration step of discretization error.
        table = make_table(friction_decel=0.5, width=20.0, height=10.0)
        ball = Ball(id="cue", kind=BallKind.CUE, position=Vec2(2.0, 5.0),
                    velocity=Vec2(2.0, 0.0))
        rested, trace = simulate_until_rest(table, [ball])
        t_final = trace.frames[-1][0]
        assert abs(t_final - 4.0) < 0.05
        assert abs(len(trace.frames) - 4.0 / table.fixed_dt) < 15
        traveled = rested[0].position.x - 2.0
        assert abs(traveled - 4.0) < 2.0 * table.fixed_dt * 2.0

    def test_pocket_capture(self, table):
        ball = Ball(id="cue", kind=BallKind.CUE, position=Vec2(0.2, 0.2),
                    velocity=Vec2(-1.0, -1.0).scaled(1.0 / math.sqrt(2)))
        rested, trace = simulate_until_rest(table, [ball])
        assert rested[0].state is BallState.POCKETED
        assert rested[0].velocity == Vec2(0.0, 0.0)
        assert trace.pocket_events and trace.pocket_events[0][0] == "cue"

    def test_wrong_dt_rejected(self, table):
        with pytest.raises(ConfigurationError):
            step(table, cue_and_target(0.0), table.fixed_dt * 2)


class TestBallCollision:
    def _ball(self, bid, px, vx, vy=0.0):
        return Ball(id=bid, kind=BallKind.SKILL, position=Vec2(px, 0.5),
                    velocity=Vec2(vx, vy), event_id=bid)

    def test_head_on_elastic_swap(self, table):
        r = table.ball_radius
        a = self._ball("a", 0.5, +1.0)
        b = self._ball("b", 0.5 + 2 * r, -1.0)
        a2, b2 = resolve_ball_collision(a, b, 1.0, r)
        assert a2.velocity.x == pytest.approx(-1.0)
        assert b2.velocity.x == pytest.approx(+1.0)

    def test_newtons_cradle(self, table):
        r = table.ball_radius
        a = self._ball("a", 0.5, +2.0)
        b = self._ball("b", 0.5 + 2 * r, 0.0)
        a2, b2 = resolve_ball_collision(a, b, 1.0, r)
        assert a2.velocity.x == pytest.approx(0.0)
        assert b2.velocity.x == pytest.approx(2.0)

    def test_momentum_conserved_over_random_contacts(self, table):
        # Oracle: vector momentum sums before/after must match for e = 1.
        rng = random.Random(99)
        r = table.ball_radius
        for _ in range(1000):
            ang = rng.uniform(0.0, 2 * math.pi)
            dist = rng.uniform(0.5, 1.0) * 2 * r
            a = Ball(id="a", kind=BallKind.SKILL, event_id="a",
                     position=Vec2(1.0, 0.5),
                     velocity=Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)))
            b = Ball(id="b", kind=BallKind.SKILL, event_id="b",
                     position=Vec2(1.0 + dist * math.cos(ang), 0.5 + dist * math.sin(ang)),
                     velocity=Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)))
            before_p = a.velocity + b.velocity
            before_ke = kinetic_energy([a, b])
            a2, b2 = resolve_ball_collision(a, b, 1.0, r)
            after_p = a2.velocity + b2.velocity
            after_ke = kinetic_energy([a2, b2])
            scale = max(before_p.norm(), 1.0)
            assert (after_p - before_p).norm() <= 1e-9 * scale
            assert abs(after_ke - before_ke) <= 1e-9 * max(before_ke, 1.0)

    def test_separation_after_resolution(self, table):
        r = table.ball_radius
        a = self._ball("a", 0.5, 1.0)
        b = self._ball("b", 0.5 + r, 0.0)  # deeply overlapping
        a2, b2 = resolve_ball_collision(a, b, 1.0, r)
        assert (a2.position - b2.position).norm() == pytest.approx(2 * r)

    def test_coincident_centers_fall_back_to_x_axis(self, table):
        r = table.ball_radius
        a = self._ball("a", 0.5, 1.0)
        b = self._ball("b", 0.5, -1.0)
        b.position = Vec2(0.5, 0.5)
        a2, b2 = resolve_ball_collision(a, b, 1.0, r)
        assert b2.position.x - a2.position.x == pytest.approx(2 * r)

    def test_tangential_component_unchanged(self, table):
        r = table.ball_radius
        a = self._ball("a", 0.5, 1.0, vy=0.7)
        b = self._ball("b", 0.5 + 2 * r, 0.0, vy=-0.2)
        a2, b2 = resolve_ball_collision(a, b, 0.9, r)
        assert a2.velocity.y == pytest.approx(0.7)  # normal is x-aligned
        assert b2.velocity.y == pytest.approx(-0.2)


class TestWallCollision:
    def test_mirror_reflection(self, table):
        ball = Ball(id="cue", kind=BallKind.CUE, position=Vec2(0.01, 0.5),
                    velocity=Vec2(-3.0, 2.0))
        table_e1 = make_table(wall_restitution=1.0)
        out = resolve_wall_collision(ball, table_e1)
        assert (out.velocity.x, out.velocity.y) == (3.0, 2.0)
        assert out.position.x == table_e1.ball_radius

    def test_restitution_scaling(self):
        table = make_table(wall_restitution=0.8)
        ball = Ball(id="cue", kind=BallKind.CUE, position=Vec2(0.01, 0.5),
                    velocity=Vec2(-1.0, 0.0))
        out = resolve_wall_collision(ball, table)
        assert out.velocity.x == pytest.approx(0.8)

    def test_parallel_motion_unchanged(self, table):
        ball = Ball(id="cue", kind=BallKind.CUE, position=Vec2(table.ball_radius, 0.5),
                    velocity=Vec2(0.0, 1.5))
        out = resolve_wall_collision(ball, table)
        assert out.velocity == Vec2(0.0, 1.5)


class TestSimulateUntilRest:
    def test_all_at_rest_returns_immediately(self, table):
        balls = cue_and_target(vx=0.0)
        rested, trace = simulate_until_rest(table, balls)
        assert trace.frames == [] and trace.pocket_events == []
        assert [b.to_dict() for b in rested] == [b.to_dict() for b in balls]

    def test_determinism_byte_identical_traces(self, table):
        def run():
            balls = cue_and_target(vx=0.0)
            out = apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 1.0))
            rested, trace = simulate_until_rest(table, out)
            return json.dumps(trace.to_dict(), sort_keys=True)

        assert run() == run()

    def test_containment_every_frame(self, table):
        balls = cue_and_target(vx=0.0)
        out = apply_shot(table, balls, ShotInput(Vec2(0.6, 0.8), 1.0))
        seen = []
        simulate_until_rest(table, out, on_step=lambda t, bs: seen.append(bs))
        r = table.ball_radius
        for frame_balls in seen:
            for b in frame_balls:
                if b.state is BallState.ON_TABLE:
                    assert r <= b.position.x <= table.width - r
                    assert r <= b.position.y <= table.height - r

    def test_energy_monotone_and_separation_at_rest(self, table):
        balls = cue_and_target(vx=0.0)
        out = apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 0.8))
        energies = []
        rested, _ = simulate_until_rest(table, out, on_step=lambda t, bs: energies.append(kinetic_energy(bs)))
        assert all(b2 <= b1 + 1e-12 for b1, b2 in zip(energies, energies[1:]))
        on = [b for b in rested if b.state is BallState.ON_TABLE]
        for i in range(len(on)):
            for j in range(i + 1, len(on)):
                assert (on[i].position - on[j].position).norm() >= 2 * table.ball_radius - 1e-6

    def test_overflow_guard(self):
        # Effectively frictionless, perfectly elastic: never settles.
        table = make_table(friction_decel=1e-12, wall_restitution=1.0,
                           ball_restitution=1.0, max_sim_seconds=2.0)
        ball = Ball(id="cue", kind=BallKind.CUE, position=Vec2(1.0, 0.33),
                    velocity=Vec2(1.0, 0.0))
        with pytest.raises(SimulationOverflowError):
            simulate_until_rest(table, [ball], record_frames=False)

    def test_trace_times_strictly_increasing(self, table):
        balls = cue_and_target(vx=0.0)
        out = apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 0.4))
        _, trace = simulate_until_rest(table, out)
        times = [t for t, _ in trace.frames]
        assert all(t2 > t1 for t1, t2 in zip(times, times[1:]))

    def test_downsampled_keeps_last_frame(self, table):
        balls = cue_and_target(vx=0.0)
        out = apply_shot(table, balls, ShotInput(Vec2(1.0, 0.0), 0.7))
        _, trace = simulate_until_rest(table, out)
        thin = trace.downsampled(60.0, table.fixed_dt)
        assert thin.frames[-1] == trace.frames[-1]
        assert len(thin.frames) < len(trace.frames) / 2
        assert thin.pocket_events == trace.pocket_events


class TestRespot:
    def test_respot_to_head_spot(self, table):
        balls = cue_and_target(vx=0.0)
        balls[0].state = BallState.POCKETED
        out = respot_cue(table, balls)
        cue = out[0]
        assert cue.state is BallState.ON_TABLE
        assert (cue.position.x, cue.position.y) == (table.width / 4, table.height / 2)

    def test_respot_nudges_when_occupied(self, table):
        spot = Vec2(table.width / 4, table.height / 2)
        blocker = Ball(id="t1", kind=BallKind.SKILL, position=spot,
                       velocity=Vec2(0.0, 0.0), event_id="t1")
        cue = Ball(id="cue", kind=BallKind.CUE, position=Vec2(1.5, 0.5),
                   velocity=Vec2(0.0, 0.0), state=BallState.POCKETED)
        out = respot_cue(table, [cue, blocker])
        moved = out[0]
        assert moved.position.y > spot.y
        assert (moved.position - spot).norm() >= 2 * table.ball_radius
