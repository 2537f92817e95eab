"""Deterministic 2D billiards simulation.

Fixed-step semi-implicit Euler integration with constant-deceleration
friction, equal-mass impulse collisions, restitution-scaled wall rebounds
and radius-based pocket capture. Everything here is a pure function of the
input state: no RNG, no wall clock, no shared mutable state, so identical
inputs always produce identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Optional

from .errors import (
    ConfigurationError,
    IllegalStateError,
    ShotWhileMovingError,
    SimulationOverflowError,
    ValidationError,
)

# Default table tuning (table-units; ~2:1 real pool proportions, sized so a
# full-power shot crosses the table several times before friction stops it).
DEFAULT_WIDTH = 2.0
DEFAULT_HEIGHT = 1.0
DEFAULT_BALL_RADIUS = 0.03
DEFAULT_POCKET_RADIUS = 0.055
DEFAULT_FRICTION_DECEL = 0.4  # units/s^2
DEFAULT_BALL_RESTITUTION = 0.95
DEFAULT_WALL_RESTITUTION = 0.85
DEFAULT_MAX_LAUNCH_SPEED = 3.0  # units/s at drag_fraction 1.0
DEFAULT_REST_SPEED_EPSILON = 0.01  # units/s
DEFAULT_FIXED_DT = 1.0 / 240.0  # s
DEFAULT_MAX_SIM_SECONDS = 60.0  # non-termination guard (simulated time)

UNIT_TOLERANCE = 1e-9  # |direction| must be 1 within this


@dataclass(frozen=True)
class Vec2:
    """2D vector in table units. Components are always finite."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"non-finite vector components ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def normalized(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise ValidationError("cannot normalize zero vector")
        return Vec2(self.x / n, self.y / n)


class BallKind(str, Enum):
    CUE = "Cue"
    MILESTONE = "Milestone"
    SKILL = "Skill"
    RANDOM = "Random"


class BallState(str, Enum):
    ON_TABLE = "OnTable"
    POCKETED = "Pocketed"
    DISCARDED = "Discarded"


@dataclass
class Ball:
    """One ball. Non-cue balls reference the career event they stand for."""

    id: str
    kind: BallKind
    position: Vec2
    velocity: Vec2
    state: BallState = BallState.ON_TABLE
    event_id: Optional[str] = None

    def __post_init__(self):
        if self.kind is BallKind.CUE and self.event_id is not None:
            raise ValidationError("cue ball must not carry an event id")
        if self.kind is not BallKind.CUE and not self.event_id:
            raise ValidationError(f"{self.kind.value} ball requires an event id")

    def speed(self) -> float:
        return self.velocity.norm()

    def copy(self) -> "Ball":
        return replace(self)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "x": self.position.x,
            "y": self.position.y,
            "vx": self.velocity.x,
            "vy": self.velocity.y,
            "state": self.state.value,
            "event_id": self.event_id,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Ball":
        return cls(
            id=d["id"],
            kind=BallKind(d["kind"]),
            position=Vec2(d["x"], d["y"]),
            velocity=Vec2(d["vx"], d["vy"]),
            state=BallState(d["state"]),
            event_id=d.get("event_id"),
        )


def _default_pockets(width: float, height: float) -> tuple[Vec2, ...]:
    """Four corner pockets plus the midpoints of the two long sides."""
    return (
        Vec2(0.0, 0.0),
        Vec2(width / 2.0, 0.0),
        Vec2(width, 0.0),
        Vec2(0.0, height),
        Vec2(width / 2.0, height),
        Vec2(width, height),
    )


@dataclass(frozen=True)
class Table:
    width: float = DEFAULT_WIDTH
    height: float = DEFAULT_HEIGHT
    pocket_centers: tuple[Vec2, ...] = field(
        default_factory=lambda: _default_pockets(DEFAULT_WIDTH, DEFAULT_HEIGHT)
    )
    pocket_radius: float = DEFAULT_POCKET_RADIUS
    ball_radius: float = DEFAULT_BALL_RADIUS
    friction_decel: float = DEFAULT_FRICTION_DECEL
    ball_restitution: float = DEFAULT_BALL_RESTITUTION
    wall_restitution: float = DEFAULT_WALL_RESTITUTION
    rest_speed_epsilon: float = DEFAULT_REST_SPEED_EPSILON
    fixed_dt: float = DEFAULT_FIXED_DT
    max_launch_speed: float = DEFAULT_MAX_LAUNCH_SPEED
    max_sim_seconds: float = DEFAULT_MAX_SIM_SECONDS

    def head_spot(self) -> Vec2:
        return Vec2(self.width / 4.0, self.height / 2.0)

    def foot_spot(self) -> Vec2:
        return Vec2(3.0 * self.width / 4.0, self.height / 2.0)


def make_table(**overrides) -> Table:
    """Build a table from the defaults with validated overrides.

    Pocket centers are re-derived from width/height unless given explicitly.
    """
    unknown = set(overrides) - {f for f in Table.__dataclass_fields__}
    if unknown:
        raise ConfigurationError(f"unknown table overrides: {sorted(unknown)}")
    if "pocket_centers" not in overrides and ("width" in overrides or "height" in overrides):
        overrides["pocket_centers"] = _default_pockets(
            overrides.get("width", DEFAULT_WIDTH), overrides.get("height", DEFAULT_HEIGHT)
        )
    if "pocket_centers" in overrides:
        overrides["pocket_centers"] = tuple(overrides["pocket_centers"])
    table = Table(**overrides)

    if table.width <= 0 or table.height <= 0:
        raise ConfigurationError("table dimensions must be positive")
    if table.ball_radius <= 0:
        raise ConfigurationError("ball_radius must be positive")
    if table.pocket_radius <= table.ball_radius:
        raise ConfigurationError("pocket_radius must exceed ball_radius")
    if len(table.pocket_centers) != 6:
        raise ConfigurationError("exactly 6 pockets required")
    if table.friction_decel <= 0:
        raise ConfigurationError("friction_decel must be positive")
    if not (0.0 <= table.ball_restitution <= 1.0 and 0.0 <= table.wall_restitution <= 1.0):
        raise ConfigurationError("restitutions must lie in [0, 1]")
    if table.fixed_dt <= 0 or table.rest_speed_epsilon <= 0 or table.max_launch_speed <= 0:
        raise ConfigurationError("fixed_dt, rest_speed_epsilon, max_launch_speed must be positive")
    # Anti-tunneling bound: fastest ball must move < r/2 per step.
    if table.max_launch_speed * table.fixed_dt >= table.ball_radius / 2.0:
        raise ConfigurationError("fixed_dt too large for max_launch_speed (tunneling risk)")
    if table.max_sim_seconds <= 0:
        raise ConfigurationError("max_sim_seconds must be positive")
    return table


@dataclass(frozen=True)
class ShotInput:
    """Strike direction (unit vector) and drag strength in (0, 1]."""

    direction: Vec2
    drag_fraction: float

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > UNIT_TOLERANCE:
            raise ValidationError("shot direction must be a unit vector")
        if not (0.0 < self.drag_fraction <= 1.0):
            raise ValidationError("drag_fraction must lie in (0, 1]")


@dataclass
class FrameTrace:
    """Per-step ball positions plus pocket captures, in simulation order.

    Serialized shape (consumed by the service and UI):
      {"frames": [{"t": s, "balls": [{"id", "x", "y"}, ...]}, ...],
       "pocket_events": [{"ball_id", "pocket_index", "t"}, ...]}
    """

    frames: list[tuple[float, tuple[tuple[str, float, float], ...]]] = field(default_factory=list)
    pocket_events: list[tuple[str, int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "frames": [
                {"t": t, "balls": [{"id": i, "x": x, "y": y} for (i, x, y) in snap]}
                for (t, snap) in self.frames
            ],
            "pocket_events": [
                {"ball_id": b, "pocket_index": p, "t": t} for (b, p, t) in self.pocket_events
            ],
        }

    def downsampled(self, frames_per_second: float, fixed_dt: float) -> "FrameTrace":
        """Thin the frame list to ~frames_per_second, keeping the final frame."""
        if not self.frames:
            return FrameTrace([], list(self.pocket_events))
        stride = max(1, round(1.0 / (frames_per_second * fixed_dt)))
        kept = self.frames[::stride]
        if kept[-1] is not self.frames[-1]:
            kept.append(self.frames[-1])
        return FrameTrace(kept, list(self.pocket_events))


def kinetic_energy(balls: Iterable[Ball]) -> float:
    """Total kinetic energy for unit-mass balls (only OnTable balls move)."""
    return sum(0.5 * b.velocity.dot(b.velocity) for b in balls if b.state is BallState.ON_TABLE)


def balls_at_rest(balls: Iterable[Ball], epsilon: float) -> bool:
    return all(b.speed() < epsilon for b in balls if b.state is BallState.ON_TABLE)


def apply_shot(table: Table, balls: list[Ball], shot: ShotInput) -> list[Ball]:
    """Set the cue velocity from the shot; all other balls untouched."""
    cue = next((b for b in balls if b.kind is BallKind.CUE), None)
    if cue is None or cue.state is not BallState.ON_TABLE:
        raise IllegalStateError("cue ball is not on the table")
    if not balls_at_rest(balls, table.rest_speed_epsilon):
        raise ShotWhileMovingError("balls are still moving")
    out = [b.copy() for b in balls]
    speed = shot.drag_fraction * table.max_launch_speed
    for b in out:
        if b.kind is BallKind.CUE:
            b.velocity = shot.direction.scaled(speed)
    return out


def resolve_ball_collision(a: Ball, b: Ball, restitution: float, ball_radius: float) -> tuple[Ball, Ball]:
    """Equal-mass impulse exchange along the contact normal.

    Positions are pushed apart symmetrically to exactly 2r along the normal;
    tangential velocity components are untouched. Coincident centers fall
    back to a +x contact normal so the outcome stays deterministic.
    """
    a, b = a.copy(), b.copy()
    dx = b.position.x - a.position.x
    dy = b.position.y - a.position.y
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        nx, ny = 1.0, 0.0
    else:
        nx, ny = dx / dist, dy / dist

    # Symmetric push-out to contact distance.
    overlap = 2.0 * ball_radius - dist
    if overlap > 0.0:
        half = overlap / 2.0
        a.position = Vec2(a.position.x - nx * half, a.position.y - ny * half)
        b.position = Vec2(b.position.x + nx * half, b.position.y + ny * half)

    # Impulse only when approaching along the normal.
    approach = (a.velocity.x - b.velocity.x) * nx + (a.velocity.y - b.velocity.y) * ny
    if approach > 0.0:
        j = (1.0 + restitution) / 2.0 * approach
        a.velocity = Vec2(a.velocity.x - j * nx, a.velocity.y - j * ny)
        b.velocity = Vec2(b.velocity.x + j * nx, b.velocity.y + j * ny)
    return a, b


def resolve_wall_collision(ball: Ball, table: Table) -> Ball:
    """Reflect the outward normal velocity component and clamp inside bounds."""
    ball = ball.copy()
    r = table.ball_radius
    e = table.wall_restitution
    px, py = ball.position.x, ball.position.y
    vx, vy = ball.velocity.x, ball.velocity.y
    if px < r:
        px = r
        if vx < 0.0:
            vx = -vx * e
    elif px > table.width - r:
        px = table.width - r
        if vx > 0.0:
            vx = -vx * e
    if py < r:
        py = r
        if vy < 0.0:
            vy = -vy * e
    elif py > table.height - r:
        py = table.height - r
        if vy > 0.0:
            vy = -vy * e
    ball.position = Vec2(px, py)
    ball.velocity = Vec2(vx, vy)
    return ball


class _SimState:
    """Mutable parallel-array view of the on-table balls, sorted by id.

    Collision pairs iterate i<j over this ordering, which realizes the
    "ascending (id, id), at most once per pair per step" rule.
    """

    __slots__ = ("balls", "order", "px", "py", "vx", "vy", "on_table", "displaced")

    def __init__(self, balls: list[Ball]):
        self.balls = [b.copy() for b in balls]
        self.order = sorted(range(len(self.balls)), key=lambda i: self.balls[i].id)
        self.px = [self.balls[i].position.x for i in self.order]
        self.py = [self.balls[i].position.y for i in self.order]
        self.vx = [self.balls[i].velocity.x for i in self.order]
        self.vy = [self.balls[i].velocity.y for i in self.order]
        self.on_table = [self.balls[i].state is BallState.ON_TABLE for i in self.order]
        self.displaced = [False] * len(self.order)

    def ball_at(self, slot: int) -> Ball:
        return self.balls[self.order[slot]]

    def export(self) -> list[Ball]:
        for slot, idx in enumerate(self.order):
            ball = self.balls[idx]
            ball.position = Vec2(self.px[slot], self.py[slot])
            ball.velocity = Vec2(self.vx[slot], self.vy[slot])
        return [b.copy() for b in self.balls]

    def snapshot_positions(self) -> tuple[tuple[str, float, float], ...]:
        return tuple(
            (self.ball_at(s).id, self.px[s], self.py[s])
            for s in range(len(self.order))
            if self.on_table[s]
        )


def _step_sim(state: _SimState, table: Table) -> list[tuple[int, int]]:
    """Advance one fixed step in place. Returns (slot, pocket_index) captures.

    Phase order: friction + move, ball-ball pairs (ascending id), walls,
    pocket capture.
    """
    n = len(state.order)
    px, py, vx, vy = state.px, state.py, state.vx, state.vy
    on = state.on_table
    dt = table.fixed_dt
    decel = table.friction_decel * dt
    r = table.ball_radius
    two_r = 2.0 * r
    contact_sq = two_r * two_r
    w, h = table.width, table.height
    e_ball = table.ball_restitution
    e_wall = table.wall_restitution

    # Friction then move with the post-friction velocity (semi-implicit).
    moving = [False] * n
    for i in range(n):
        if not on[i]:
            continue
        sx, sy = vx[i], vy[i]
        if sx == 0.0 and sy == 0.0:
            continue
        speed = math.hypot(sx, sy)
        new_speed = speed - decel
        if new_speed <= 0.0:
            vx[i] = vy[i] = 0.0
            continue
        k = new_speed / speed
        vx[i] = sx * k
        vy[i] = sy * k
        px[i] += vx[i] * dt
        py[i] += vy[i] * dt
        moving[i] = True

    # Ball-ball contacts, single ascending pass. Pairs where neither side
    # moved nor was displaced recently cannot have started overlapping.
    was_displaced = state.displaced
    displaced_now = [False] * n
    for i in range(n - 1):
        if not on[i]:
            continue
        for j in range(i + 1, n):
            if not on[j]:
                continue
            if not (moving[i] or moving[j] or was_displaced[i] or was_displaced[j]
                    or displaced_now[i] or displaced_now[j]):
                continue
            dx = px[j] - px[i]
            dy = py[j] - py[i]
            d_sq = dx * dx + dy * dy
            if d_sq >= contact_sq:
                continue
            dist = math.sqrt(d_sq)
            if dist == 0.0:
                nx, ny = 1.0, 0.0
            else:
                nx, ny = dx / dist, dy / dist
            half = (two_r - dist) / 2.0
            px[i] -= nx * half
            py[i] -= ny * half
            px[j] += nx * half
            py[j] += ny * half
            displaced_now[i] = displaced_now[j] = True
            approach = (vx[i] - vx[j]) * nx + (vy[i] - vy[j]) * ny
            if approach > 0.0:
                imp = (1.0 + e_ball) / 2.0 * approach
                vx[i] -= imp * nx
                vy[i] -= imp * ny
                vx[j] += imp * nx
                vy[j] += imp * ny
    state.displaced = displaced_now

    # Walls: reflect outward normal component, clamp inside bounds.
    for i in range(n):
        if not on[i]:
            continue
        if px[i] < r:
            px[i] = r
            if vx[i] < 0.0:
                vx[i] = -vx[i] * e_wall
        elif px[i] > w - r:
            px[i] = w - r
            if vx[i] > 0.0:
                vx[i] = -vx[i] * e_wall
        if py[i] < r:
            py[i] = r
            if vy[i] < 0.0:
                vy[i] = -vy[i] * e_wall
        elif py[i] > h - r:
            py[i] = h - r
            if vy[i] > 0.0:
                vy[i] = -vy[i] * e_wall

    # Pocket capture; only balls near a rail can possibly be in reach.
    captures: list[tuple[int, int]] = []
    pr = table.pocket_radius
    pr_sq = pr * pr
    for i in range(n):
        if not on[i]:
            continue
        if pr < px[i] < w - pr and pr < py[i] < h - pr:
            continue
        for p_idx, center in enumerate(table.pocket_centers):
            dx = px[i] - center.x
            dy = py[i] - center.y
            if dx * dx + dy * dy <= pr_sq:
                on[i] = False
                vx[i] = vy[i] = 0.0
                ball = state.ball_at(i)
                ball.state = BallState.POCKETED
                captures.append((i, p_idx))
                break
    return captures


def step(table: Table, balls: list[Ball], dt: float) -> list[Ball]:
    """One fixed integration step: friction, motion, collisions, pockets."""
    if dt != table.fixed_dt:
        raise ConfigurationError("step dt must equal table.fixed_dt")
    state = _SimState(balls)
    _step_sim(state, table)
    return state.export()


def simulate_until_rest(
    table: Table,
    balls: list[Ball],
    *,
    record_frames: bool = True,
    on_step: Optional[Callable[[float, list[Ball]], None]] = None,
) -> tuple[list[Ball], FrameTrace]:
    """Step at fixed_dt until every on-table ball is below rest speed.

    The trace holds the initial frame plus one frame per step and every
    pocket capture in order. Sub-epsilon residual velocities are zeroed on
    exit so the final state is a fixed point for the next shot.
    """
    eps = table.rest_speed_epsilon
    trace = FrameTrace()
    if balls_at_rest(balls, eps):
        return [b.copy() for b in balls], trace

    state = _SimState(balls)
    if record_frames:
        trace.frames.append((0.0, state.snapshot_positions()))

    max_steps = int(math.ceil(table.max_sim_seconds / table.fixed_dt))
    eps_sq = eps * eps
    t = 0.0
    for step_no in range(1, max_steps + 1):
        t = step_no * table.fixed_dt
        captures = _step_sim(state, table)
        for slot, pocket_idx in captures:
            trace.pocket_events.append((state.ball_at(slot).id, pocket_idx, t))
        if record_frames:
            trace.frames.append((t, state.snapshot_positions()))
        if on_step is not None:
            on_step(t, state.export())
        still_moving = False
        for i in range(len(state.order)):
            if state.on_table[i] and state.vx[i] ** 2 + state.vy[i] ** 2 >= eps_sq:
                still_moving = True
                break
        if not still_moving:
            break
    else:
        raise SimulationOverflowError(
            f"balls still moving after {table.max_sim_seconds}s of simulated time"
        )

    for i in range(len(state.order)):
        if state.on_table[i]:
            state.vx[i] = state.vy[i] = 0.0
    return state.export(), trace


def respot_cue(table: Table, balls: list[Ball]) -> list[Ball]:
    """Return the pocketed cue to the head spot (scratch rule).

    The spot is nudged in ball_radius increments along +y, then -y, until a
    free position inside the bounds is found.
    """
    out = [b.copy() for b in balls]
    cue = next((b for b in out if b.kind is BallKind.CUE), None)
    if cue is None:
        raise IllegalStateError("no cue ball present")
    if cue.state is BallState.ON_TABLE:
        return out

    spot = table.head_spot()
    r = table.ball_radius
    others = [b for b in out if b.state is BallState.ON_TABLE and b.kind is not BallKind.CUE]

    def free(p: Vec2) -> bool:
        if not (r <= p.x <= table.width - r and r <= p.y <= table.height - r):
            return False
        return all((b.position - p).norm() >= 2.0 * r for b in others)

    candidates = [Vec2(spot.x, spot.y + k * r) for k in range(0, 64)]
    candidates += [Vec2(spot.x, spot.y - k * r) for k in range(1, 64)]
    for p in candidates:
        if free(p):
            cue.position = p
            cue.velocity = Vec2(0.0, 0.0)
            cue.state = BallState.ON_TABLE
            return out
    raise IllegalStateError("no free respot position found")
