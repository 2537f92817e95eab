"""Headless shot policies for scripted and bulk runs."""

from __future__ import annotations

import math
import random
from typing import Optional

from .errors import IllegalStateError
from .physics import Ball, BallKind, BallState, Table, Vec2

# Aim preference: milestones end rounds, randoms carry story, skills fill.
_PRIORITY = {BallKind.MILESTONE: 0, BallKind.RANDOM: 1, BallKind.SKILL: 2}


def nearest_pocket_shot(
    table: Table,
    balls: list[Ball],
    *,
    noise_rad: float = 0.0,
    rng: Optional[random.Random] = None,
) -> tuple[Vec2, float]:
    """Full-power ghost-ball shot at the highest-value ball's nearest pocket.

    The cue aims at the point 2r behind the target along the target→pocket
    line, so a clean hit sends the target toward that pocket. With noise_rad
    set, the direction is rotated by a gaussian angle (Monte-Carlo mode).
    """
    cue = next((b for b in balls if b.kind is BallKind.CUE and b.state is BallState.ON_TABLE), None)
    if cue is None:
        raise IllegalStateError("no cue ball on the table")
    targets = [
        b for b in balls
        if b.kind is not BallKind.CUE and b.state is BallState.ON_TABLE
    ]
    if not targets:
        raise IllegalStateError("no event balls left to aim at")
    target = min(targets, key=lambda b: (_PRIORITY[b.kind], b.id))
    pocket = min(table.pocket_centers, key=lambda p: (p - target.position).norm())

    to_pocket = pocket - target.position
    if to_pocket.norm() == 0.0:
        aim_point = target.position
    else:
        u = to_pocket.normalized()
        aim_point = target.position - u.scaled(2.0 * table.ball_radius)

    line = aim_point - cue.position
    if line.norm() == 0.0:
        direction = Vec2(1.0, 0.0)
    else:
        direction = line.normalized()

    if noise_rad > 0.0:
        angle = (rng or random).gauss(0.0, noise_rad)
        cos_a, sin_a = math.cos(angle), math.sin(angle)
        direction = Vec2(
            direction.x * cos_a - direction.y * sin_a,
            direction.x * sin_a + direction.y * cos_a,
        ).normalized()
    return direction, 1.0
