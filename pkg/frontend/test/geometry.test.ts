import { describe, expect, it } from 'vitest';

import { TableTransform, aimDirection, distance, guideLineEnd } from '../src/geometry.js';

describe('TableTransform', () => {
  const tf = new TableTransform(2.0, 1.0, 420, 30);

  it('computes canvas dimensions from the table', () => {
    expect(tf.canvasWidth).toBe(2.0 * 420 + 60);
    expect(tf.canvasHeight).toBe(1.0 * 420 + 60);
  });

  it('round-trips points', () => {
    const p = { x: 1.234, y: 0.56 };
    const back = tf.toTable(tf.toPx(p));
    expect(back.x).toBeCloseTo(p.x, 12);
    expect(back.y).toBeCloseTo(p.y, 12);
  });
});

describe('aimDirection', () => {
  it('points opposite the drag vector', () => {
    // Drag down-right → shot fires up-left.
    const dir = aimDirection({ x: 100, y: 100 }, { x: 130, y: 140 })!;
    expect(dir.x).toBeLessThan(0);
    expect(dir.y).toBeLessThan(0);
    expect(Math.hypot(dir.x, dir.y)).toBeCloseTo(1, 12);
  });

  it('is null for a zero drag', () => {
    expect(aimDirection({ x: 5, y: 5 }, { x: 5, y: 5 })).toBeNull();
  });
});

describe('guideLineEnd', () => {
  it('scales with drag strength', () => {
    const end = guideLineEnd({ x: 0, y: 0 }, { x: 1, y: 0 }, 0.5, 200);
    expect(distance({ x: 0, y: 0 }, end)).toBeCloseTo(100);
  });
});
