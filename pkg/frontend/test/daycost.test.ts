import { describe, expect, it } from 'vitest';

import { DEFAULT_RULE, DRAG_CANCEL_PX, dragFractionFromPixels, dragToDays } from '../src/daycost.js';

describe('dragToDays', () => {
  it('charges the full 90 days at full drag', () => {
    expect(dragToDays(DEFAULT_RULE, 1.0, 730)).toBe(90);
  });

  it('clamps tiny drags up to one day', () => {
    expect(dragToDays(DEFAULT_RULE, 0.01, 730)).toBe(1);
  });

  it('clamps to the remaining budget', () => {
    expect(dragToDays(DEFAULT_RULE, 1.0, 40)).toBe(40);
  });

  it('is a ceil of the linear mapping', () => {
    expect(dragToDays(DEFAULT_RULE, 0.5, 730)).toBe(45);
    expect(dragToDays(DEFAULT_RULE, 0.011, 730)).toBe(1);
    expect(dragToDays(DEFAULT_RULE, 0.012, 730)).toBe(2);
  });

  it('never returns less than one day', () => {
    for (let i = 1; i <= 40; i += 1) {
      expect(dragToDays(DEFAULT_RULE, i / 40, 730)).toBeGreaterThanOrEqual(1);
    }
  });

  it('is monotone in drag fraction', () => {
    let last = 0;
    for (let i = 1; i <= 100; i += 1) {
      const days = dragToDays(DEFAULT_RULE, i / 100, 730);
      expect(days).toBeGreaterThanOrEqual(last);
      last = days;
    }
  });
});

describe('dragFractionFromPixels', () => {
  it('cancels below the threshold', () => {
    expect(dragFractionFromPixels(DRAG_CANCEL_PX - 1, 300)).toBeNull();
  });

  it('scales linearly and saturates at 1', () => {
    expect(dragFractionFromPixels(150, 300)).toBeCloseTo(0.5);
    expect(dragFractionFromPixels(900, 300)).toBe(1);
  });
});
