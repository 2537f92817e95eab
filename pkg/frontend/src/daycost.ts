// Client-side mirror of the server's drag→days formula. The readout shown
// while dragging must equal the days the server will charge, so this must
// stay in exact integer agreement with the backend.

export interface DayCostRule {
  maxDaysPerShot: number;
  minDaysPerShot: number;
}

export const DEFAULT_RULE: DayCostRule = { maxDaysPerShot: 90, minDaysPerShot: 1 };

export function dragToDays(rule: DayCostRule, dragFraction: number, daysRemaining: number): number {
  const days = Math.ceil(dragFraction * rule.maxDaysPerShot);
  const upper = Math.min(rule.maxDaysPerShot, daysRemaining);
  return Math.max(rule.minDaysPerShot, Math.min(days, upper));
}

// Pixel drag length → drag fraction in (0, 1]; below the threshold the
// gesture cancels (returns null).
export const DRAG_CANCEL_PX = 8;

export function dragFractionFromPixels(lengthPx: number, maxDragPx: number): number | null {
  if (lengthPx < DRAG_CANCEL_PX) {
    return null;
  }
  return Math.min(1, lengthPx / maxDragPx);
}
