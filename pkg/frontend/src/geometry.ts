// Table-unit ↔ canvas-pixel transforms and drag/aim math.

export interface Point {
  x: number;
  y: number;
}

export class TableTransform {
  constructor(
    readonly tableWidth: number,
    readonly tableHeight: number,
    readonly scale: number, // px per table unit
    readonly marginPx: number,
  ) {}

  get canvasWidth(): number {
    return this.tableWidth * this.scale + 2 * this.marginPx;
  }

  get canvasHeight(): number {
    return this.tableHeight * this.scale + 2 * this.marginPx;
  }

  toPx(p: Point): Point {
    return { x: this.marginPx + p.x * this.scale, y: this.marginPx + p.y * this.scale };
  }

  toTable(px: Point): Point {
    return { x: (px.x - this.marginPx) / this.scale, y: (px.y - this.marginPx) / this.scale };
  }
}

export function distance(a: Point, b: Point): number {
  return Math.hypot(a.x - b.x, a.y - b.y);
}

// Shot direction is opposite the drag vector: pull back from the cue ball,
// release to fire forward. Returns a unit vector, or null for a zero drag.
export function aimDirection(anchor: Point, current: Point): Point | null {
  const dx = anchor.x - current.x;
  const dy = anchor.y - current.y;
  const len = Math.hypot(dx, dy);
  if (len === 0) {
    return null;
  }
  return { x: dx / len, y: dy / len };
}

// End point of the aiming guide line, scaled with drag strength.
export function guideLineEnd(cue: Point, direction: Point, dragFraction: number, maxLen: number): Point {
  const len = maxLen * dragFraction;
  return { x: cue.x + direction.x * len, y: cue.y + direction.y * len };
}
