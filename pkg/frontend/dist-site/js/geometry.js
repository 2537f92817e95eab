// Table-unit ↔ canvas-pixel transforms and drag/aim math.
export class TableTransform {
    constructor(tableWidth, tableHeight, scale, // px per table unit
    marginPx) {
        this.tableWidth = tableWidth;
        this.tableHeight = tableHeight;
        this.scale = scale;
        this.marginPx = marginPx;
    }
    get canvasWidth() {
        return this.tableWidth * this.scale + 2 * this.marginPx;
    }
    get canvasHeight() {
        return this.tableHeight * this.scale + 2 * this.marginPx;
    }
    toPx(p) {
        return { x: this.marginPx + p.x * this.scale, y: this.marginPx + p.y * this.scale };
    }
    toTable(px) {
        return { x: (px.x - this.marginPx) / this.scale, y: (px.y - this.marginPx) / this.scale };
    }
}
export function distance(a, b) {
    return Math.hypot(a.x - b.x, a.y - b.y);
}
// Shot direction is opposite the drag vector: pull back from the cue ball,
// release to fire forward. Returns a unit vector, or null for a zero drag.
export function aimDirection(anchor, current) {
    const dx = anchor.x - current.x;
    const dy = anchor.y - current.y;
    const len = Math.hypot(dx, dy);
    if (len === 0) {
        return null;
    }
    return { x: dx / len, y: dy / len };
}
// End point of the aiming guide line, scaled with drag strength.
export function guideLineEnd(cue, direction, dragFraction, maxLen) {
    const len = maxLen * dragFraction;
    return { x: cue.x + direction.x * len, y: cue.y + direction.y * len };
}
