// Canvas pool table: rendering, hover hints, and the drag-to-aim gesture.

import { DayCostRule, dragFractionFromPixels, dragToDays } from './daycost.js';
import { TableTransform, aimDirection, distance, guideLineEnd, Point } from './geometry.js';
import { tooltipText } from './viewstate.js';
import type { BallKind, TableInfo, TraceFrame, WireBall } from './types.js';

const FELT = '#1e7a40';
const RAIL = '#5a3219';
const POCKET = '#10130f';

const BALL_STYLE: Record<BallKind, { fill: string; glyph: string }> = {
  Cue: { fill: '#f4f0e6', glyph: '' },
  Milestone: { fill: '#d9a517', glyph: '★' },
  Skill: { fill: '#2f6fb5', glyph: '◆' },
  Random: { fill: '#7a4fb0', glyph: '?' },
};

export interface DragState {
  anchorPx: Point; // cue ball center at drag start
  currentPx: Point;
  dragFraction: number | null; // null below the cancel threshold
  days: number | null;
}

export interface ShotIntent {
  direction: Point;
  dragFraction: number;
}

interface TableViewHooks {
  canShoot(): boolean;
  daysRemaining(): number;
  onShot(intent: ShotIntent): void;
}

export class TableView {
  private readonly ctx: CanvasRenderingContext2D;
  readonly transform: TableTransform;
  private balls: WireBall[] = [];
  private animationFrame: TraceFrame | null = null;
  private drag: DragState | null = null;
  private hoverBall: WireBall | null = null;
  readonly maxDragPx: number;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly tooltip: HTMLElement,
    private readonly table: TableInfo,
    private readonly rule: DayCostRule,
    private readonly hooks: TableViewHooks,
    scale = 420,
  ) {
    this.transform = new TableTransform(table.width, table.height, scale, 30);
    this.maxDragPx = 0.4 * table.width * scale;
    canvas.width = this.transform.canvasWidth;
    canvas.height = this.transform.canvasHeight;
    this.ctx = canvas.getContext('2d')!;
    canvas.addEventListener('pointerdown', (e) => this.onPointerDown(e));
    canvas.addEventListener('pointermove', (e) => this.onPointerMove(e));
    canvas.addEventListener('pointerup', (e) => this.onPointerUp(e));
    canvas.addEventListener('pointerleave', () => this.onPointerLeave());
  }

  setBalls(balls: WireBall[]): void {
    this.balls = balls.filter((b) => b.state === 'OnTable');
  }

  // During playback the trace supplies positions; metadata (kind, hint)
  // still comes from the last snapshot's balls.
  setAnimationFrame(frame: TraceFrame | null): void {
    this.animationFrame = frame;
  }

  get currentDrag(): DragState | null {
    return this.drag;
  }

  private eventPx(e: PointerEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return { x: e.clientX - rect.left, y: e.clientY - rect.top };
  }

  private cueBall(): WireBall | undefined {
    return this.balls.find((b) => b.kind === 'Cue');
  }

  private ballAtPx(px: Point): WireBall | null {
    const grabRadius = this.table.ball_radius * this.transform.scale + 6;
    for (const ball of this.renderedBalls()) {
      if (distance(this.transform.toPx(ball), px) <= grabRadius) {
        return ball;
      }
    }
    return null;
  }

  private renderedBalls(): WireBall[] {
    if (!this.animationFrame) {
      return this.balls;
    }
    const meta = new Map(this.balls.map((b) => [b.id, b]));
    const frameBalls: WireBall[] = [];
    for (const fb of this.animationFrame.balls) {
      const m = meta.get(fb.id);
      if (m) {
        frameBalls.push({ ...m, x: fb.x, y: fb.y });
      }
    }
    return frameBalls;
  }

  private onPointerDown(e: PointerEvent): void {
    if (!this.hooks.canShoot()) {
      return;
    }
    const px = this.eventPx(e);
    const cue = this.cueBall();
    if (!cue) {
      return;
    }
    const cuePx = this.transform.toPx(cue);
    const grabRadius = this.table.ball_radius * this.transform.scale + 10;
    if (distance(cuePx, px) > grabRadius) {
      return;
    }
    this.canvas.setPointerCapture(e.pointerId);
    this.drag = { anchorPx: cuePx, currentPx: px, dragFraction: null, days: null };
  }

  private onPointerMove(e: PointerEvent): void {
    const px = this.eventPx(e);
    if (this.drag) {
      const fraction = dragFractionFromPixels(
        distance(this.drag.anchorPx, px), this.maxDragPx,
      );
      this.drag.currentPx = px;
      this.drag.dragFraction = fraction;
      this.drag.days = fraction === null
        ? null
        : dragToDays(this.rule, fraction, this.hooks.daysRemaining());
      this.hideTooltip();
      return;
    }
    this.hoverBall = this.ballAtPx(px);
    if (this.hoverBall && this.hoverBall.kind !== 'Cue') {
      const text = tooltipText(this.hoverBall);
      if (text) {
        this.tooltip.textContent = text;
        this.tooltip.style.left = `${px.x + 14}px`;
        this.tooltip.style.top = `${px.y - 10}px`;
        this.tooltip.classList.add('visible');
        return;
      }
    }
    this.hideTooltip();
  }

  private onPointerUp(e: PointerEvent): void {
    if (!this.drag) {
      return;
    }
    const drag = this.drag;
    this.drag = null;
    this.canvas.releasePointerCapture(e.pointerId);
    if (drag.dragFraction === null) {
      return; // sub-threshold: cancelled
    }
    const dirPx = aimDirection(drag.anchorPx, drag.currentPx);
    if (!dirPx) {
      return;
    }
    // Pixel space and table space share orientation, so the unit vector
    // carries over directly.
    this.hooks.onShot({ direction: dirPx, dragFraction: drag.dragFraction });
  }

  private onPointerLeave(): void {
    this.hideTooltip();
    this.hoverBall = null;
  }

  private hideTooltip(): void {
    this.tooltip.classList.remove('visible');
  }

  render(): void {
    const ctx = this.ctx;
    const t = this.transform;
    ctx.fillStyle = RAIL;
    ctx.fillRect(0, 0, t.canvasWidth, t.canvasHeight);
    ctx.fillStyle = FELT;
    ctx.fillRect(t.marginPx, t.marginPx, this.table.width * t.scale, this.table.height * t.scale);

    for (const pocket of this.table.pockets) {
      const p = t.toPx(pocket);
      ctx.beginPath();
      ctx.arc(p.x, p.y, this.table.pocket_radius * t.scale, 0, 2 * Math.PI);
      ctx.fillStyle = POCKET;
      ctx.fill();
    }

    for (const ball of this.renderedBalls()) {
      this.drawBall(ball);
    }
    if (this.drag && this.drag.dragFraction !== null) {
      this.drawGuide(this.drag);
    }
  }

  private drawBall(ball: WireBall): void {
    const ctx = this.ctx;
    const p = this.transform.toPx(ball);
    const r = this.table.ball_radius * this.transform.scale;
    const style = BALL_STYLE[ball.kind];
    ctx.beginPath();
    ctx.arc(p.x, p.y, r, 0, 2 * Math.PI);
    ctx.fillStyle = style.fill;
    ctx.fill();
    ctx.lineWidth = 1.5;
    ctx.strokeStyle = 'rgba(0,0,0,0.45)';
    ctx.stroke();
    if (style.glyph) {
      ctx.fillStyle = 'rgba(255,255,255,0.92)';
      ctx.font = `${Math.round(r * 1.2)}px sans-serif`;
      ctx.textAlign = 'center';
      ctx.textBaseline = 'middle';
      ctx.fillText(style.glyph, p.x, p.y + 1);
    }
  }

  private drawGuide(drag: DragState): void {
    const cue = this.cueBall();
    const direction = aimDirection(drag.anchorPx, drag.currentPx);
    if (!cue || !direction || drag.dragFraction === null) {
      return;
    }
    const ctx = this.ctx;
    const cuePx = this.transform.toPx(cue);
    const end = guideLineEnd(cuePx, direction, drag.dragFraction, this.maxDragPx);
    ctx.beginPath();
    ctx.moveTo(cuePx.x, cuePx.y);
    ctx.lineTo(end.x, end.y);
    ctx.setLineDash([6, 5]);
    ctx.lineWidth = 2;
    ctx.strokeStyle = 'rgba(255,255,255,0.85)';
    ctx.stroke();
    ctx.setLineDash([]);

    // pull-back indicator
    ctx.beginPath();
    ctx.moveTo(cuePx.x, cuePx.y);
    ctx.lineTo(drag.currentPx.x, drag.currentPx.y);
    ctx.lineWidth = 3;
    ctx.strokeStyle = 'rgba(20,20,20,0.55)';
    ctx.stroke();

    if (drag.days !== null) {
      const label = `${drag.days} days`;
      ctx.font = 'bold 14px sans-serif';
      ctx.textAlign = 'left';
      ctx.textBaseline = 'bottom';
      const pad = 4;
      const width = ctx.measureText(label).width + 2 * pad;
      ctx.fillStyle = 'rgba(0,0,0,0.75)';
      ctx.fillRect(drag.currentPx.x + 10, drag.currentPx.y - 24, width, 20);
      ctx.fillStyle = '#ffdf70';
      ctx.fillText(label, drag.currentPx.x + 10 + pad, drag.currentPx.y - 6);
    }
  }
}
