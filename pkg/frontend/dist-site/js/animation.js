// Playback cursor over a server-provided frame trace. The client renders
// exactly what the server simulated; once the trace is exhausted the
// authoritative snapshot takes over.
export class TracePlayback {
    constructor(trace, speed = 1.0) {
        this.speed = speed;
        this.cursor = 0;
        this.frames = trace.frames;
    }
    get empty() {
        return this.frames.length === 0;
    }
    get durationSeconds() {
        return this.empty ? 0 : this.frames[this.frames.length - 1].t;
    }
    // Latest frame at or before the elapsed playback time (monotone calls
    // advance in O(1) amortized).
    frameAt(elapsedSeconds) {
        if (this.empty) {
            return null;
        }
        const t = elapsedSeconds * this.speed;
        while (this.cursor + 1 < this.frames.length && this.frames[this.cursor + 1].t <= t) {
            this.cursor += 1;
        }
        return this.frames[this.cursor];
    }
    finished(elapsedSeconds) {
        return this.empty || elapsedSeconds * this.speed >= this.durationSeconds;
    }
    finalFrame() {
        return this.empty ? null : this.frames[this.frames.length - 1];
    }
}
// Largest pixel gap between the trace's final frame and the snapshot's
// resting positions, for balls present in both. Respotted or pocketed
// balls are absent from one side and judged by the snapshot alone.
export function finalPositionErrorPx(playback, snapshotBalls, pxPerUnit) {
    const last = playback.finalFrame();
    if (!last) {
        return 0;
    }
    const resting = new Map(snapshotBalls.map((b) => [b.id, b]));
    let worst = 0;
    for (const ball of last.balls) {
        const target = resting.get(ball.id);
        if (!target) {
            continue;
        }
        const err = Math.hypot(ball.x - target.x, ball.y - target.y) * pxPerUnit;
        worst = Math.max(worst, err);
    }
    return worst;
}
