// Pure view-state rules: what may be shown and when input is accepted.
// The server already redacts unpocketed random events at the wire level;
// these guards enforce the same rule a second time at render time.

import type { Snapshot, WireBall, WireEvent } from './types.js';

export type ModalKind = 'decision' | 'report' | null;

// Drag-to-aim is only accepted on an idle, active table.
export function canDrag(snapshot: Snapshot | null, playbackActive: boolean): boolean {
  return snapshot !== null && snapshot.status === 'Active' && !playbackActive;
}

// Forced modal for the current state; the report modal is user-opened.
export function forcedModal(snapshot: Snapshot | null): ModalKind {
  if (snapshot && snapshot.status === 'AwaitingDecision' && snapshot.pending_decision) {
    return 'decision';
  }
  return null;
}

// Render guard: an event's full content (body, label) is only displayable
// once pocketed. Everything else renders as null.
export function revealedEvent(event: WireEvent | null): WireEvent | null {
  if (event && event.status === 'Pocketed') {
    return event;
  }
  return null;
}

// Sentiment badge text for a pocketed event; null when nothing may show.
export function labelBadge(event: WireEvent): string | null {
  const revealed = revealedEvent(event);
  if (!revealed || !revealed.label) {
    return null;
  }
  if (revealed.label.variant === 'Change') {
    return `Change: ${revealed.label.change_from} → ${revealed.label.change_to}`;
  }
  return revealed.label.variant;
}

// Hover text for an on-table ball: exactly the server-provided hint
// (skills/randoms: the vague hint; milestone: its title; cue: empty).
export function tooltipText(ball: WireBall): string {
  return ball.state === 'OnTable' ? ball.hint : '';
}

export function statusLine(snapshot: Snapshot): string {
  switch (snapshot.status) {
    case 'Active':
      return 'Your shot: drag back from the cue ball to aim.';
    case 'AwaitingDecision':
      return 'A direction change needs your decision.';
    case 'AwaitingRound':
      return 'Charting the next stretch of your journey…';
    case 'Completed':
      return snapshot.completion_reason === 'SixMilestones'
        ? 'All six milestones collected!'
        : 'Two years have passed.';
  }
}
