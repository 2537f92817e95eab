import { describe, expect, it } from 'vitest';

import { canDrag, forcedModal, labelBadge, revealedEvent, tooltipText } from '../src/viewstate.js';
import type { Snapshot, WireBall, WireEvent } from '../src/types.js';

function snapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    session_id: 's1',
    status: 'Active',
    completion_reason: null,
    day_elapsed: 0,
    days_remaining: 730,
    day_budget: 730,
    milestones_achieved: 0,
    milestone_target: 6,
    current_round: 1,
    accepted_changes: [],
    balls: [],
    timeline: [],
    pending_decision: null,
    report_available: false,
    round_generation_error: null,
    ...overrides,
  };
}

function event(overrides: Partial<WireEvent> = {}): WireEvent {
  return {
    id: 'randomEvent1-1',
    round_index: 1,
    category: 'Random',
    title: 'Homesick',
    body: 'It was hard. It got better.',
    label: { variant: 'Negative', change_from: '', change_to: '' },
    hint: 'air thickens, energy wanes',
    status: 'OnTable',
    pocketed_on_day: null,
    image_prompt: null,
    ...overrides,
  };
}

describe('render guard', () => {
  it('never reveals an unpocketed event', () => {
    expect(revealedEvent(event({ status: 'OnTable' }))).toBeNull();
    expect(revealedEvent(event({ status: 'Discarded' }))).toBeNull();
    expect(revealedEvent(null)).toBeNull();
  });

  it('reveals pocketed events', () => {
    const pocketed = event({ status: 'Pocketed', pocketed_on_day: 12 });
    expect(revealedEvent(pocketed)).toBe(pocketed);
  });

  it('shows no badge before pocketing', () => {
    expect(labelBadge(event({ status: 'OnTable' }))).toBeNull();
  });

  it('formats badges for pocketed events', () => {
    expect(labelBadge(event({ status: 'Pocketed' }))).toBe('Negative');
    const change = event({
      status: 'Pocketed',
      label: { variant: 'Change', change_from: 'HCI', change_to: 'AR/VR' },
    });
    expect(labelBadge(change)).toBe('Change: HCI → AR/VR');
  });
});

describe('tooltips', () => {
  const ball = (overrides: Partial<WireBall> = {}): WireBall => ({
    id: 'randomEvent1-1', kind: 'Random', x: 1, y: 0.5, state: 'OnTable',
    hint: 'air thickens, energy wanes', ...overrides,
  });

  it('shows exactly the server hint for a random ball', () => {
    expect(tooltipText(ball())).toBe('air thickens, energy wanes');
  });

  it('never contains a sentiment word for skill/random hints', () => {
    const text = tooltipText(ball()).toLowerCase();
    for (const word of ['positive', 'negative', 'neutral', 'change']) {
      expect(text).not.toContain(word);
    }
  });

  it('is empty for the cue and for off-table balls', () => {
    expect(tooltipText(ball({ kind: 'Cue', hint: '' }))).toBe('');
    expect(tooltipText(ball({ state: 'Pocketed' }))).toBe('');
  });
});

describe('input gating', () => {
  it('allows dragging only on an idle active table', () => {
    expect(canDrag(snapshot(), false)).toBe(true);
    expect(canDrag(snapshot(), true)).toBe(false); // animation running
    expect(canDrag(snapshot({ status: 'AwaitingRound' }), false)).toBe(false);
    expect(canDrag(snapshot({ status: 'AwaitingDecision' }), false)).toBe(false);
    expect(canDrag(snapshot({ status: 'Completed' }), false)).toBe(false);
    expect(canDrag(null, false)).toBe(false);
  });

  it('forces the decision modal while a decision is pending', () => {
    const pending = event({ status: 'Pocketed', label: { variant: 'Change', change_from: 'A', change_to: 'B' } });
    expect(forcedModal(snapshot({ status: 'AwaitingDecision', pending_decision: pending }))).toBe('decision');
    expect(forcedModal(snapshot())).toBeNull();
  });
});
