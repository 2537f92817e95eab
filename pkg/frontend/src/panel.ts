// Right panel: counters, timeline with expandable event detail, the
// decision modal, and the terminal report view.

import { labelBadge, revealedEvent, statusLine } from './viewstate.js';
import type { Report, Snapshot, WireEvent } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function eventDetail(event: WireEvent): HTMLElement {
  const revealed = revealedEvent(event);
  const details = el('details', 'timeline-entry');
  const summary = el('summary');
  summary.append(el('span', 'category-tag ' + event.category.toLowerCase(), event.category));
  summary.append(el('span', 'entry-title', revealed ? revealed.title : '???'));
  const badge = revealed ? labelBadge(revealed) : null;
  if (badge) {
    summary.append(el('span', 'badge ' + (revealed!.label!.variant.toLowerCase()), badge));
  }
  details.append(summary);
  if (revealed) {
    details.append(el('p', 'entry-body', revealed.body));
    if (revealed.pocketed_on_day !== null) {
      details.append(el('p', 'entry-day', `Pocketed on day ${revealed.pocketed_on_day}`));
    }
  }
  return details;
}

export class Panel {
  constructor(private readonly root: HTMLElement) {}

  render(snapshot: Snapshot): void {
    this.root.replaceChildren();

    const counters = el('div', 'counters');
    counters.append(el('div', 'counter',
      `★ ${snapshot.milestones_achieved}/${snapshot.milestone_target} milestones`));
    counters.append(el('div', 'counter',
      `⌛ ${snapshot.day_elapsed}/${snapshot.day_budget} days`));
    counters.append(el('div', 'counter', `round ${snapshot.current_round}`));
    this.root.append(counters);

    const status = el('p', 'status-line', statusLine(snapshot));
    if (snapshot.status === 'AwaitingRound') {
      status.append(el('span', 'spinner'));
    }
    this.root.append(status);
    if (snapshot.round_generation_error) {
      this.root.append(el('p', 'error-line',
        `Round generation failed: ${snapshot.round_generation_error}`));
    }

    if (snapshot.accepted_changes.length > 0) {
      const changes = snapshot.accepted_changes
        .map(([from, to]) => `${from} → ${to}`).join('; ');
      this.root.append(el('p', 'changes-line', `Direction changes: ${changes}`));
    }

    this.root.append(el('h3', undefined, 'Timeline'));
    const list = el('div', 'timeline');
    if (snapshot.timeline.length === 0) {
      list.append(el('p', 'empty', 'Nothing pocketed yet.'));
    }
    for (const entry of snapshot.timeline) {
      list.append(eventDetail(entry.event));
    }
    this.root.append(list);
  }
}

export class DecisionModal {
  private onChoice: ((accept: boolean) => void) | null = null;

  constructor(private readonly overlay: HTMLElement) {
    overlay.querySelector('#decision-accept')!.addEventListener('click', () => this.choose(true));
    overlay.querySelector('#decision-decline')!.addEventListener('click', () => this.choose(false));
  }

  get open(): boolean {
    return this.overlay.classList.contains('visible');
  }

  show(event: WireEvent, onChoice: (accept: boolean) => void): void {
    const revealed = revealedEvent(event);
    if (!revealed || !revealed.label) {
      return; // render guard: never display an unrevealed event
    }
    this.onChoice = onChoice;
    this.overlay.querySelector('#decision-title')!.textContent = revealed.title;
    this.overlay.querySelector('#decision-body')!.textContent = revealed.body;
    this.overlay.querySelector('#decision-direction')!.textContent =
      `${revealed.label.change_from} → ${revealed.label.change_to}`;
    this.overlay.classList.add('visible');
  }

  hide(): void {
    this.overlay.classList.remove('visible');
    this.onChoice = null;
  }

  private choose(accept: boolean): void {
    const handler = this.onChoice;
    this.hide();
    handler?.(accept);
  }
}

export class ReportView {
  constructor(private readonly overlay: HTMLElement) {
    overlay.querySelector('#report-close')!.addEventListener('click', () => this.hide());
  }

  show(report: Report): void {
    const body = this.overlay.querySelector('#report-content')!;
    body.replaceChildren();
    body.append(el('h2', undefined, 'Career journey report'));
    body.append(el('p', 'report-meta',
      `${report.days_used} days — ${report.completion_reason === 'SixMilestones'
        ? 'all milestones collected' : 'time ran out'}`));

    body.append(el('h3', undefined, 'Career analysis'));
    body.append(el('p', undefined, report.careerAnalysis));
    body.append(el('h3', undefined, 'Future suggestions'));
    body.append(el('p', undefined, report.futureSuggestions));

    const sections: [string, WireEvent[]][] = [
      ['Milestones', report.milestones],
      ['Skills', report.skills],
      ['Random events', report.randoms],
    ];
    for (const [heading, events] of sections) {
      body.append(el('h3', undefined, `${heading} (${events.length})`));
      for (const event of events) {
        body.append(eventDetail(event));
      }
    }
    this.overlay.classList.add('visible');
  }

  hide(): void {
    this.overlay.classList.remove('visible');
  }
}
