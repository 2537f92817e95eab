// Application wiring: session lifecycle, polling, playback, input gating.

import { ApiClient, ApiError, apiBaseFromLocation } from './api.js';
import { TracePlayback } from './animation.js';
import { DayCostRule } from './daycost.js';
import { DecisionModal, Panel, ReportView } from './panel.js';
import { TableView } from './tableView.js';
import { canDrag, forcedModal } from './viewstate.js';
import type { Snapshot, TableInfo } from './types.js';

const POLL_MS = 500; // while the next round is being generated

class App {
  private snapshot: Snapshot | null = null;
  private pendingSnapshot: Snapshot | null = null; // applied when playback ends
  private playback: TracePlayback | null = null;
  private playbackStart = 0;
  private pollTimer: number | null = null;
  private tableView!: TableView;
  private panel!: Panel;
  private decisionModal!: DecisionModal;
  private reportView!: ReportView;
  private requestInFlight = false;

  constructor(private readonly api: ApiClient) {}

  async start(): Promise<void> {
    const table = await this.api.getTable();
    this.panel = new Panel(document.getElementById('panel')!);
    this.decisionModal = new DecisionModal(document.getElementById('decision-overlay')!);
    this.reportView = new ReportView(document.getElementById('report-overlay')!);
    this.initTable(table);
    this.initForm();
    document.getElementById('report-button')!.addEventListener('click', () => this.openReport());
    requestAnimationFrame((t) => this.frame(t));
  }

  private initTable(table: TableInfo): void {
    const rule: DayCostRule = {
      maxDaysPerShot: table.max_days_per_shot,
      minDaysPerShot: table.min_days_per_shot,
    };
    this.tableView = new TableView(
      document.getElementById('table') as HTMLCanvasElement,
      document.getElementById('tooltip')!,
      table,
      rule,
      {
        canShoot: () => !this.requestInFlight
          && canDrag(this.snapshot, this.playback !== null)
          && !this.decisionModal.open,
        daysRemaining: () => this.snapshot?.days_remaining ?? 730,
        onShot: (intent) => void this.takeShot(intent.direction, intent.dragFraction),
      },
    );
  }

  private initForm(): void {
    const form = document.getElementById('new-game-form') as HTMLFormElement;
    form.addEventListener('submit', (e) => {
      e.preventDefault();
      const intro = (document.getElementById('intro-input') as HTMLTextAreaElement).value;
      const goal = (document.getElementById('goal-input') as HTMLTextAreaElement).value;
      void this.newGame(intro, goal);
    });
  }

  private async newGame(intro: string, goal: string): Promise<void> {
    try {
      const snapshot = await this.api.createSession({ intro, goal });
      document.getElementById('setup')!.classList.add('hidden');
      document.getElementById('game')!.classList.remove('hidden');
      this.applySnapshot(snapshot);
    } catch (err) {
      this.toast(err instanceof ApiError ? err.message : String(err));
    }
  }

  private applySnapshot(snapshot: Snapshot): void {
    this.snapshot = snapshot;
    this.tableView.setBalls(snapshot.balls);
    this.panel.render(snapshot);

    const modal = forcedModal(snapshot);
    if (modal === 'decision' && !this.decisionModal.open) {
      this.decisionModal.show(snapshot.pending_decision!, (accept) => void this.decide(accept));
    }
    const reportButton = document.getElementById('report-button') as HTMLButtonElement;
    reportButton.disabled = snapshot.status !== 'Completed';

    if (snapshot.status === 'AwaitingRound') {
      this.schedulePoll();
    }
  }

  private schedulePoll(): void {
    if (this.pollTimer !== null || !this.snapshot) {
      return;
    }
    this.pollTimer = window.setTimeout(async () => {
      this.pollTimer = null;
      if (!this.snapshot) {
        return;
      }
      try {
        const snapshot = await this.api.getSession(this.snapshot.session_id);
        this.applySnapshot(snapshot);
      } catch (err) {
        this.toast(String(err));
      }
    }, POLL_MS);
  }

  private async takeShot(direction: { x: number; y: number }, dragFraction: number): Promise<void> {
    if (!this.snapshot || this.requestInFlight) {
      return;
    }
    this.requestInFlight = true;
    try {
      const response = await this.api.shoot(this.snapshot.session_id, direction, dragFraction);
      // Animate the server's trace, then land on the authoritative snapshot.
      this.playback = new TracePlayback(response.frames);
      this.playbackStart = performance.now();
      this.pendingSnapshot = response.session;
      if (response.pocketed.length > 0) {
        this.toast(response.pocketed.map((e) => e.title).join(' · '));
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.toast(`Shot rejected: ${err.message}`);
      } else {
        this.toast(String(err));
      }
    } finally {
      this.requestInFlight = false;
    }
  }

  private async decide(accept: boolean): Promise<void> {
    if (!this.snapshot) {
      return;
    }
    try {
      const snapshot = await this.api.decide(this.snapshot.session_id, accept);
      this.applySnapshot(snapshot);
    } catch (err) {
      this.toast(String(err));
    }
  }

  private async openReport(): Promise<void> {
    if (!this.snapshot) {
      return;
    }
    try {
      const report = await this.api.getReport(this.snapshot.session_id);
      this.reportView.show(report);
    } catch (err) {
      this.toast(String(err));
    }
  }

  private frame(now: number): void {
    if (this.playback) {
      const elapsed = (now - this.playbackStart) / 1000;
      this.tableView.setAnimationFrame(this.playback.frameAt(elapsed));
      if (this.playback.finished(elapsed)) {
        this.playback = null;
        this.tableView.setAnimationFrame(null);
        if (this.pendingSnapshot) {
          const pending = this.pendingSnapshot;
          this.pendingSnapshot = null;
          this.applySnapshot(pending);
        }
      }
    }
    this.tableView.render();
    requestAnimationFrame((t) => this.frame(t));
  }

  private toast(message: string): void {
    const node = document.getElementById('toast')!;
    node.textContent = message;
    node.classList.add('visible');
    window.setTimeout(() => node.classList.remove('visible'), 2600);
  }
}

const api = new ApiClient(apiBaseFromLocation(window.location));
void new App(api).start();
