// Wire types mirroring the server's JSON contract (see docs/schemas.md in
// the backend repo). Unpocketed random events never arrive with a label or
// body: balls only carry a display hint.

export type BallKind = 'Cue' | 'Milestone' | 'Skill' | 'Random';
export type EventStatus = 'OnTable' | 'Pocketed' | 'Discarded';
export type SessionStatus = 'Active' | 'AwaitingDecision' | 'AwaitingRound' | 'Completed';

export interface WireBall {
  id: string;
  kind: BallKind;
  x: number;
  y: number;
  state: EventStatus;
  hint: string;
}

export interface WireLabel {
  variant: 'Positive' | 'Neutral' | 'Negative' | 'Change';
  change_from: string;
  change_to: string;
}

export interface WireEvent {
  id: string;
  round_index: number;
  category: 'Milestone' | 'Random' | 'Skill';
  title: string;
  body: string;
  label: WireLabel | null;
  hint: string | null;
  status: EventStatus;
  pocketed_on_day: number | null;
  image_prompt: string | null;
}

export interface TimelineEntry {
  day: number;
  event: WireEvent;
}

export interface Snapshot {
  session_id: string;
  status: SessionStatus;
  completion_reason: 'SixMilestones' | 'DaysExhausted' | null;
  day_elapsed: number;
  days_remaining: number;
  day_budget: number;
  milestones_achieved: number;
  milestone_target: number;
  current_round: number;
  accepted_changes: [string, string][];
  balls: WireBall[];
  timeline: TimelineEntry[];
  pending_decision: WireEvent | null;
  report_available: boolean;
  round_generation_error: string | null;
}

export interface TableInfo {
  width: number;
  height: number;
  ball_radius: number;
  pocket_radius: number;
  pockets: { x: number; y: number }[];
  max_days_per_shot: number;
  min_days_per_shot: number;
}

export interface TraceFrame {
  t: number;
  balls: { id: string; x: number; y: number }[];
}

export interface Trace {
  frames: TraceFrame[];
  pocket_events: { ball_id: string; pocket_index: number; t: number }[];
}

export interface ShotResponse {
  days_charged: number;
  frames: Trace;
  pocketed: WireEvent[];
  session: Snapshot;
}

export interface Report {
  careerAnalysis: string;
  futureSuggestions: string;
  milestones: WireEvent[];
  skills: WireEvent[];
  randoms: WireEvent[];
  days_used: number;
  completion_reason: 'SixMilestones' | 'DaysExhausted';
}
