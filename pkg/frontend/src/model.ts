/** Wire-protocol types for the play gateway (envelope version "1"). */

export interface Envelope<T> {
  v: "1";
  type: string;
  body: T;
}

export interface ErrorBody {
  code: string;
  reason: string;
}

export type IssueValue = string | number;

export interface IssueInfo {
  name: string;
  values: IssueValue[];
}

export interface TemplateInfo {
  name: string;
  slots: number;
  briefing: string;
  issues: IssueInfo[];
}

export interface StandingOffer {
  levels: number[];
  mine: boolean;
  own_utility: number;
}

export interface FinalizedSlot {
  slot: number;
  agreement: number[] | null;
  own_utility: number | null;
}

export interface SessionState {
  token: string;
  status: "awaiting_human" | "finished";
  state_version: number;
  slot_count: number;
  active_slot: number | null;
  finalized: FinalizedSlot[];
  /* present while a slot is running: */
  round?: number;
  deadline_rounds?: number;
  relative_time?: number;
  issues?: IssueInfo[];
  standing_offer?: StandingOffer | null;
  can_accept?: boolean;
}

export interface UtilityQuote {
  levels: number[];
  utility: number;
}

export interface SlotSummary {
  slot: number;
  agreement: number[] | null;
  own_utility: number | null;
  nash_distance: number | null;
}

export interface SessionSummary {
  center_utility: number;
  per_slot: SlotSummary[];
  match_record: Record<string, unknown>;
}

export type HumanAction =
  | { kind: "offer"; levels: number[] }
  | { kind: "accept" }
  | { kind: "end" };

export interface CreateSessionOptions {
  deadline_rounds?: number;
  seed?: number;
}

/** One line in the client-side event timeline. */
export interface TimelineEvent {
  slot: number;
  actor: "you" | "opponent" | "system";
  text: string;
}

export function describeOutcome(issues: IssueInfo[], levels: number[]): string {
  return issues
    .map((issue, k) => `${issue.name}=${String(issue.values[levels[k]])}`)
    .join(", ");
}

export function sameLevels(a: number[] | null | undefined, b: number[] | null | undefined): boolean {
  if (!a || !b) return false;
  return a.length === b.length && a.every((x, i) => x === b[i]);
}
