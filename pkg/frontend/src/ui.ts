/** The arena console: a pure protocol client over the play gateway.
 *
 * Screens: lobby (template list) -> play (offer composer + timeline) ->
 * summary. All utility numbers are fetched from the gateway; nothing is
 * computed client-side. Illegal actions are unreachable through the UI
 * when the state says so, and surfaced inline if raced anyway.
 */

import { GatewayApiError, GatewayUnreachableError, type Gateway } from "./api.js";
import {
  describeOutcome,
  sameLevels,
  type HumanAction,
  type IssueInfo,
  type SessionState,
  type SessionSummary,
  type TemplateInfo,
  type TimelineEvent,
} from "./model.js";

export interface ConsoleOptions {
  bots?: string[];
  deadline_rounds?: number;
  seed?: number;
}

export class ArenaConsole {
  templates: TemplateInfo[] = [];
  state: SessionState | null = null;
  summary: SessionSummary | null = null;
  timeline: TimelineEvent[] = [];
  draft: number[] = [];

  private inlineError = "";
  private unreachable = false;
  private busy = false;
  private lastRetry: () => Promise<void> = async () => {};

  constructor(
    private readonly root: HTMLElement,
    private readonly client: Gateway,
    private readonly options: ConsoleOptions = {},
  ) {}

  // -- lifecycle -------------------------------------------------------------

  async start(): Promise<void> {
    this.lastRetry = () => this.start();
    await this.guard(async () => {
      this.templates = await this.client.listTemplates();
    });
    this.render();
  }

  async startSession(templateName: string): Promise<void> {
    this.lastRetry = () => this.startSession(templateName);
    await this.guard(async () => {
      const bots = this.options.bots ?? ["conceder", "conceder"];
      const state = await this.client.createSession(templateName, bots, {
        deadline_rounds: this.options.deadline_rounds,
        seed: this.options.seed,
      });
      this.adoptState(state);
    });
    this.render();
  }

  async refresh(): Promise<void> {
    if (!this.state) return;
    const token = this.state.token;
    this.lastRetry = () => this.refresh();
    await this.guard(async () => {
      this.adoptState(await this.client.getState(token));
    });
    this.render();
  }

  async submit(action: HumanAction): Promise<void> {
    if (!this.state || this.busy) return;
    const token = this.state.token;
    const issues = this.state.issues ?? [];
    this.busy = true;
    this.inlineError = "";
    try {
      const state = await this.client.submitAction(token, action);
      this.recordOwnAction(action, issues);
      this.adoptState(state);
    } catch (error) {
      if (error instanceof GatewayApiError) {
        this.inlineError = error.reason;
      } else if (error instanceof GatewayUnreachableError) {
        this.unreachable = true;
        this.lastRetry = () => this.submit(action);
      } else {
        throw error;
      }
    } finally {
      this.busy = false;
    }
    this.render();
  }

  /** Fetch the gateway's valuation of the drafted outcome. Quotes are
   * advisory and may race a finishing session, so failures only blank
   * the display instead of surfacing. */
  async updateDraftUtility(): Promise<void> {
    if (!this.state || this.state.status !== "awaiting_human") return;
    const span = this.root.querySelector('[data-testid="draft-utility"]');
    try {
      const quote = await this.client.getUtility(this.state.token, this.draft);
      if (span) span.textContent = quote.utility.toFixed(4);
    } catch (error) {
      if (error instanceof GatewayApiError || error instanceof GatewayUnreachableError) {
        if (span) span.textContent = "…";
        return;
      }
      throw error;
    }
  }

  async retry(): Promise<void> {
    this.unreachable = false;
    await this.lastRetry();
  }

  /** The downloadable transcript: the summary's full match record. */
  transcriptJson(): string {
    if (!this.summary) throw new Error("session not finished");
    return JSON.stringify(this.summary.match_record);
  }

  // -- state bookkeeping -------------------------------------------------------

  private async guard(operation: () => Promise<void>): Promise<void> {
    this.inlineError = "";
    try {
      await operation();
      this.unreachable = false;
    } catch (error) {
      if (error instanceof GatewayUnreachableError) {
        this.unreachable = true;
      } else if (error instanceof GatewayApiError) {
        this.inlineError = error.reason;
      } else {
        throw error;
      }
    }
  }

  private recordOwnAction(action: HumanAction, issues: IssueInfo[]): void {
    const slot = this.state?.active_slot ?? 0;
    if (action.kind === "offer") {
      this.timeline.push({
        slot,
        actor: "you",
        text: `offered ${describeOutcome(issues, action.levels)}`,
      });
    } else if (action.kind === "accept") {
      this.timeline.push({ slot, actor: "you", text: "accepted the standing offer" });
    } else {
      this.timeline.push({ slot, actor: "you", text: "walked away" });
    }
  }

  private adoptState(state: SessionState): void {
    const previous = this.state;
    this.state = state;

    if (
      previous &&
      previous.active_slot !== null &&
      (state.active_slot === null || state.active_slot > previous.active_slot)
    ) {
      for (let slot = previous.active_slot; slot < state.finalized.length; slot += 1) {
        const deal = state.finalized[slot];
        this.timeline.push({
          slot,
          actor: "system",
          text: deal.agreement
            ? `slot ${slot + 1} agreed (your utility ${deal.own_utility?.toFixed(4)})`
            : `slot ${slot + 1} ended with no deal`,
        });
      }
    }
    const standing = state.standing_offer;
    if (
      state.status === "awaiting_human" &&
      standing &&
      !standing.mine &&
      !(previous && sameLevels(previous.standing_offer?.levels ?? null, standing.levels))
    ) {
      this.timeline.push({
        slot: state.active_slot ?? 0,
        actor: "opponent",
        text: `offered ${describeOutcome(state.issues ?? [], standing.levels)}`,
      });
    }

    const issueCount = state.issues?.length ?? 0;
    if (this.draft.length !== issueCount) {
      this.draft = new Array(issueCount).fill(0);
    }
  }

  // -- rendering ----------------------------------------------------------------

  private render(): void {
    if (this.unreachable) {
      this.renderBanner();
      return;
    }
    if (this.summary || this.state?.status === "finished") {
      void this.renderSummary();
      return;
    }
    if (this.state) {
      this.renderPlay();
      return;
    }
    this.renderLobby();
  }

  private renderBanner(): void {
    this.root.innerHTML = `
      <div data-testid="retry-banner" class="banner">
        gateway unreachable
        <button data-testid="btn-retry">retry</button>
      </div>`;
    this.root
      .querySelector('[data-testid="btn-retry"]')!
      .addEventListener("click", () => void this.retry());
  }

  private renderLobby(): void {
    const items = this.templates
      .map(
        (t) => `
        <li>
          <button data-testid="template-${t.name}" data-template="${t.name}">
            ${t.name}</button>
          <span class="slots">${t.slots} slot(s)</span>
          <p class="briefing">${t.briefing}</p>
        </li>`,
      )
      .join("");
    this.root.innerHTML = `
      <h1>negotiation arena</h1>
      <ul data-testid="template-list">${items}</ul>
      ${this.errorHtml()}`;
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("[data-template]")) {
      button.addEventListener("click", () => {
        void this.startSession(button.dataset.template!);
      });
    }
  }

  private errorHtml(): string {
    return this.inlineError
      ? `<p data-testid="error-inline" class="error">${this.inlineError}</p>`
      : "";
  }

  private renderPlay(): void {
    const state = this.state!;
    const issues = state.issues ?? [];
    const standing = state.standing_offer;
    const selectors = issues
      .map(
        (issue, k) => `
        <label>${issue.name}
          <select data-testid="issue-select-${issue.name}" data-issue="${k}">
            ${issue.values
              .map(
                (v, i) =>
                  `<option value="${i}" ${this.draft[k] === i ? "selected" : ""}>${String(v)}</option>`,
              )
              .join("")}
          </select>
        </label>`,
      )
      .join("");
    const standingHtml = standing
      ? `<p data-testid="standing-offer">
           ${standing.mine ? "your standing offer" : "opponent offers"}:
           ${describeOutcome(issues, standing.levels)}
           (your utility <span data-testid="standing-utility">${standing.own_utility.toFixed(4)}</span>)
         </p>`
      : `<p data-testid="standing-offer">no standing offer yet</p>`;
    this.root.innerHTML = `
      <h1>slot ${(state.active_slot ?? 0) + 1} of ${state.slot_count}</h1>
      <p data-testid="round">round ${state.round} / ${state.deadline_rounds}</p>
      ${standingHtml}
      <div data-testid="composer">
        ${selectors}
        <p>drafted utility: <span data-testid="draft-utility">…</span></p>
        <button data-testid="btn-offer" ${this.busy ? "disabled" : ""}>offer</button>
        <button data-testid="btn-accept" ${state.can_accept && !this.busy ? "" : "disabled"}>accept</button>
        <button data-testid="btn-end" ${this.busy ? "disabled" : ""}>walk away</button>
      </div>
      ${this.errorHtml()}
      <ol data-testid="timeline">
        ${this.timeline.map((e) => `<li data-actor="${e.actor}">[slot ${e.slot + 1}] ${e.actor}: ${e.text}</li>`).join("")}
      </ol>`;
    for (const select of this.root.querySelectorAll<HTMLSelectElement>("[data-issue]")) {
      select.addEventListener("change", () => {
        this.draft[Number(select.dataset.issue)] = Number(select.value);
        void this.updateDraftUtility();
      });
    }
    this.root
      .querySelector('[data-testid="btn-offer"]')!
      .addEventListener("click", () => void this.submit({ kind: "offer", levels: [...this.draft] }));
    this.root
      .querySelector('[data-testid="btn-accept"]')!
      .addEventListener("click", () => void this.submit({ kind: "accept" }));
    this.root
      .querySelector('[data-testid="btn-end"]')!
      .addEventListener("click", () => void this.submit({ kind: "end" }));
    void this.updateDraftUtility();
  }

  private async renderSummary(): Promise<void> {
    if (!this.summary) {
      const token = this.state!.token;
      this.lastRetry = () => this.renderSummary();
      await this.guard(async () => {
        this.summary = await this.client.getSummary(token);
      });
      if (!this.summary) {
        this.render();
        return;
      }
    }
    const summary = this.summary;
    const rows = summary.per_slot
      .map(
        (s) => `
        <tr data-testid="summary-slot-${s.slot}">
          <td>slot ${s.slot + 1}</td>
          <td>${s.agreement ? s.agreement.join(",") : "no deal"}</td>
          <td>${s.own_utility === null ? "–" : s.own_utility.toFixed(4)}</td>
          <td data-testid="nash-distance-${s.slot}">${s.nash_distance === null ? "–" : s.nash_distance.toFixed(4)}</td>
        </tr>`,
      )
      .join("");
    const download = `data:application/json;charset=utf-8,${encodeURIComponent(this.transcriptJson())}`;
    this.root.innerHTML = `
      <h1>session finished</h1>
      <p>your overall utility:
        <strong data-testid="center-utility">${summary.center_utility.toFixed(6)}</strong></p>
      <table>
        <thead><tr><th>slot</th><th>agreement</th><th>your utility</th><th>nash distance</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>
      <a data-testid="download" href="${download}" download="match.json">download transcript</a>
      <ol data-testid="timeline">
        ${this.timeline.map((e) => `<li>[slot ${e.slot + 1}] ${e.actor}: ${e.text}</li>`).join("")}
      </ol>`;
  }
}
