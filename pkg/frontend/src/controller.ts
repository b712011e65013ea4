// Battle view state machine: loads battles, submits a single-flight vote,
// fires the reveal exactly once, and resolves hover previews through the
// per-battle cache.

import { ApiError, ArenaApi, SegmentPreviewCache } from "./api";
import { renderBattle, renderPreviewPopover, renderResponsesTab } from "./render";
import type { BattlePayload, VoteChoice } from "./types";

export type ControllerEvents = {
  onRender: (battleHtml: string, responsesHtml: string) => void;
  onReveal?: (payload: BattlePayload) => void;
  onToast?: (message: string) => void;
};

export class BattleController {
  payload: BattlePayload | null = null;
  private previews: SegmentPreviewCache;
  private voteInFlight = false;
  private revealed = false;

  constructor(private api: ArenaApi, private events: ControllerEvents) {
    this.previews = new SegmentPreviewCache(api);
  }

  private apply(payload: BattlePayload): void {
    const wasVoted = this.payload?.state === "voted";
    this.payload = payload;
    this.events.onRender(renderBattle(payload), renderResponsesTab(payload));
    if (payload.state === "voted" && !wasVoted && !this.revealed) {
      this.revealed = true;
      this.events.onReveal?.(payload);
    }
  }

  async start(topic: string, left: string, right: string, blinded: boolean): Promise<void> {
    this.revealed = false;
    this.previews.clear();
    this.apply(await this.api.createBattle(topic, left, right, blinded));
  }

  async load(battleId: string): Promise<void> {
    this.revealed = false;
    this.previews.clear();
    const payload = await this.api.getBattle(battleId);
    this.revealed = payload.state === "voted"; // no reveal event for old votes
    this.apply(payload);
  }

  /** Submit a vote; concurrent calls collapse to one request. */
  async vote(choice: VoteChoice): Promise<void> {
    if (this.payload === null || this.voteInFlight) return;
    if (this.payload.state === "voted") {
      this.events.onToast?.("already voted");
      return;
    }
    this.voteInFlight = true;
    try {
      this.apply(await this.api.vote(this.payload.battle_id, choice));
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.events.onToast?.(err.detail);
        this.apply(await this.api.getBattle(this.payload.battle_id));
      } else {
        this.events.onToast?.(String(err));
      }
    } finally {
      this.voteInFlight = false;
    }
  }

  /** Popover HTML for a citation chip; cached per battle. */
  async preview(segmentId: string): Promise<string> {
    try {
      return renderPreviewPopover(await this.previews.get(segmentId));
    } catch {
      return renderPreviewPopover(null);
    }
  }
}
