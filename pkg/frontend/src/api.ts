// Thin client over the arena REST API. Segment previews are cached per
// battle and concurrent hovers on the same chip share a single request.

import type {
  BattlePayload,
  LeaderboardEntry,
  PipelineInfo,
  SegmentPreview,
  VoteChoice,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

async function readError(res: Response): Promise<ApiError> {
  let detail = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(res.status, detail);
}

export class ArenaApi {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path);
    if (!res.ok) throw await readError(res);
    return (await res.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw await readError(res);
    return (await res.json()) as T;
  }

  listPipelines(): Promise<PipelineInfo[]> {
    return this.getJson("/api/pipelines");
  }

  createBattle(topic: string, left: string, right: string, blinded: boolean): Promise<BattlePayload> {
    return this.postJson("/api/arena/battles", { topic, left, right, blinded });
  }

  getBattle(battleId: string): Promise<BattlePayload> {
    return this.getJson(`/api/arena/battles/${encodeURIComponent(battleId)}`);
  }

  vote(battleId: string, choice: VoteChoice, voter = "webui"): Promise<BattlePayload> {
    return this.postJson(`/api/arena/battles/${encodeURIComponent(battleId)}/vote`, {
      choice,
      voter,
    });
  }

  leaderboard(): Promise<LeaderboardEntry[]> {
    return this.getJson("/api/arena/leaderboard");
  }

  segment(segmentId: string): Promise<SegmentPreview> {
    return this.getJson(`/api/segments/${encodeURIComponent(segmentId)}`);
  }
}

/** Per-battle preview cache; repeated hovers trigger exactly one fetch. */
export class SegmentPreviewCache {
  private cache = new Map<string, Promise<SegmentPreview>>();

  constructor(private api: ArenaApi) {}

  get(segmentId: string): Promise<SegmentPreview> {
    let pending = this.cache.get(segmentId);
    if (!pending) {
      pending = this.api.segment(segmentId).catch((err) => {
        this.cache.delete(segmentId); // do not cache failures
        throw err;
      });
      this.cache.set(segmentId, pending);
    }
    return pending;
  }

  clear(): void {
    this.cache.clear();
  }
}
