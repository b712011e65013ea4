import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  exactResponseJson,
  renderAnswerPane,
  renderBattle,
  renderErrorPanel,
  renderLeaderboard,
  renderPreviewPopover,
  renderResponsesTab,
  validateBattlePayload,
} from "../src/render";
import type { BattlePayload, LeaderboardEntry, RagResponse, SegmentPreview } from "../src/types";

function fixture(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");
}

const prevoteRaw = fixture("battle_prevote.json");
const votedRaw = fixture("battle_voted.json");
const prevote = JSON.parse(prevoteRaw) as BattlePayload;
const voted = JSON.parse(votedRaw) as BattlePayload;
const secrets = (JSON.parse(fixture("secrets.json")) as { secrets: string[] }).secrets;

/** Inverse of the HTML attribute/body encoding, as the DOM would apply. */
function unescapeHtml(text: string): string {
  return text
    .replace(/&quot;/g, '"')
    .replace(/&#39;/g, "'")
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&amp;/g, "&");
}

describe("blinding", () => {
  it("pre-vote battle DOM contains no pipeline or backend substring", () => {
    const html = renderBattle(prevote);
    for (const secret of secrets) {
      expect(html, `leaked ${secret}`).not.toContain(secret);
    }
    expect(html).toContain("System A");
    expect(html).toContain("System B");
  });

  it("pre-vote responses tab is equally blinded", () => {
    const html = renderResponsesTab(prevote);
    for (const secret of secrets) {
      expect(html, `leaked ${secret}`).not.toContain(secret);
    }
  });

  it("post-vote battle shows real pipeline identities", () => {
    const html = renderBattle(voted);
    expect(html).toContain(voted.pipelines!.A);
    expect(html).toContain(voted.pipelines!.B);
    expect(html).toContain("reveal-banner");
  });
});

describe("citation chips", () => {
  it("chip count per sentence equals the citation list length", () => {
    for (const label of ["A", "B"] as const) {
      const response = prevote.sides[label].response!;
      const html = renderAnswerPane(response, null);
      const sentences = html.match(/<span class="sentence">.*?<\/span>/g) ?? [];
      expect(sentences.length).toBe(response.answer.length);
      sentences.forEach((s, i) => {
        const chips = s.match(/<sup class="chip"/g) ?? [];
        expect(chips.length).toBe(response.answer[i].citations.length);
      });
    }
  });

  it("chips display 1-based labels while data stays 0-based", () => {
    const response: RagResponse = {
      run_id: "r",
      topic_id: "t",
      references: ["ref-a#0", "ref-b#0", "ref-c#0"],
      answer: [{ text: "Cited claim.", citations: [0, 2] }],
      response_length: 12,
    };
    const html = renderAnswerPane(response, null);
    expect(html).toContain('data-citation="0" data-ref="ref-a#0">1</sup>');
    expect(html).toContain('data-citation="2" data-ref="ref-c#0">3</sup>');
  });

  it("a seven-sentence record renders seven sentence rows", () => {
    const answer = [[], [], [0], [], [1], [], [2]].map((citations, i) => ({
      text: `Sentence number ${i + 1}.`,
      citations,
    }));
    const response: RagResponse = {
      run_id: "r",
      topic_id: "t",
      references: Array.from({ length: 10 }, (_, i) => `seg${i}#0`),
      answer,
      response_length: answer.reduce((n, s) => n + s.text.length, 0),
    };
    const html = renderAnswerPane(response, null);
    expect(html.match(/<span class="sentence">/g)!.length).toBe(7);
  });

  it("empty answer renders the placeholder", () => {
    const empty: RagResponse = {
      run_id: "r",
      topic_id: "t",
      references: [],
      answer: [],
      response_length: 0,
    };
    expect(renderAnswerPane(empty, null)).toContain("no answer produced");
    expect(renderAnswerPane(null, null)).toContain("no answer produced");
  });
});

describe("payload validation", () => {
  it("invalid payload yields an error panel and no partial render", () => {
    const broken = { battle_id: "x" } as unknown as BattlePayload;
    const html = renderBattle(broken);
    expect(html).toContain("error-panel");
    expect(html).not.toContain("battle-sides");
    expect(validateBattlePayload(broken)).toMatch(/missing key/);
    expect(validateBattlePayload(prevote)).toBeNull();
  });

  it("error panel escapes its message", () => {
    expect(renderErrorPanel("<img>")).not.toContain("<img>");
  });
});

describe("responses tab", () => {
  it("exact serialization is byte-identical to the record inside the API payload", () => {
    for (const label of ["A", "B"] as const) {
      const exact = exactResponseJson(prevote.sides[label].response!);
      expect(prevoteRaw).toContain(exact);
    }
  });

  it("data-exact attribute decodes to exactly those bytes", () => {
    const html = renderResponsesTab(prevote);
    const matches = [...html.matchAll(/data-exact="([^"]*)"/g)];
    expect(matches.length).toBe(2);
    expect(unescapeHtml(matches[0][1])).toBe(exactResponseJson(prevote.sides.A.response!));
    expect(unescapeHtml(matches[1][1])).toBe(exactResponseJson(prevote.sides.B.response!));
  });

  it("the shown JSON parses back to the identical record", () => {
    const html = renderResponsesTab(prevote);
    const pres = [...html.matchAll(/<pre>([\s\S]*?)<\/pre>/g)];
    expect(pres.length).toBe(2);
    expect(JSON.parse(unescapeHtml(pres[0][1]))).toEqual(prevote.sides.A.response);
    expect(JSON.parse(unescapeHtml(pres[1][1]))).toEqual(prevote.sides.B.response);
  });
});

describe("preview popover", () => {
  it("renders title, truncated text, and url", () => {
    const preview = JSON.parse(fixture("segment_preview.json")) as SegmentPreview;
    const html = renderPreviewPopover(preview, 60);
    expect(html).toContain(escapeHtml(preview.title));
    expect(html).toContain(escapeHtml(preview.url));
    if (preview.text.length > 60) {
      expect(html).toContain("…");
    }
  });

  it("missing segment falls back", () => {
    expect(renderPreviewPopover(null)).toContain("segment unavailable");
  });
});

describe("leaderboard", () => {
  it("renders one row per entry", () => {
    const entries = JSON.parse(fixture("leaderboard.json")) as LeaderboardEntry[];
    const html = renderLeaderboard(entries);
    expect(html.match(/<tr><td>/g)!.length).toBe(entries.length);
    for (const e of entries) expect(html).toContain(e.pipeline_id);
  });
});
