// Pure HTML renderers for the arena views. Everything user- or corpus-
// derived goes through escapeHtml; citation chips display 1-based numbers
// while the underlying data stays zero-based (the offset lives here only).

import type { BattlePayload, BattleSide, LeaderboardEntry, RagResponse, SegmentPreview } from "./types";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function validateBattlePayload(payload: unknown): string | null {
  if (typeof payload !== "object" || payload === null) return "payload is not an object";
  const p = payload as Record<string, unknown>;
  for (const key of ["battle_id", "topic", "state", "blinded", "sides"]) {
    if (!(key in p)) return `missing key: ${key}`;
  }
  const sides = p.sides as Record<string, unknown>;
  for (const label of ["A", "B"]) {
    if (!(label in sides)) return `missing side: ${label}`;
  }
  return null;
}

export function renderErrorPanel(message: string): string {
  return `<div class="error-panel">Cannot display battle: ${escapeHtml(message)}</div>`;
}

function chipHtml(citation: number, segmentId: string | undefined): string {
  const label = citation + 1; // display is 1-based, data stays 0-based
  const ref = segmentId === undefined ? "" : ` data-ref="${escapeHtml(segmentId)}"`;
  return `<sup class="chip" data-citation="${citation}"${ref}>${label}</sup>`;
}

export function renderAnswerPane(response: RagResponse | null, error: string | null): string {
  if (error !== null) {
    return `<div class="pane-error">${escapeHtml(error)}</div>`;
  }
  if (response === null || response.answer.length === 0) {
    return `<div class="pane-empty">no answer produced</div>`;
  }
  const sentences = response.answer.map((sentence) => {
    const chips = sentence.citations
      .map((c) => chipHtml(c, response.references[c]))
      .join("");
    return `<span class="sentence">${escapeHtml(sentence.text)}${chips}</span>`;
  });
  return `<div class="answer">${sentences.join(" ")}</div>`;
}

function sideLabel(payload: BattlePayload, label: "A" | "B"): string {
  if (payload.pipelines) return payload.pipelines[label];
  return `System ${label}`;
}

function renderSide(payload: BattlePayload, label: "A" | "B"): string {
  const side: BattleSide = payload.sides[label];
  return [
    `<section class="battle-side" data-label="${label}" data-side="${side.side}">`,
    `<h3 class="side-name">${escapeHtml(sideLabel(payload, label))}</h3>`,
    renderAnswerPane(side.response, side.error),
    `</section>`,
  ].join("\n");
}

function renderVoteControls(payload: BattlePayload): string {
  const disabled = payload.state === "voted" || payload.state !== "answered" ? " disabled" : "";
  const buttons = [
    ["left", "&#128072; Left is better"],
    ["tie", "Tie"],
    ["both_bad", "Both bad"],
    ["right", "Right is better &#128073;"],
  ]
    .map(
      ([choice, text]) =>
        `<button class="vote-btn" data-choice="${choice}"${disabled}>${text}</button>`,
    )
    .join("");
  return `<div class="vote-controls">${buttons}</div>`;
}

function renderRevealBanner(payload: BattlePayload): string {
  if (payload.state !== "voted" || !payload.pipelines) return "";
  const vote = payload.vote ? escapeHtml(payload.vote.choice) : "?";
  return (
    `<div class="reveal-banner">Vote recorded (<b>${vote}</b>). ` +
    `A = <b>${escapeHtml(payload.pipelines.A)}</b>, ` +
    `B = <b>${escapeHtml(payload.pipelines.B)}</b></div>`
  );
}

export function renderBattle(payload: BattlePayload): string {
  const invalid = validateBattlePayload(payload);
  if (invalid !== null) return renderErrorPanel(invalid);
  return [
    `<article class="battle" data-battle-id="${escapeHtml(payload.battle_id)}" data-state="${payload.state}">`,
    `<h2 class="topic">${escapeHtml(payload.topic)}</h2>`,
    renderRevealBanner(payload),
    `<div class="battle-sides">`,
    renderSide(payload, "A"),
    renderSide(payload, "B"),
    `</div>`,
    renderVoteControls(payload),
    `</article>`,
  ].join("\n");
}

/**
 * Responses tab: the serialized records exactly as the API sent them.
 * The compact form (data-exact) is byte-identical to the record inside the
 * battle payload; the visible body is an indented rendering of the same
 * object, never a re-derivation.
 */
export function exactResponseJson(response: RagResponse): string {
  return JSON.stringify(response);
}

export function renderResponsesTab(payload: BattlePayload): string {
  const invalid = validateBattlePayload(payload);
  if (invalid !== null) return renderErrorPanel(invalid);
  const panels = (["A", "B"] as const).map((label) => {
    const side = payload.sides[label];
    if (side.response === null) {
      return `<section class="response-json" data-label="${label}"><div class="pane-empty">no response</div></section>`;
    }
    const exact = exactResponseJson(side.response);
    const pretty = JSON.stringify(side.response, null, 2);
    return [
      `<section class="response-json" data-label="${label}" data-exact="${escapeHtml(exact)}">`,
      `<h3>${escapeHtml(sideLabel(payload, label))}</h3>`,
      `<pre>${escapeHtml(pretty)}</pre>`,
      `</section>`,
    ].join("\n");
  });
  return `<div class="responses-tab">${panels.join("\n")}</div>`;
}

export function renderPreviewPopover(preview: SegmentPreview | null, maxChars = 400): string {
  if (preview === null) {
    return `<div class="popover popover-missing">segment unavailable</div>`;
  }
  const text =
    preview.text.length > maxChars ? preview.text.slice(0, maxChars) + "…" : preview.text;
  return [
    `<div class="popover" data-segment-id="${escapeHtml(preview.segment_id)}">`,
    `<div class="popover-title">${escapeHtml(preview.title)}</div>`,
    `<div class="popover-text">${escapeHtml(text)}</div>`,
    `<div class="popover-url">${escapeHtml(preview.url)}</div>`,
    `</div>`,
  ].join("\n");
}

export function renderLeaderboard(entries: LeaderboardEntry[]): string {
  const rows = entries
    .map(
      (e) =>
        `<tr><td>${escapeHtml(e.pipeline_id)}</td><td>${e.rating.toFixed(1)}</td>` +
        `<td>${e.wins}</td><td>${e.losses}</td><td>${e.ties}</td><td>${e.both_bad}</td></tr>`,
    )
    .join("");
  return (
    `<table class="leaderboard"><thead><tr>` +
    `<th>pipeline</th><th>rating</th><th>wins</th><th>losses</th><th>ties</th><th>both bad</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}
