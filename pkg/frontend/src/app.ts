// Browser bootstrap: wires the controller to the page, handles the topic
// form, tab switching, citation hover previews, voting, and dark mode.

import { ArenaApi } from "./api";
import { BattleController } from "./controller";
import { renderLeaderboard } from "./render";
import type { VoteChoice } from "./types";

const api = new ArenaApi(
  (window as unknown as { RAGKIT_API_BASE?: string }).RAGKIT_API_BASE ?? "",
);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function toast(message: string): void {
  const node = el<HTMLDivElement>("toast");
  node.textContent = message;
  node.classList.add("visible");
  setTimeout(() => node.classList.remove("visible"), 2500);
}

const controller = new BattleController(api, {
  onRender: (battleHtml, responsesHtml) => {
    el("battle-root").innerHTML = battleHtml;
    el("responses-root").innerHTML = responsesHtml;
  },
  onReveal: () => toast("identities revealed"),
  onToast: toast,
});

async function refreshPipelines(): Promise<void> {
  const pipelines = await api.listPipelines();
  for (const id of ["left-select", "right-select"]) {
    const select = el<HTMLSelectElement>(id);
    select.innerHTML = pipelines
      .map((p) => `<option value="${p.id}">${p.id}</option>`)
      .join("");
  }
  const right = el<HTMLSelectElement>("right-select");
  if (pipelines.length > 1) right.selectedIndex = 1;
}

async function refreshLeaderboard(): Promise<void> {
  el("leaderboard-root").innerHTML = renderLeaderboard(await api.leaderboard());
}

function activateTab(name: string): void {
  for (const tab of document.querySelectorAll<HTMLElement>("[data-tab]")) {
    tab.classList.toggle("active", tab.dataset.tab === name);
  }
  for (const panel of document.querySelectorAll<HTMLElement>("[data-panel]")) {
    panel.hidden = panel.dataset.panel !== name;
  }
  if (name === "leaderboard") void refreshLeaderboard();
}

let popover: HTMLDivElement | null = null;

function hidePopover(): void {
  popover?.remove();
  popover = null;
}

async function showPopover(chip: HTMLElement): Promise<void> {
  const segmentId = chip.dataset.ref;
  if (!segmentId) return;
  const html = await controller.preview(segmentId);
  hidePopover();
  popover = document.createElement("div");
  popover.className = "popover-anchor";
  popover.innerHTML = html;
  document.body.appendChild(popover);
  const rect = chip.getBoundingClientRect();
  popover.style.left = `${Math.max(8, rect.left - 120)}px`;
  popover.style.top = `${rect.bottom + window.scrollY + 6}px`;
}

function wireEvents(): void {
  el<HTMLFormElement>("battle-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const topic = el<HTMLInputElement>("topic-input").value.trim();
    if (!topic) return;
    void controller
      .start(
        topic,
        el<HTMLSelectElement>("left-select").value,
        el<HTMLSelectElement>("right-select").value,
        el<HTMLInputElement>("blinded-input").checked,
      )
      .catch((err) => toast(String(err)));
    activateTab("battle");
  });

  el("battle-root").addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const btn = target.closest<HTMLButtonElement>(".vote-btn");
    if (btn && !btn.disabled) void controller.vote(btn.dataset.choice as VoteChoice);
  });

  el("battle-root").addEventListener("mouseover", (ev) => {
    const chip = (ev.target as HTMLElement).closest<HTMLElement>(".chip");
    if (chip) void showPopover(chip);
  });
  el("battle-root").addEventListener("mouseout", (ev) => {
    if ((ev.target as HTMLElement).closest(".chip")) hidePopover();
  });

  for (const tab of document.querySelectorAll<HTMLElement>("[data-tab]")) {
    tab.addEventListener("click", () => activateTab(tab.dataset.tab ?? "battle"));
  }

  el("dark-toggle").addEventListener("click", () => {
    document.body.classList.toggle("dark");
  });
}

wireEvents();
activateTab("battle");
void refreshPipelines().catch((err) => toast(String(err)));
