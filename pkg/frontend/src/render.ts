// DOM glue. Everything here is presentation only: numbers and lists come
// straight from the state objects, which hold raw API payloads.

import type { ExplorerState } from "./explorer";
import { layoutGraph } from "./layout";
import type { ReviewQueue } from "./reviewQueue";
import type { Dashboard } from "./dashboard";
import type { ChatState } from "./chat";
import type { TripleDetail, TriplePayload } from "./types";

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function sentence(t: TriplePayload): string {
  return `${t.subject} ${t.negated ? "not " : ""}${t.predicate} ${t.object}`;
}

export function renderQueue(root: HTMLElement, queue: ReviewQueue, detail: TripleDetail | null): void {
  root.replaceChildren();
  const snap = queue.snapshot();

  if (snap.banner) {
    const banner = el("div", "banner", snap.banner + " ");
    const retry = el("button", "", "retry now") as HTMLButtonElement;
    retry.onclick = () => void queue.retryPending();
    banner.appendChild(retry);
    root.appendChild(banner);
  }

  root.appendChild(
    el(
      "div",
      "progress",
      `reviewed ${snap.reviewedTotal} so far · ${snap.total} in this queue · keys: f=factual n=non-factual arrows=navigate`,
    ),
  );

  const card = queue.current;
  if (!card) {
    root.appendChild(el("p", "empty", "Queue is empty."));
    return;
  }

  const box = el("div", "card");
  box.appendChild(el("h2", "", sentence(card)));
  box.appendChild(el("div", "meta", `status: ${card.status} · machine: ${card.machine_outcome ?? "none"} · id ${card.id}`));

  if (detail?.validation) {
    const v = detail.validation;
    box.appendChild(el("div", "tally", `votes: ${v.yes_count} yes / ${v.no_count} no → ${v.outcome}`));
    const list = el("ul", "evidence");
    for (const page of v.judged_pages) {
      const item = el("li");
      const link = el("a", "", page.url) as HTMLAnchorElement;
      link.href = page.url;
      link.target = "_blank";
      item.appendChild(link);
      item.appendChild(
        el("span", "", ` [${page.relevance_score.toFixed(1)}] ${page.verdict ?? "?"} — ${page.reason}`),
      );
      list.appendChild(item);
    }
    box.appendChild(list);
    if (v.notes.length) box.appendChild(el("div", "notes", `notes: ${v.notes.join("; ")}`));
  } else {
    box.appendChild(el("div", "tally", "no validation record"));
  }
  if (detail?.review) {
    box.appendChild(
      el("div", "review", `expert: ${detail.review.expert_label} by ${detail.review.reviewer} at ${detail.review.timestamp}`),
    );
  }

  const buttons = el("div", "buttons");
  const accept = el("button", "", "factual (f)") as HTMLButtonElement;
  accept.onclick = () => void queue.decide("expert-factual");
  const reject = el("button", "", "non-factual (n)") as HTMLButtonElement;
  reject.onclick = () => void queue.decide("expert-non-factual");
  buttons.append(accept, reject);
  box.appendChild(buttons);
  root.appendChild(box);
}

export function renderExplorer(root: HTMLElement, explorer: ExplorerState, onExpand: (label: string) => void, onSelect: (label: string) => void): void {
  root.replaceChildren();
  if (explorer.message) root.appendChild(el("div", "banner", explorer.message));
  if (explorer.overCap) return;

  root.appendChild(
    el("div", "meta", `${explorer.nodeCount()} nodes · ${explorer.edgeCount()} edges · selected: ${explorer.selection.join(" → ") || "none"} · breadcrumbs: ${explorer.breadcrumbs.join(" › ")}`),
  );

  const labels = [...explorer.nodes.keys()];
  const edges: [string, string][] = [...explorer.edges.values()].map((t) => [t.subject, t.object]);
  const positions = layoutGraph(labels, edges);

  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", "0 0 800 600");
  svg.setAttribute("class", "graph");
  for (const triple of explorer.edges.values()) {
    const a = positions.get(triple.subject);
    const b = positions.get(triple.object);
    if (!a || !b) continue;
    const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", triple.negated ? "edge negated" : "edge");
    const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
    title.textContent = sentence(triple);
    line.appendChild(title);
    svg.appendChild(line);
  }
  for (const label of labels) {
    const p = positions.get(label)!;
    const group = document.createElementNS("http://www.w3.org/2000/svg", "g");
    const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    circle.setAttribute("cx", String(p.x));
    circle.setAttribute("cy", String(p.y));
    circle.setAttribute("r", "14");
    circle.setAttribute(
      "class",
      explorer.selection.includes(label) ? "node selected" : "node",
    );
    circle.addEventListener("click", (event) => {
      if (event.shiftKey) onSelect(label);
      else onExpand(label);
    });
    const text = document.createElementNS("http://www.w3.org/2000/svg", "text");
    text.setAttribute("x", String(p.x));
    text.setAttribute("y", String(p.y - 18));
    text.setAttribute("text-anchor", "middle");
    text.textContent = label;
    group.append(circle, text);
    svg.appendChild(group);
  }
  root.appendChild(svg);
  root.appendChild(el("div", "hint", "click a node to expand its neighborhood · shift-click to select path endpoints"));

  if (explorer.lastPaths) {
    const pathsBox = el("div", "paths");
    pathsBox.appendChild(el("h3", "", `paths ${explorer.lastPaths.source} → ${explorer.lastPaths.target}${explorer.lastPaths.truncated ? " (truncated)" : ""}`));
    explorer.lastPaths.paths.forEach((path, index) => {
      const item = el("div", "path");
      item.appendChild(el("strong", "", `Path ${index + 1} (${path.triples.length} hops): `));
      item.appendChild(el("span", "", path.triples.map(sentence).join(" · ")));
      pathsBox.appendChild(item);
    });
    if (!explorer.lastPaths.paths.length) pathsBox.appendChild(el("div", "", "no path within the hop limit"));
    root.appendChild(pathsBox);
  }
}

export function renderDashboard(root: HTMLElement, dashboard: Dashboard): void {
  root.replaceChildren();
  const statsPanel = el("div", "panel");
  statsPanel.appendChild(el("h3", "", "Graph"));
  if (dashboard.stats.error) {
    statsPanel.appendChild(el("div", "error", `error: ${dashboard.stats.error}`));
  } else if (dashboard.stats.data) {
    const s = dashboard.stats.data;
    statsPanel.appendChild(el("div", "", `${s.triple_count} triples · ${s.unique_entity_count} entities · ${s.unique_relation_count} relations`));
    statsPanel.appendChild(el("div", "", `candidates ${s.candidate_count} · rejected ${s.rejected_count} · reviews ${s.review_count}`));
    const list = el("ul", "histogram");
    for (const [status, count] of Object.entries(s.status_histogram)) {
      list.appendChild(el("li", "", `${status}: ${count}`));
    }
    statsPanel.appendChild(list);
  }
  root.appendChild(statsPanel);

  const agreementPanel = el("div", "panel");
  agreementPanel.appendChild(el("h3", "", "Machine vs expert agreement"));
  agreementPanel.appendChild(el("div", "", dashboard.agreementText()));
  root.appendChild(agreementPanel);
}

export function renderChat(root: HTMLElement, chat: ChatState, onAsk: (question: string) => void): void {
  root.replaceChildren();
  const log = el("div", "chatlog");
  for (const turn of chat.turns) {
    log.appendChild(el("div", "question", `you: ${turn.question}`));
    log.appendChild(
      el(
        "div",
        turn.error ? "error" : "answer",
        turn.error ? `error: ${turn.error}` : `graph: ${turn.answer} (cites ${turn.citedTripleIds.length} statements)`,
      ),
    );
  }
  root.appendChild(log);
  const input = el("input") as HTMLInputElement;
  input.placeholder = "ask the graph…";
  const send = el("button", "", "ask") as HTMLButtonElement;
  send.onclick = () => {
    if (input.value.trim()) {
      onAsk(input.value.trim());
      input.value = "";
    }
  };
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") send.click();
  });
  const bar = el("div", "chatbar");
  bar.append(input, send);
  root.appendChild(bar);
}
