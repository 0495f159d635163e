import { ApiClient } from "./api";
import { ChatState } from "./chat";
import { Dashboard } from "./dashboard";
import { ExplorerState } from "./explorer";
import { renderChat, renderDashboard, renderExplorer, renderQueue } from "./render";
import { ReviewQueue } from "./reviewQueue";
import { decodeState, encodeState, type ViewState } from "./urlState";

// API base URL: ?api=… at runtime, VITE_API_BASE at build time, else same origin.
const runtimeBase = new URLSearchParams(window.location.search).get("api");
const buildBase = (import.meta as unknown as { env: Record<string, string | undefined> }).env
  ?.VITE_API_BASE;
const api = new ApiClient(runtimeBase ?? buildBase ?? "");

const queue = new ReviewQueue(api);
const explorer = new ExplorerState(api);
const dashboard = new Dashboard(api);
const chat = new ChatState(api);

const tabsBar = document.getElementById("tabs")!;
const content = document.getElementById("content")!;
let view: ViewState = decodeState(window.location.hash);

function pushState(): void {
  const encoded = encodeState(view);
  if (window.location.hash !== encoded) window.history.replaceState(null, "", encoded);
}

async function show(tab: ViewState["tab"]): Promise<void> {
  view.tab = tab;
  pushState();
  for (const button of tabsBar.querySelectorAll("button")) {
    button.classList.toggle("active", button.dataset.tab === tab);
  }
  if (tab === "queue") {
    await queue.load(view.queueFilter, view.queuePage ?? 1);
    await redrawQueue();
  } else if (tab === "explorer") {
    if (view.source) {
      await explorer.explore(view.source, view.k ?? 1, view.direction ?? "both");
      if (view.target) {
        explorer.selection = [view.source, view.target];
        await explorer.requestPaths(view.maxHops ?? 4);
      }
    }
    redrawExplorer();
  } else if (tab === "dashboard") {
    await dashboard.load();
    renderDashboard(content, dashboard);
  } else {
    renderChat(content, chat, ask);
  }
}

async function redrawQueue(): Promise<void> {
  const detail = await queue.currentDetail().catch(() => null);
  renderQueue(content, queue, detail);
}

function redrawExplorer(): void {
  const controls = document.createElement("div");
  controls.className = "controls";
  const input = document.createElement("input");
  input.placeholder = "entity label";
  input.value = view.source ?? "";
  const kSelect = document.createElement("select");
  for (const k of [1, 2, 3, 4]) {
    const option = document.createElement("option");
    option.value = String(k);
    option.textContent = `k=${k}`;
    if ((view.k ?? 1) === k) option.selected = true;
    kSelect.appendChild(option);
  }
  const go = document.createElement("button");
  go.textContent = "explore";
  go.onclick = async () => {
    view.source = input.value.trim();
    view.k = Number(kSelect.value);
    delete view.target;
    pushState();
    await explorer.explore(view.source, view.k);
    redrawExplorer();
  };
  const pathsButton = document.createElement("button");
  pathsButton.textContent = "paths between selected";
  pathsButton.onclick = async () => {
    await explorer.requestPaths(view.maxHops ?? 4);
    if (explorer.selection.length === 2) {
      view.source = explorer.selection[0];
      view.target = explorer.selection[1];
      pushState();
    }
    redrawExplorer();
  };
  const exportButton = document.createElement("button");
  exportButton.textContent = "export subgraph (.nt)";
  exportButton.onclick = () => {
    const blob = new Blob([explorer.exportNt()], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "subgraph.nt";
    link.click();
    URL.revokeObjectURL(link.href);
  };
  controls.append(input, kSelect, go, pathsButton, exportButton);

  renderExplorer(
    content,
    explorer,
    (label) => {
      void explorer.expand(label, 1).then(() => redrawExplorer());
    },
    (label) => {
      explorer.select(label);
      redrawExplorer();
    },
  );
  content.prepend(controls);
}

function ask(question: string): void {
  void chat.ask(question).then(() => renderChat(content, chat, ask));
}

queue.onChange(() => {
  if (view.tab === "queue") void redrawQueue();
});

window.addEventListener("keydown", (event) => {
  if (view.tab !== "queue") return;
  if (event.target instanceof HTMLInputElement) return;
  if (["f", "n", "ArrowRight", "ArrowLeft", "ArrowUp", "ArrowDown"].includes(event.key)) {
    event.preventDefault();
    void queue.handleKey(event.key);
  }
});

for (const button of tabsBar.querySelectorAll("button")) {
  button.addEventListener("click", () => void show(button.dataset.tab as ViewState["tab"]));
}

window.addEventListener("hashchange", () => {
  view = decodeState(window.location.hash);
  void show(view.tab);
});

void show(view.tab);
