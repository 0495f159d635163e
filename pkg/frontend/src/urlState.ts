// Deep-linkable view state: everything needed to reproduce a tab after a
// reload is packed into the URL hash. The server stays the only source of
// truth for data; the hash only holds view parameters.

export interface ViewState {
  tab: "queue" | "explorer" | "dashboard" | "chat";
  queueFilter?: string;
  queuePage?: number;
  source?: string;
  target?: string;
  k?: number;
  direction?: string;
  maxHops?: number;
}

const TABS = new Set(["queue", "explorer", "dashboard", "chat"]);

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("tab", state.tab);
  if (state.queueFilter) params.set("filter", state.queueFilter);
  if (state.queuePage && state.queuePage > 1) params.set("qpage", String(state.queuePage));
  if (state.source) params.set("source", state.source);
  if (state.target) params.set("target", state.target);
  if (state.k !== undefined) params.set("k", String(state.k));
  if (state.direction) params.set("direction", state.direction);
  if (state.maxHops !== undefined) params.set("hops", String(state.maxHops));
  return `#${params.toString()}`;
}

export function decodeState(hash: string): ViewState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const tabRaw = params.get("tab") ?? "queue";
  const state: ViewState = {
    tab: (TABS.has(tabRaw) ? tabRaw : "queue") as ViewState["tab"],
  };
  const filter = params.get("filter");
  if (filter) state.queueFilter = filter;
  const qpage = params.get("qpage");
  if (qpage && !Number.isNaN(Number(qpage))) state.queuePage = Number(qpage);
  const source = params.get("source");
  if (source) state.source = source;
  const target = params.get("target");
  if (target) state.target = target;
  const k = params.get("k");
  if (k && !Number.isNaN(Number(k))) state.k = Number(k);
  const direction = params.get("direction");
  if (direction) state.direction = direction;
  const hops = params.get("hops");
  if (hops && !Number.isNaN(Number(hops))) state.maxHops = Number(hops);
  return state;
}
