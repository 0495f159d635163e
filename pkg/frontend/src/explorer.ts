// Explorer state: a merged view of k-hop answers that can be expanded in
// place, plus source/target path traversal. Every node and edge on screen
// corresponds to a triple id returned by the API.

import { ApiClient, ApiError } from "./api";
import type { KhopPayload, PathsPayload, TriplePayload } from "./types";

export const NODE_CAP = 300;

export interface ExplorerNode {
  label: string;
  distance: number | null;
}

export class ExplorerState {
  nodes = new Map<string, ExplorerNode>();
  edges = new Map<string, TriplePayload>();
  breadcrumbs: string[] = [];
  lastKhop: KhopPayload | null = null;
  lastPaths: PathsPayload | null = null;
  selection: string[] = [];
  message: string | null = null;
  overCap = false;
  k = 1;
  direction = "both";

  constructor(private api: ApiClient) {}

  nodeCount(): number {
    return this.nodes.size;
  }

  edgeCount(): number {
    return this.edges.size;
  }

  clear(): void {
    this.nodes.clear();
    this.edges.clear();
    this.breadcrumbs = [];
    this.lastKhop = null;
    this.lastPaths = null;
    this.selection = [];
    this.message = null;
    this.overCap = false;
  }

  private applyPayload(payload: KhopPayload, merge: boolean): void {
    if (!merge) {
      this.nodes.clear();
      this.edges.clear();
    }
    const incomingNodes = new Set(Object.keys(payload.distances));
    for (const triple of payload.triples) {
      incomingNodes.add(triple.subject);
      incomingNodes.add(triple.object);
    }
    const union = new Set([...this.nodes.keys(), ...incomingNodes]);
    if (union.size > NODE_CAP) {
      this.overCap = true;
      this.message = "subgraph too large, raise filters";
      return;
    }
    this.overCap = false;
    for (const [label, distance] of Object.entries(payload.distances)) {
      if (!this.nodes.has(label) || !merge) {
        this.nodes.set(label, { label, distance });
      }
    }
    for (const triple of payload.triples) {
      this.edges.set(triple.id, triple);
      for (const label of [triple.subject, triple.object]) {
        if (!this.nodes.has(label)) this.nodes.set(label, { label, distance: null });
      }
    }
  }

  async explore(source: string, k = this.k, direction = this.direction): Promise<KhopPayload | null> {
    this.message = null;
    this.k = k;
    this.direction = direction;
    try {
      const payload = await this.api.khop(source, k, direction);
      this.lastKhop = payload;
      this.lastPaths = null;
      this.applyPayload(payload, false);
      this.breadcrumbs = [source];
      return payload;
    } catch (error) {
      this.message = error instanceof ApiError && error.status === 404
        ? `unknown entity: ${source}`
        : String(error instanceof Error ? error.message : error);
      return null;
    }
  }

  async expand(label: string, k = 1): Promise<KhopPayload | null> {
    try {
      const payload = await this.api.khop(label, k, this.direction);
      this.applyPayload(payload, true);
      this.breadcrumbs.push(label);
      return payload;
    } catch (error) {
      this.message = error instanceof ApiError && error.status === 404
        ? `unknown entity: ${label}`
        : String(error instanceof Error ? error.message : error);
      return null;
    }
  }

  select(label: string): void {
    if (this.selection.includes(label)) return;
    this.selection.push(label);
    if (this.selection.length > 2) this.selection = this.selection.slice(-2);
  }

  async requestPaths(maxHops = 4): Promise<PathsPayload | null> {
    if (this.selection.length !== 2) {
      this.message = "select a source and a target entity first";
      return null;
    }
    const [source, target] = this.selection;
    try {
      const payload = await this.api.paths(source, target, maxHops, this.direction);
      this.lastPaths = payload;
      this.message = payload.truncated ? "path list truncated at the result cap" : null;
      return payload;
    } catch (error) {
      this.message = error instanceof ApiError && error.status === 404
        ? "unknown source or target entity"
        : String(error instanceof Error ? error.message : error);
      return null;
    }
  }

  // N-Triples text for the currently displayed subgraph, matching the
  // server's serialization: sorted lines, one triple per line.
  exportNt(): string {
    const slug = (text: string, kind: string) => {
      let out = "";
      for (const ch of text) {
        if (ch === " ") out += "_";
        else if (/[a-z0-9-]/.test(ch)) out += ch;
        else {
          const bytes = new TextEncoder().encode(ch);
          out += Array.from(bytes, (b) => `%${b.toString(16).toUpperCase().padStart(2, "0")}`).join("");
        }
      }
      return `urn:asgmkg:${kind}:${out}`;
    };
    const lines = Array.from(this.edges.values(), (t) => {
      const predicate = t.negated ? `not ${t.predicate}` : t.predicate;
      return `<${slug(t.subject, "entity")}> <${slug(predicate, "relation")}> <${slug(t.object, "entity")}> .`;
    });
    lines.sort();
    return lines.map((line) => line + "\n").join("");
  }
}
