// Review queue state machine.
//
// Decisions apply optimistically so keystrokes never wait on the network;
// a failed POST either rolls the card back (client errors) or parks the
// decision in a retry queue behind a visible banner (server/network
// failures). A decision is never silently dropped.

import { ApiClient, ApiError } from "./api";
import type { ExpertLabel, TripleDetail, TriplePayload } from "./types";

export interface PendingDecision {
  tripleId: string;
  label: ExpertLabel;
  note: string;
}

export interface QueueSnapshot {
  items: TriplePayload[];
  currentIndex: number;
  total: number;
  reviewedTotal: number;
  banner: string | null;
  pendingCount: number;
}

export class ReviewQueue {
  items: TriplePayload[] = [];
  currentIndex = 0;
  total = 0;
  reviewedTotal = 0;
  filter: string | undefined;
  banner: string | null = null;
  reviewer = "expert";
  private pending: PendingDecision[] = [];
  private details = new Map<string, TripleDetail>();
  private listeners: (() => void)[] = [];

  constructor(private api: ApiClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  snapshot(): QueueSnapshot {
    return {
      items: this.items,
      currentIndex: this.currentIndex,
      total: this.total,
      reviewedTotal: this.reviewedTotal,
      banner: this.banner,
      pendingCount: this.pending.length,
    };
  }

  get current(): TriplePayload | undefined {
    return this.items[this.currentIndex];
  }

  get pendingDecisions(): readonly PendingDecision[] {
    return this.pending;
  }

  async load(filter?: string, page = 1, pageSize = 50): Promise<void> {
    this.filter = filter;
    const listing = await this.api.triples({ status: filter, page, pageSize });
    this.items = listing.items;
    this.total = listing.total;
    this.currentIndex = 0;
    await this.refreshProgress();
    this.notify();
  }

  async refreshProgress(): Promise<void> {
    const stats = await this.api.stats();
    this.reviewedTotal = stats.review_count;
  }

  async currentDetail(): Promise<TripleDetail | null> {
    const card = this.current;
    if (!card) return null;
    const cached = this.details.get(card.id);
    if (cached) return cached;
    const detail = await this.api.tripleDetail(card.id);
    this.details.set(card.id, detail);
    return detail;
  }

  next(): void {
    if (this.currentIndex < this.items.length - 1) this.currentIndex += 1;
    this.notify();
  }

  previous(): void {
    if (this.currentIndex > 0) this.currentIndex -= 1;
    this.notify();
  }

  async handleKey(key: string): Promise<void> {
    switch (key) {
      case "f":
        await this.decide("expert-factual");
        break;
      case "n":
        await this.decide("expert-non-factual");
        break;
      case "ArrowRight":
      case "ArrowDown":
        this.next();
        break;
      case "ArrowLeft":
      case "ArrowUp":
        this.previous();
        break;
      default:
        break;
    }
  }

  async decide(label: ExpertLabel, note = ""): Promise<void> {
    const card = this.current;
    if (!card) return;
    const previousStatus = card.status;

    // optimistic: apply locally and move on before the POST settles
    card.status = label;
    if (this.filter && this.filter !== label) {
      this.items = this.items.filter((item) => item.id !== card.id);
      this.total -= 1;
      if (this.currentIndex >= this.items.length && this.currentIndex > 0) {
        this.currentIndex = this.items.length - 1;
      }
    } else {
      this.next();
    }
    this.notify();

    try {
      await this.api.review(card.id, label, this.reviewer, note);
      this.reviewedTotal += 1;
      this.details.delete(card.id);
      this.banner = this.pending.length ? this.banner : null;
    } catch (error) {
      if (error instanceof ApiError && error.status > 0 && error.status < 500) {
        // client error: the decision is invalid, roll the card back
        card.status = previousStatus;
        if (this.filter && !this.items.some((item) => item.id === card.id)) {
          this.items = [card, ...this.items];
          this.total += 1;
        }
        this.banner = `review rejected (${error.status}): ${error.message}`;
      } else {
        // server/network failure: park the decision and keep the optimism
        this.pending.push({ tripleId: card.id, label, note });
        this.banner = `server unavailable; ${this.pending.length} decision(s) queued for retry`;
      }
    }
    this.notify();
  }

  async retryPending(): Promise<void> {
    const queued = this.pending;
    this.pending = [];
    for (const decision of queued) {
      try {
        await this.api.review(decision.tripleId, decision.label, this.reviewer, decision.note);
        this.reviewedTotal += 1;
      } catch {
        this.pending.push(decision);
      }
    }
    this.banner = this.pending.length
      ? `server unavailable; ${this.pending.length} decision(s) queued for retry`
      : null;
    this.notify();
  }
}
