// Dashboard loader: each panel fetches independently so one failing
// endpoint degrades to a per-panel error instead of a blank page. All
// numbers come straight off the API payloads.

import { ApiClient } from "./api";
import type { AgreementPayload, StatsPayload } from "./types";

export interface Panel<T> {
  data: T | null;
  error: string | null;
}

export class Dashboard {
  stats: Panel<StatsPayload> = { data: null, error: null };
  agreement: Panel<AgreementPayload> = { data: null, error: null };

  constructor(private api: ApiClient) {}

  async load(): Promise<void> {
    await Promise.all([this.loadStats(), this.loadAgreement()]);
  }

  async loadStats(): Promise<void> {
    try {
      this.stats = { data: await this.api.stats(), error: null };
    } catch (error) {
      this.stats = { data: null, error: String(error instanceof Error ? error.message : error) };
    }
  }

  async loadAgreement(): Promise<void> {
    try {
      this.agreement = { data: await this.api.agreement(), error: null };
    } catch (error) {
      this.agreement = {
        data: null,
        error: String(error instanceof Error ? error.message : error),
      };
    }
  }

  agreementText(): string {
    if (this.agreement.error) return `error: ${this.agreement.error}`;
    const data = this.agreement.data;
    if (!data || data.agreement === null) return "no reviews yet";
    return `${(data.agreement * 100).toFixed(2)}% (${data.matches}/${data.compared} compared, ${data.excluded} excluded)`;
  }
}
