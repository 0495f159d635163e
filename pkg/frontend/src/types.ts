// Payload shapes mirrored from the HTTP API. The UI never computes these
// numbers itself; every figure on screen traces back to one of these.

export interface TriplePayload {
  id: string;
  subject: string;
  predicate: string;
  object: string;
  negated: boolean;
  status: string;
  provenance: { document_id: string; page: number; chunk_index: number }[];
  machine_outcome: string | null;
}

export interface TriplesPage {
  items: TriplePayload[];
  total: number;
  page: number;
  page_size: number;
}

export interface EvidencePagePayload {
  url: string;
  relevance_score: number;
  verdict: string | null;
  reason: string;
}

export interface ValidationPayload {
  triple_id: string;
  query: string;
  hits: { url: string; title: string; snippet: string }[];
  judged_pages: EvidencePagePayload[];
  yes_count: number;
  no_count: number;
  outcome: string;
  notes: string[];
}

export interface ReviewPayload {
  triple_id: string;
  expert_label: string;
  reviewer: string;
  note: string;
  timestamp: string;
}

export interface TripleDetail {
  triple: TriplePayload;
  validation: ValidationPayload | null;
  review: ReviewPayload | null;
}

export interface StatsPayload {
  triple_count: number;
  unique_entity_count: number;
  unique_relation_count: number;
  status_histogram: Record<string, number>;
  candidate_count: number;
  rejected_count: number;
  review_count: number;
}

export interface KhopPayload {
  source: string;
  k: number;
  direction: string;
  triples: TriplePayload[];
  distances: Record<string, number>;
  summary: string;
}

export interface PathPayload {
  triples: TriplePayload[];
  entities: string[];
}

export interface PathsPayload {
  source: string;
  target: string;
  max_hops: number;
  direction: string;
  paths: PathPayload[];
  truncated: boolean;
  summary: string;
}

export interface AgreementPayload {
  agreement: number | null;
  compared: number;
  matches: number;
  excluded: number;
}

export interface ChatPayload {
  answer: string;
  cited_triple_ids: string[];
}

export type ExpertLabel = "expert-factual" | "expert-non-factual";
