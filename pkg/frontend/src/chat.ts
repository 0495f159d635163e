// Chat tab state: question/answer turns with the triple ids each answer cites.

import { ApiClient } from "./api";

export interface ChatTurn {
  question: string;
  answer: string;
  citedTripleIds: string[];
  error: string | null;
}

export class ChatState {
  turns: ChatTurn[] = [];

  constructor(private api: ApiClient) {}

  async ask(question: string): Promise<ChatTurn> {
    let turn: ChatTurn;
    try {
      const payload = await this.api.chat(question);
      turn = {
        question,
        answer: payload.answer,
        citedTripleIds: payload.cited_triple_ids,
        error: null,
      };
    } catch (error) {
      turn = {
        question,
        answer: "",
        citedTripleIds: [],
        error: String(error instanceof Error ? error.message : error),
      };
    }
    this.turns.push(turn);
    return turn;
  }
}
