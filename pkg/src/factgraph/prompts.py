"""Prompt templates shared by the pipeline and the fixture LLM.

Each template opens with a fixed header line; the fixture LLM dispatches on
those headers, so they are part of the offline-testing contract.
"""

from __future__ import annotations

EXTRACTION_PROMPT_HEADER = "You extract subject-predicate-object statements from text."
JUDGE_PROMPT_HEADER = "You check whether a statement is supported by a reference text."
CHAT_PROMPT_HEADER = "You answer questions using only the provided statements."
SUMMARIZE_PROMPT_HEADER = "Summarize the following content, keeping every stated fact."

_EXTRACTION_RULES = """\
Work sentence by sentence and apply these rules:
- Identify nouns and treat them as entities.
- Replace pronouns with the nouns they refer to, using the surrounding context.
- Limit entities to a maximum of two words.
- Identify verbs and treat them as relations; a verb may carry an attached preposition.
- Limit relations to a maximum of two words.
- A relation may carry negation: write it with a leading "not" (for example "not restore").
- Preserve the order in which entities and relations appear in the text.
- Construct one [Subject, Predicate, Object] row per statement and discard rows that break these rules.

Reply with a pipe-delimited table, one row per statement, in this exact shape:
Subject | Predicate | Object
"""


def build_extraction_prompt(chunk_text: str) -> str:
    return f"{EXTRACTION_PROMPT_HEADER}\n{_EXTRACTION_RULES}\nTEXT:\n{chunk_text}\n"


def build_judge_prompt(statement: str, reference: str) -> str:
    return (
        f"{JUDGE_PROMPT_HEADER}\n"
        "Decide whether the statement is logically coherent in the context of the reference text.\n"
        "Reply with exactly one line: Yes | <detailed reason>  or  No | <detailed reason>.\n"
        f"STATEMENT: {statement}\n"
        "REFERENCE TEXT:\n"
        f"{reference}\n"
    )


def build_chat_prompt(statements: list[str], question: str) -> str:
    lines = "\n".join(statements)
    return (
        f"{CHAT_PROMPT_HEADER}\n"
        "If the statements do not cover the question, say so plainly.\n"
        "KNOWN STATEMENTS:\n"
        f"{lines}\n"
        f"QUESTION: {question}\n"
    )


def build_summarize_prompt(content: str) -> str:
    return f"{SUMMARIZE_PROMPT_HEADER}\n{content}\n"
