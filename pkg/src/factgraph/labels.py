"""Label normalization and IRI minting.

Every surface form entering the graph goes through :func:`normalize_label`,
so equality, indexing, and novelty comparisons are all exact-text operations
on one canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyLabel, MalformedIri

IRI_PREFIX = "urn:asgmkg"

# Characters kept verbatim in slugs. Literal "_" is excluded: "_" encodes a
# space, so a literal underscore must round-trip as %5F.
_SLUG_SAFE = frozenset("abcdefghijklmnopqrstuvwxyz0123456789-")


@dataclass(frozen=True)
class Label:
    """A normalized surface form: lowercase, single-spaced, trimmed."""

    text: str
    word_count: int

    def __str__(self) -> str:
        return self.text


def normalize_label(raw: str) -> Label:
    """Collapse whitespace, lowercase, and trim ``raw`` into a Label.

    Raises EmptyLabel if nothing remains.
    """
    text = " ".join(raw.split()).lower()
    if not text:
        raise EmptyLabel(f"label is empty after normalization: {raw!r}")
    return Label(text=text, word_count=len(text.split(" ")))


def mint_iri(label: Label, kind: str) -> str:
    """Deterministic IRI for a label: ``urn:asgmkg:<kind>:<slug>``.

    ``kind`` is ``entity`` or ``relation``. Spaces become ``_``; everything
    outside the slug-safe set is percent-encoded as UTF-8 bytes.
    """
    if kind not in ("entity", "relation"):
        raise ValueError(f"kind must be 'entity' or 'relation', got {kind!r}")
    parts: list[str] = []
    for ch in label.text:
        if ch == " ":
            parts.append("_")
        elif ch in _SLUG_SAFE:
            parts.append(ch)
        else:
            parts.append("".join(f"%{b:02X}" for b in ch.encode("utf-8")))
    return f"{IRI_PREFIX}:{kind}:{''.join(parts)}"


def parse_iri(iri: str, expected_kind: str, line: int | None = None) -> Label:
    """Invert :func:`mint_iri`, checking scheme and kind."""
    prefix = f"{IRI_PREFIX}:{expected_kind}:"
    if not iri.startswith(f"{IRI_PREFIX}:"):
        raise MalformedIri(f"IRI outside the {IRI_PREFIX}: scheme: {iri}", line)
    if not iri.startswith(prefix):
        raise MalformedIri(f"expected a {expected_kind} IRI: {iri}", line)
    slug = iri[len(prefix):]
    text = _decode_slug(slug, line)
    try:
        return normalize_label(text)
    except EmptyLabel:
        raise MalformedIri(f"IRI decodes to an empty label: {iri}", line) from None


def _decode_slug(slug: str, line: int | None) -> str:
    # "_" -> space first; literal underscores were encoded as %5F.
    text = slug.replace("_", " ")
    out = bytearray()
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "%":
            if i + 2 >= len(text) + 1 or len(text) < i + 3:
                raise MalformedIri(f"truncated percent escape in slug: {slug}", line)
            try:
                out.append(int(text[i + 1 : i + 3], 16))
            except ValueError:
                raise MalformedIri(f"bad percent escape in slug: {slug}", line) from None
            i += 3
        else:
            out.extend(ch.encode("utf-8"))
            i += 1
    try:
        return out.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedIri(f"slug is not valid UTF-8: {slug}", line) from None
