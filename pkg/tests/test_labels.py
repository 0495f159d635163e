import urllib.parse

import pytest

from factgraph.errors import EmptyLabel, MalformedIri
from factgraph.labels import mint_iri, normalize_label, parse_iri


def test_normalize_collapses_whitespace_and_case():
    label = normalize_label("  Mercury   Contamination ")
    assert label.text == "mercury contamination"
    assert label.word_count == 2


def test_normalize_identity_case():
    assert normalize_label("rivers") == normalize_label("rivers")
    assert normalize_label("rivers").word_count == 1


def test_hyphenated_token_counts_as_one_word():
    label = normalize_label("Artisanal and Small-Scale Gold Mining")
    assert label.text == "artisanal and small-scale gold mining"
    assert label.word_count == 5


def test_unicode_whitespace_collapsed():
    label = normalize_label("a  b\tc\n")
    assert label.text == "a b c"
    assert label.word_count == 3


def test_empty_label_raises():
    with pytest.raises(EmptyLabel):
        normalize_label("   \t ")


def test_normalize_idempotent():
    for raw in ("A  B", "x", " MERCURY cóntamination "):
        once = normalize_label(raw)
        assert normalize_label(once.text) == once


def test_mint_iri_entity():
    assert (
        mint_iri(normalize_label("mercury contamination"), "entity")
        == "urn:asgmkg:entity:mercury_contamination"
    )


def test_mint_iri_relation():
    assert mint_iri(normalize_label("not restore"), "relation") == "urn:asgmkg:relation:not_restore"


def test_mint_iri_percent_encodes_utf8():
    # expected form computed with the stdlib encoder, independent of ours
    expected = "per" + urllib.parse.quote("ú", safe="")
    assert mint_iri(normalize_label("perú"), "entity") == f"urn:asgmkg:entity:{expected}"


def test_mint_iri_rejects_unknown_kind():
    with pytest.raises(ValueError):
        mint_iri(normalize_label("x"), "class")


def test_literal_underscore_round_trips():
    label = normalize_label("bio_diversity index")
    iri = mint_iri(label, "entity")
    assert parse_iri(iri, "entity") == label


def test_parse_iri_round_trips_assorted_labels():
    for raw in ("mercury", "gold mining", "perú", "a-b c", "k'iche", "x_9"):
        label = normalize_label(raw)
        for kind in ("entity", "relation"):
            assert parse_iri(mint_iri(label, kind), kind) == label


def test_parse_iri_rejects_foreign_scheme():
    with pytest.raises(MalformedIri):
        parse_iri("http://example.org/mercury", "entity")


def test_parse_iri_rejects_wrong_kind():
    with pytest.raises(MalformedIri):
        parse_iri("urn:asgmkg:relation:contaminates", "entity")


def test_parse_iri_rejects_bad_escape():
    with pytest.raises(MalformedIri):
        parse_iri("urn:asgmkg:entity:bad%zz", "entity")
