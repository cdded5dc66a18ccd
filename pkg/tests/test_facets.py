import itertools

import pytest

from factbench import (
    Extraction,
    Triple,
    TokenSeq,
    derive,
    derive_C,
    derive_E,
    derive_M,
    expand_corpus,
    parse_gold,
    score_facet,
)


def triple(s, p, o):
    return Triple.from_surfaces(s.split(), p.split(), o.split())


def test_default_facet_equals_full_expansion(mitchell_corpus):
    fg = derive(mitchell_corpus, "default")
    expanded = expand_corpus(mitchell_corpus)
    assert {k: set(v) for k, v in fg.by_synset.items()} == expanded


def test_unknown_facet_rejected(mitchell_corpus):
    with pytest.raises(ValueError):
        derive(mitchell_corpus, "X")


def test_derive_E_drops_flagged_patterns(mitchell_corpus):
    fg = derive_E(mitchell_corpus)
    # f4's second slot boundary leaves a preposition in the object and is
    # flagged; only the clean boundary's 8 triples survive
    assert len(fg.by_synset["f4"]) == 8
    assert all(
        t.object.text().casefold() == "procedural actions"
        for t in fg.by_synset["f4"]
    )
    # unflagged synsets keep their full expansion
    assert len(fg.by_synset["f2"]) == 10


def test_all_flagged_synset_stays_in_denominator():
    corpus = parse_gold(
        "sent\tS1\ta b c .\n"
        "fact\tS1\tf1\ta\tb\tc\tno-entity\n"
    )
    es = [Extraction("S1", triple("a", "b", "c"))]
    default = score_facet(es, corpus, "default")
    assert (default.tp, default.fp, default.fn) == (1, 0, 0)
    e = score_facet(es, corpus, "E")
    # still one synset to find, no way to match it, extraction unmatched
    assert (e.tp, e.fp, e.fn) == (0, 1, 1)


def test_derive_M_exact_forms(mitchell_corpus):
    fg = derive_M(mitchell_corpus)
    subjects = (["Sen.", "Mitchell"], ["he"])
    want = set()
    for subj in subjects:
        want.add(
            Triple.from_surfaces(
                subj,
                "is confident he has sufficient votes to block measure with".split(),
                ["procedural", "actions"],
            )
        )
        want.add(
            Triple.from_surfaces(
                subj,
                "is confident he has sufficient votes to block measure".split(),
                ["with", "procedural", "actions"],
            )
        )
    assert fg.by_synset["f4"] == frozenset(want)


def test_derive_M_subset_of_default(mitchell_corpus):
    full = expand_corpus(mitchell_corpus)
    fg = derive_M(mitchell_corpus)
    for syn_id, forms in fg.by_synset.items():
        assert forms <= frozenset(full[syn_id])


def test_derive_C_exact_family(mitchell_corpus):
    fg = derive_C(mitchell_corpus)
    prefix = "is confident he has sufficient votes to block"
    want = set()
    for subj, such, a in itertools.product(
        ("Sen. Mitchell", "he"), ("such", ""), ("a", "")
    ):
        text = " ".join(
            x
            for x in (subj, prefix, such, a, "measure with procedural actions")
            if x
        )
        want.add(TokenSeq.from_surfaces(text.split()))
    assert fg.by_synset["f4"] == frozenset(want)
    assert len(fg.by_synset["f4"]) == 8


def test_C_collapses_slot_boundaries(mitchell_corpus):
    # tokens in the right order but split at a boundary no gold pattern
    # uses (the copula ends up in the subject)
    e = [
        Extraction(
            "S1",
            triple(
                "Sen. Mitchell is",
                "confident he has sufficient votes to block",
                "such a measure",
            ),
        )
    ]
    default = score_facet(e, mitchell_corpus, "default")
    c = score_facet(e, mitchell_corpus, "C")
    assert default.tp == 0
    # the flattened utterance is shared by two synsets that differ only
    # in slot boundaries, so both count as covered
    assert c.tp == 2
    assert c.multi_cover_extractions == 1
    assert c.facet == "C"


def test_facet_scores_on_mitchell(mitchell_corpus, mitchell_extractions):
    # the one exact hit survives every facet that keeps f2 reachable
    for facet, want_tp in (("default", 1), ("E", 1), ("C", 1), ("M", 1)):
        report = score_facet(mitchell_extractions, mitchell_corpus, facet)
        assert report.tp == want_tp, facet
        assert report.facet == facet


def test_facet_monotonicity_on_mitchell(mitchell_corpus, mitchell_extractions):
    reports = {
        facet: score_facet(mitchell_extractions, mitchell_corpus, facet)
        for facet in ("default", "E", "C", "M")
    }
    for metric in ("precision", "recall", "f1"):
        d = getattr(reports["default"], metric)
        assert getattr(reports["C"], metric) >= d
        assert getattr(reports["E"], metric) <= d
        assert getattr(reports["M"], metric) <= d
