import json

import pytest
from fastapi.testclient import TestClient

from factbench import Triple, parse_gold, expand_corpus
from factbench.service import create_app

MITCHELL_TAGGED = """\
# sent_id = S1
Sen.\tPROPN
Mitchell\tPROPN
is\tAUX
confident\tADJ
he\tPRON
has\tVERB
sufficient\tADJ
votes\tNOUN
to\tPART
block\tVERB
such\tDET
a\tDET
measure\tNOUN
with\tADP
procedural\tADJ
actions\tNOUN
.\tPUNCT
"""

SMALL_TAGGED = """\
# sent_id = T1
The\tDET
cat\tNOUN
sat\tVERB
quickly\tADV
.\tPUNCT
"""


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "data")
    return TestClient(app)


def make_session(client, session_id="demo", tagged=SMALL_TAGGED):
    r = client.post("/sessions", json={"id": session_id, "tagged": tagged})
    assert r.status_code == 201, r.text
    return r.json()


# ---------------------------------------------------------------------------
# session lifecycle


def test_create_and_list_sessions(client):
    assert client.get("/sessions").json() == []
    summary = make_session(client)
    assert summary == {"id": "demo", "name": "demo", "sentences": 1, "annotated": 0}
    listed = client.get("/sessions").json()
    assert listed == [summary]


def test_create_rejects_duplicates_and_bad_input(client):
    make_session(client)
    assert client.post(
        "/sessions", json={"id": "demo", "tagged": SMALL_TAGGED}
    ).status_code == 409
    assert client.post(
        "/sessions", json={"id": "bad id!", "tagged": SMALL_TAGGED}
    ).status_code == 400
    assert client.post("/sessions", json={"id": "x"}).status_code == 400
    r = client.post("/sessions", json={"id": "x", "tagged": "The\tDET\n"})
    assert r.status_code == 400
    assert "sent_id" in r.json()["detail"]
    assert client.post(
        "/sessions", json={"id": "x", "tagged": ""}
    ).status_code == 400


def test_sentence_listing_and_detail(client):
    make_session(client)
    sentences = client.get("/sessions/demo/sentences").json()
    assert sentences == [
        {"id": "T1", "text": "The cat sat quickly .", "revision": 0, "clusters": 0}
    ]
    detail = client.get("/sessions/demo/sentences/T1").json()
    assert detail["revision"] == 0
    assert detail["clusters"] == []
    assert [t["surface"] for t in detail["tokens"]] == [
        "The", "cat", "sat", "quickly", ".",
    ]
    assert [t["highlight"] for t in detail["tokens"]] == [
        "none", "noun", "verb", "none", "none",
    ]
    assert detail["tokens"][0]["i"] == 0


def test_missing_resources_404(client):
    assert client.get("/sessions/nope/sentences").status_code == 404
    make_session(client)
    assert client.get("/sessions/demo/sentences/T9").status_code == 404
    assert client.get("/sessions/nope/export").status_code == 404


# ---------------------------------------------------------------------------
# annotation writes


def put(client, clusters, revision=0, sentence="T1", session="demo"):
    return client.put(
        f"/sessions/{session}/sentences/{sentence}/annotation",
        json={"expected_revision": revision, "clusters": clusters},
    )


def simple_cluster(cid="c1", optional=None, entity_clean=True):
    return {
        "id": cid,
        "patterns": [
            {
                "subject": [0, 1],
                "predicate": [2],
                "object": [3],
                "optional": optional or [],
                "entity_clean": entity_clean,
            }
        ],
    }


def test_put_annotation_bumps_revision(client):
    make_session(client)
    r = put(client, [simple_cluster()])
    assert r.status_code == 200, r.text
    body = r.json()
    assert body["revision"] == 1
    assert body["clusters"][0]["variants"] == 1
    # second write must present the new revision
    r = put(client, [simple_cluster()], revision=1)
    assert r.status_code == 200
    assert r.json()["revision"] == 2


def test_put_annotation_conflict_on_stale_revision(client):
    make_session(client)
    assert put(client, [simple_cluster()]).status_code == 200
    r = put(client, [simple_cluster("c2")], revision=0)
    assert r.status_code == 409
    assert "revision" in r.json()["detail"]
    # the stored annotation is untouched
    detail = client.get("/sessions/demo/sentences/T1").json()
    assert [c["id"] for c in detail["clusters"]] == ["c1"]


@pytest.mark.parametrize(
    "pattern, fragment",
    [
        ({"subject": [], "predicate": [2], "object": [3]}, "subject slot is empty"),
        ({"subject": [0], "predicate": [2], "object": [99]}, "out of range"),
        ({"subject": [0, 0], "predicate": [2], "object": [3]}, "repeats"),
        (
            {"subject": [0], "predicate": [2], "object": [3], "optional": [3]},
            "no mandatory token",
        ),
        (
            {"subject": [0], "predicate": [2], "object": [3], "optional": [4]},
            "not selected",
        ),
        ({"subject": [0], "predicate": [2]}, "missing field"),
    ],
)
def test_put_annotation_rejects_bad_patterns(client, pattern, fragment):
    make_session(client)
    r = put(client, [{"id": "c1", "patterns": [pattern]}])
    assert r.status_code == 400
    assert fragment in r.json()["detail"]


def test_put_annotation_rejects_duplicate_cluster_ids(client):
    make_session(client)
    r = put(client, [simple_cluster("c1"), simple_cluster("c1")])
    assert r.status_code == 400
    assert "duplicate cluster id" in r.json()["detail"]


def test_put_annotation_empty_cluster_list_clears(client):
    make_session(client)
    assert put(client, [simple_cluster()]).status_code == 200
    r = put(client, [], revision=1)
    assert r.status_code == 200
    assert r.json()["clusters"] == []


def test_same_token_may_appear_in_two_slots(client):
    make_session(client, "m", MITCHELL_TAGGED)
    cluster = {
        "id": "f2",
        "patterns": [
            {"subject": [0, 1], "predicate": [2, 3, 4, 5], "object": [6, 7]},
            # coreferent subject reuses index 4 inside the predicate
            {"subject": [4], "predicate": [2, 3, 4, 5], "object": [6, 7]},
        ],
    }
    r = put(client, [cluster], sentence="S1", session="m")
    assert r.status_code == 200, r.text
    assert r.json()["clusters"][0]["variants"] == 2


def test_annotated_count_in_session_list(client):
    make_session(client)
    put(client, [simple_cluster()])
    assert client.get("/sessions").json()[0]["annotated"] == 1


# ---------------------------------------------------------------------------
# persistence


def test_sessions_survive_reload(client, tmp_path):
    make_session(client)
    put(client, [simple_cluster()])
    files = list((tmp_path / "data").glob("*.json"))
    assert [f.name for f in files] == ["demo.json"]
    assert not list((tmp_path / "data").glob("*.tmp"))
    # a fresh app over the same directory sees the same state
    client2 = TestClient(create_app(tmp_path / "data"))
    detail = client2.get("/sessions/demo/sentences/T1").json()
    assert detail["revision"] == 1
    assert detail["clusters"][0]["id"] == "c1"


def test_session_file_is_valid_json(client, tmp_path):
    make_session(client)
    put(client, [simple_cluster()])
    payload = json.loads((tmp_path / "data" / "demo.json").read_text())
    assert payload["sentences"][0]["revision"] == 1


# ---------------------------------------------------------------------------
# export


def export_text(client, session="demo"):
    r = client.get(f"/sessions/{session}/export")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/plain")
    return r.text


def test_export_round_trips_through_parser(client):
    make_session(client)
    put(client, [simple_cluster()])
    corpus = parse_gold(export_text(client))
    assert list(corpus.sentences) == ["T1"]
    assert [s.id for s in corpus.synsets] == ["T1.c1"]
    triples = expand_corpus(corpus)["T1.c1"]
    assert triples == {Triple.from_surfaces(["The", "cat"], ["sat"], ["quickly"])}


def test_export_merges_adjacent_optionals(client):
    make_session(client)
    clusters = [
        {
            "id": "c1",
            "patterns": [
                {
                    "subject": [0, 1],
                    "predicate": [2],
                    "object": [3, 4],
                    "optional": [3, 4],
                }
            ],
        }
    ]
    r = put(client, clusters)
    assert r.status_code == 400  # all-optional object has no mandatory token
    clusters[0]["patterns"][0]["object"] = [3, 4]
    clusters[0]["patterns"][0]["optional"] = [4]
    assert put(client, clusters).status_code == 200
    text = export_text(client)
    assert "quickly [ . ]" in text
    corpus = parse_gold(text)
    assert len(expand_corpus(corpus)["T1.c1"]) == 2


def test_export_optional_run_toggles_as_unit(client):
    make_session(client, "m", MITCHELL_TAGGED)
    cluster = {
        "id": "c1",
        "patterns": [
            {
                "subject": [0, 1],
                "predicate": [2, 3, 4, 5],
                "object": [6, 7, 10, 11, 12],
                "optional": [10, 11],
            }
        ],
    }
    assert put(client, [cluster], sentence="S1", session="m").status_code == 200
    text = export_text(client, "m")
    assert "sufficient votes [ such a ] measure" in text
    detail = client.get("/sessions/m/sentences/S1").json()
    assert detail["clusters"][0]["variants"] == 2


def test_export_carries_entity_flag(client):
    make_session(client)
    assert put(client, [simple_cluster(entity_clean=False)]).status_code == 200
    text = export_text(client)
    fact_lines = [l for l in text.splitlines() if l.startswith("fact\t")]
    assert fact_lines[0].endswith("\tno-entity")


def test_export_without_annotation_is_sentences_only(client):
    make_session(client)
    text = export_text(client)
    assert text == "sent\tT1\tThe cat sat quickly .\n"
