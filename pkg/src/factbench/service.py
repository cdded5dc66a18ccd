"""HTTP service backing the annotation UI.

Sessions are created from a tagged-sentence file and persisted as one
JSON file each under the data directory (written atomically). Annotators
build, per sentence, *clusters* of draft patterns; a draft selects token
indices for each slot, in order, and can mark selected tokens optional.
Alternative phrasings are separate drafts in the same cluster. Export
renders the session as a gold corpus file: each draft becomes one fact
line, adjacent optional selections collapse into one optional group, and
the synset id is "<sentence id>.<cluster id>".

Concurrency is optimistic: every sentence carries a revision counter that
increases on each successful write, and writers must present the revision
they based their edit on; a stale revision is rejected with 409.
"""

from __future__ import annotations

import json
import os
import re
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from . import gold, ingest
from .model import Sentence, Token

SESSION_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

HIGHLIGHTS = {
    "VERB": "verb",
    "AUX": "verb",
    "NOUN": "noun",
    "PROPN": "noun",
}


def _bad_request(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


def _not_found(message: str) -> HTTPException:
    return HTTPException(status_code=404, detail=message)


def _require(data: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise _bad_request(f"{where}: missing field {key!r}")
    value = data[key]
    if kind is int and isinstance(value, bool):
        raise _bad_request(f"{where}: field {key!r} must be an integer")
    if not isinstance(value, kind):
        raise _bad_request(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def _index_list(data: dict, key: str, n_tokens: int, where: str) -> list[int]:
    raw = _require(data, key, list, where)
    out: list[int] = []
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, int):
            raise _bad_request(f"{where}: {key} indices must be integers")
        if not 0 <= v < n_tokens:
            raise _bad_request(
                f"{where}: {key} index {v} out of range (sentence has "
                f"{n_tokens} tokens)"
            )
        out.append(v)
    if len(set(out)) != len(out):
        raise _bad_request(f"{where}: {key} repeats a token index")
    return out


def _parse_pattern(data: Any, n_tokens: int, where: str) -> dict:
    subject = _index_list(data, "subject", n_tokens, where)
    predicate = _index_list(data, "predicate", n_tokens, where)
    obj = _index_list(data, "object", n_tokens, where)
    optional_raw = data.get("optional", [])
    if not isinstance(optional_raw, list):
        raise _bad_request(f"{where}: field 'optional' must be list")
    optional = _index_list({"optional": optional_raw}, "optional", n_tokens, where)
    entity_clean = data.get("entity_clean", True)
    if not isinstance(entity_clean, bool):
        raise _bad_request(f"{where}: field 'entity_clean' must be boolean")
    selected = set(subject) | set(predicate) | set(obj)
    stray = set(optional) - selected
    if stray:
        raise _bad_request(
            f"{where}: optional indices {sorted(stray)} are not selected "
            f"in any slot"
        )
    for name, slot in (("subject", subject), ("predicate", predicate), ("object", obj)):
        if not slot:
            raise _bad_request(f"{where}: {name} slot is empty")
        if all(i in set(optional) for i in slot):
            raise _bad_request(f"{where}: {name} slot has no mandatory token")
    return {
        "subject": subject,
        "predicate": predicate,
        "object": obj,
        "optional": sorted(optional),
        "entity_clean": entity_clean,
    }


def _parse_clusters(data: Any, n_tokens: int) -> list[dict]:
    if not isinstance(data, list):
        raise _bad_request("field 'clusters' must be a list")
    clusters: list[dict] = []
    seen_ids: set[str] = set()
    for ci, cluster in enumerate(data):
        where = f"cluster {ci + 1}"
        cid = _require(cluster, "id", str, where)
        if not SESSION_ID_RE.match(cid):
            raise _bad_request(f"{where}: id {cid!r} is not a valid identifier")
        if cid in seen_ids:
            raise _bad_request(f"{where}: duplicate cluster id {cid!r}")
        seen_ids.add(cid)
        patterns_raw = _require(cluster, "patterns", list, where)
        if not patterns_raw:
            raise _bad_request(f"{where}: needs at least one pattern")
        patterns = [
            _parse_pattern(p, n_tokens, f"{where}, pattern {pi + 1}")
            for pi, p in enumerate(patterns_raw)
        ]
        clusters.append({"id": cid, "patterns": patterns})
    return clusters


def _slot_pattern(tokens: tuple[str, ...], indices: list[int], optional: set[int]) -> gold.SlotPattern:
    """Selection order is kept; adjacent optional picks form one group."""
    elements: list[gold.SlotElement] = []
    run: list[Token] = []
    for i in indices:
        if i in optional:
            run.append(Token(tokens[i]))
        else:
            if run:
                elements.append(gold.OptionalGroup(tuple(run)))
                run = []
            elements.append(gold.LiteralToken(Token(tokens[i])))
    if run:
        elements.append(gold.OptionalGroup(tuple(run)))
    return gold.SlotPattern(tuple(elements))


def _draft_to_pattern(pattern: dict, tokens: tuple[str, ...]) -> gold.TriplePattern:
    optional = set(pattern["optional"])
    return gold.TriplePattern(
        subject=_slot_pattern(tokens, pattern["subject"], optional),
        predicate=_slot_pattern(tokens, pattern["predicate"], optional),
        object=_slot_pattern(tokens, pattern["object"], optional),
        entity_clean=pattern["entity_clean"],
    )


def _cluster_variants(cluster: dict, tokens: tuple[str, ...]) -> int:
    triples: set = set()
    for p in cluster["patterns"]:
        triples |= gold.expand(_draft_to_pattern(p, tokens))
    return len(triples)


class SessionStore:
    """Loads, mutates, and persists annotation sessions."""

    def __init__(self, data_dir: str | os.PathLike):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._sessions: dict[str, dict] = {}
        for path in sorted(self.data_dir.glob("*.json")):
            with open(path, "r", encoding="utf-8") as fh:
                session = json.load(fh)
            self._sessions[session["id"]] = session

    def _persist(self, session: dict) -> None:
        path = self.data_dir / f"{session['id']}.json"
        tmp = path.with_suffix(".json.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(session, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)

    def create(self, session_id: str, name: str, tagged_text: str) -> dict:
        try:
            tagged = ingest.read_tagged(tagged_text)
        except ingest.TaggedParseError as e:
            raise _bad_request(f"cannot parse tagged sentences: {e}")
        if not tagged:
            raise _bad_request("tagged input contains no sentences")
        with self._lock:
            if session_id in self._sessions:
                raise HTTPException(
                    status_code=409, detail=f"session {session_id!r} already exists"
                )
            session = {
                "id": session_id,
                "name": name,
                "sentences": [
                    {
                        "id": t.sentence.id,
                        "tokens": list(t.sentence.tokens.surfaces),
                        "pos": list(t.pos),
                        "deprels": list(t.deprels) if t.deprels else None,
                        "revision": 0,
                        "clusters": [],
                    }
                    for t in tagged
                ],
            }
            self._sessions[session_id] = session
            self._persist(session)
            return session

    def get(self, session_id: str) -> dict:
        session = self._sessions.get(session_id)
        if session is None:
            raise _not_found(f"no session {session_id!r}")
        return session

    def sentence(self, session_id: str, sentence_id: str) -> dict:
        session = self.get(session_id)
        for s in session["sentences"]:
            if s["id"] == sentence_id:
                return s
        raise _not_found(f"no sentence {sentence_id!r} in session {session_id!r}")

    def list(self) -> list[dict]:
        return [self._sessions[k] for k in sorted(self._sessions)]

    def put_annotation(
        self, session_id: str, sentence_id: str, expected_revision: int, clusters: list[dict]
    ) -> dict:
        with self._lock:
            session = self.get(session_id)
            sentence = self.sentence(session_id, sentence_id)
            if sentence["revision"] != expected_revision:
                raise HTTPException(
                    status_code=409,
                    detail=(
                        f"revision conflict: expected {expected_revision}, "
                        f"current is {sentence['revision']}"
                    ),
                )
            tokens = tuple(sentence["tokens"])
            for cluster in clusters:
                for pi, p in enumerate(cluster["patterns"]):
                    try:
                        gold.expand(_draft_to_pattern(p, tokens))
                    except ValueError as e:
                        raise _bad_request(
                            f"cluster {cluster['id']!r}, pattern {pi + 1}: {e}"
                        )
            sentence["clusters"] = clusters
            sentence["revision"] += 1
            self._persist(session)
            return sentence

    def export(self, session_id: str) -> str:
        session = self.get(session_id)
        sentences: dict[str, Sentence] = {}
        synsets: list[gold.FactSynset] = []
        for s in session["sentences"]:
            text = " ".join(s["tokens"])
            sentences[s["id"]] = Sentence.from_text(s["id"], text)
            for cluster in s["clusters"]:
                patterns = tuple(
                    _draft_to_pattern(p, tuple(s["tokens"])) for p in cluster["patterns"]
                )
                synsets.append(
                    gold.FactSynset(
                        id=f"{s['id']}.{cluster['id']}",
                        sentence_id=s["id"],
                        patterns=patterns,
                    )
                )
        corpus = gold.GoldCorpus(sentences=sentences, synsets=tuple(synsets))
        return gold.serialize_gold(corpus)


def _sentence_summary(s: dict) -> dict:
    return {
        "id": s["id"],
        "text": " ".join(s["tokens"]),
        "revision": s["revision"],
        "clusters": len(s["clusters"]),
    }


def _sentence_detail(s: dict) -> dict:
    deprels = s["deprels"]
    return {
        "id": s["id"],
        "text": " ".join(s["tokens"]),
        "revision": s["revision"],
        "tokens": [
            {
                "i": i,
                "surface": surface,
                "pos": s["pos"][i],
                "highlight": HIGHLIGHTS.get(s["pos"][i], "none"),
                "deprel": deprels[i] if deprels else None,
            }
            for i, surface in enumerate(s["tokens"])
        ],
        "clusters": [
            {
                "id": c["id"],
                "patterns": c["patterns"],
                "variants": _cluster_variants(c, tuple(s["tokens"])),
            }
            for c in s["clusters"]
        ],
    }


def create_app(data_dir: str | os.PathLike) -> FastAPI:
    store = SessionStore(data_dir)
    app = FastAPI(title="factbench annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.get("/sessions")
    def list_sessions() -> list[dict]:
        out = []
        for session in store.list():
            n = len(session["sentences"])
            annotated = sum(1 for s in session["sentences"] if s["clusters"])
            out.append(
                {
                    "id": session["id"],
                    "name": session["name"],
                    "sentences": n,
                    "annotated": annotated,
                }
            )
        return out

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request) -> dict:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise _bad_request("request body must be JSON")
        session_id = _require(body, "id", str, "session")
        if not SESSION_ID_RE.match(session_id):
            raise _bad_request(f"session id {session_id!r} is not a valid identifier")
        name = body.get("name", session_id)
        if not isinstance(name, str):
            raise _bad_request("session: field 'name' must be str")
        tagged_text = _require(body, "tagged", str, "session")
        session = store.create(session_id, name, tagged_text)
        return {
            "id": session["id"],
            "name": session["name"],
            "sentences": len(session["sentences"]),
            "annotated": 0,
        }

    @app.get("/sessions/{session_id}/sentences")
    def list_sentences(session_id: str) -> list[dict]:
        session = store.get(session_id)
        return [_sentence_summary(s) for s in session["sentences"]]

    @app.get("/sessions/{session_id}/sentences/{sentence_id}")
    def get_sentence(session_id: str, sentence_id: str) -> dict:
        return _sentence_detail(store.sentence(session_id, sentence_id))

    @app.put("/sessions/{session_id}/sentences/{sentence_id}/annotation")
    async def put_annotation(
        session_id: str, sentence_id: str, request: Request
    ) -> dict:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise _bad_request("request body must be JSON")
        expected = _require(body, "expected_revision", int, "annotation")
        sentence = store.sentence(session_id, sentence_id)
        clusters = _parse_clusters(
            _require(body, "clusters", list, "annotation"), len(sentence["tokens"])
        )
        updated = store.put_annotation(session_id, sentence_id, expected, clusters)
        return _sentence_detail(updated)

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str) -> PlainTextResponse:
        return PlainTextResponse(
            store.export(session_id), media_type="text/plain; charset=utf-8"
        )

    return app
