"""HTTP facade: endpoint contracts, validation and startup failure modes."""

import json

import pytest
from fastapi.testclient import TestClient

from idiomatch.colloc import fit, write_table
from idiomatch.embed import save_vectors
from idiomatch.matcher import BagOfWords
from idiomatch.service import ApiConfig, ConfigError, create_app

from conftest import TOY_IDIOMS


@pytest.fixture(scope="module")
def served(toy_store, tmp_path_factory):
    """Artifacts on disk plus a TestClient over them."""
    store, _ = toy_store
    root = tmp_path_factory.mktemp("service")
    vectors = root / "vectors.txt"
    save_vectors(store, vectors)
    bows = [
        BagOfWords(idiom_key=key, verb={"wait": 2}, noun={"zebra": 1}, adj={}, adv={})
        for key in TOY_IDIOMS
    ]
    paths = {}
    for kind in ("tf", "tfidf", "pmi"):
        path = root / f"colls_{kind}.tsv"
        with open(path, "w", encoding="utf-8") as handle:
            write_table(fit(kind, bows), handle)
        paths[kind] = str(path)
    config = ApiConfig(vectors=str(vectors), collocations=paths, default_model="pmi")
    client = TestClient(create_app(config))
    return client, store


class TestHealth:
    def test_counts_match_store(self, served):
        client, store = served
        body = client.get("/api/health").json()
        assert body == {
            "status": "ok",
            "idioms": len(store.idiom_keys),
            "vocab": len(store.vocab),
            "model": "pmi",
        }

    def test_idiom_count_matches_companion_file(self, served, toy_store):
        client, store = served
        health = client.get("/api/health").json()
        assert health["idioms"] == len(store.idiom_keys)


class TestIdiomifyEndpoint:
    def test_successful_search(self, served):
        client, _ = served
        response = client.get("/api/idiomify", params={"phrase": "wait anxious", "k": 3})
        assert response.status_code == 200
        body = response.json()
        assert body["query"] == "wait anxious"
        assert body["refined_tokens"] == ["wait", "anxious"]
        assert 1 <= len(body["results"]) <= 3
        for result in body["results"]:
            assert set(result["collocations"]) == {"verb", "noun", "adj", "adv"}
            assert -1.0 <= result["similarity"] <= 1.0
            for pairs in result["collocations"].values():
                assert len(pairs) <= 5
        assert "reason" not in body

    def test_similarities_descend(self, served):
        client, _ = served
        body = client.get("/api/idiomify", params={"phrase": "wait anxious", "k": 4}).json()
        sims = [r["similarity"] for r in body["results"]]
        assert sims == sorted(sims, reverse=True)

    def test_missing_phrase_is_400(self, served):
        client, _ = served
        assert client.get("/api/idiomify").status_code == 400
        assert client.get("/api/idiomify", params={"phrase": "  "}).status_code == 400

    def test_bad_k_and_model_are_400(self, served):
        client, _ = served
        assert client.get("/api/idiomify", params={"phrase": "x", "k": 0}).status_code == 400
        assert client.get("/api/idiomify", params={"phrase": "x", "k": 51}).status_code == 400
        assert (
            client.get("/api/idiomify", params={"phrase": "x", "model": "nope"}).status_code
            == 400
        )

    def test_unknown_tokens_reason(self, served):
        client, _ = served
        body = client.get("/api/idiomify", params={"phrase": "zzzqqq"}).json()
        assert body["results"] == []
        assert body["reason"] == "no known tokens"

    def test_model_switch(self, served):
        client, _ = served
        for model in ("tf", "tfidf", "pmi"):
            response = client.get("/api/idiomify", params={"phrase": "wait", "model": model})
            assert response.status_code == 200


class TestNeighborsEndpoint:
    def test_self_row_first(self, served):
        client, _ = served
        body = client.get("/api/neighbors", params={"idiom": "catch-22", "k": 3}).json()
        assert body[0]["idiom"] == "catch-22"
        assert body[0]["similarity"] == pytest.approx(1.0, abs=1e-9)
        assert len(body) == 3

    def test_k_one_returns_self_only(self, served):
        client, _ = served
        body = client.get("/api/neighbors", params={"idiom": "catch-22", "k": 1}).json()
        assert [row["idiom"] for row in body] == ["catch-22"]

    def test_unknown_idiom_404_with_hint(self, served):
        client, _ = served
        response = client.get("/api/neighbors", params={"idiom": "catch-23"})
        assert response.status_code == 404
        detail = response.json()["detail"]
        assert "catch-22" in detail["hint"]

    def test_bad_k_is_400(self, served):
        client, _ = served
        assert client.get("/api/neighbors", params={"idiom": "catch-22", "k": 0}).status_code == 400


class TestDeterminism:
    def test_identical_requests_identical_bytes(self, served):
        client, _ = served
        a = client.get("/api/idiomify", params={"phrase": "wait anxious", "k": 4})
        b = client.get("/api/idiomify", params={"phrase": "wait anxious", "k": 4})
        assert a.content == b.content


class TestConfig:
    def test_missing_vectors_fail_startup(self, tmp_path):
        config = ApiConfig(vectors=str(tmp_path / "nope.txt"), collocations={}, default_model="pmi")
        with pytest.raises(ConfigError):
            create_app(config)

    def test_missing_table_fail_startup(self, served, tmp_path, toy_store):
        store, _ = toy_store
        vectors = tmp_path / "v.txt"
        save_vectors(store, vectors)
        config = ApiConfig(vectors=str(vectors), collocations={}, default_model="pmi")
        with pytest.raises(ConfigError):
            create_app(config)

    def test_from_file_with_env_overrides(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"host": "0.0.0.0", "port": 1234, "vectors": "a.txt",
                                    "collocations": {"pmi": "p.tsv"}}))
        monkeypatch.setenv("IDIOMATCH_BIND", "localhost:9999")
        monkeypatch.setenv("IDIOMATCH_VECTORS", "b.txt")
        monkeypatch.setenv("IDIOMATCH_COLLS_TF", "t.tsv")
        config = ApiConfig.from_file(path)
        assert (config.host, config.port) == ("localhost", 9999)
        assert config.vectors == "b.txt"
        assert config.collocations == {"pmi": "p.tsv", "tf": "t.tsv"}
