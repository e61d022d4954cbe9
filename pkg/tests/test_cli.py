import json
from pathlib import Path

import pytest

from discussena.cli import main
from discussena.codebook import build_codebook
from discussena.coder import code_corpus
from discussena.ingestion import export_csv, import_csv
from discussena.store import DataStore
from discussena.textprep import preprocess_corpus

from conftest import make_post


def write_corpus_csv(path: Path, posts) -> None:
    cb = build_codebook(
        "seedcb",
        [("a", ["testing"]), ("b", ["boundary"]), ("c", ["interface"]),
         ("d", ["category"]), ("e", ["subclass"])],
    )
    coded = code_corpus(preprocess_corpus(posts), posts, cb)
    path.write_bytes(export_csv(coded, cb))


@pytest.fixture()
def corpus_csv(tmp_path):
    posts = [
        make_post(f"p{i}", f"s{i % 4}",
                  f"testing boundary interface category subclass design note number{i} extra{i % 7} word{i % 11}")
        for i in range(30)
    ]
    path = tmp_path / "corpus.csv"
    write_corpus_csv(path, posts)
    return path


def run(*argv) -> int:
    return main([str(a) for a in argv])


class TestIngest:
    def test_csv_ingest(self, tmp_path, corpus_csv):
        code = run("--data-dir", tmp_path / "data", "ingest", "--csv", corpus_csv, "--discussion", "d1")
        assert code == 0
        assert DataStore(tmp_path / "data").load_posts("d1") is not None

    def test_missing_file_is_io_error(self, tmp_path):
        assert run("--data-dir", tmp_path, "ingest", "--csv", tmp_path / "nope.csv", "--discussion", "d1") == 2

    def test_no_source_is_validation_error(self, tmp_path):
        assert run("--data-dir", tmp_path, "ingest") == 1


class TestGenCodebook:
    def test_deterministic_bytes(self, tmp_path, corpus_csv):
        data = tmp_path / "data"
        assert run("--data-dir", data, "ingest", "--csv", corpus_csv, "--discussion", "d1") == 0
        assert run("--data-dir", data, "gen-codebook", "--discussion", "d1",
                   "--seed", 7, "--iterations", 60) == 0
        generated = data / "discussions" / "d1" / "codebook-generated.json"
        first = generated.read_bytes()
        assert run("--data-dir", data, "gen-codebook", "--discussion", "d1",
                   "--seed", 7, "--iterations", 60) == 0
        assert generated.read_bytes() == first

    def test_installs_version_1(self, tmp_path, corpus_csv):
        data = tmp_path / "data"
        run("--data-dir", data, "ingest", "--csv", corpus_csv, "--discussion", "d1")
        run("--data-dir", data, "gen-codebook", "--discussion", "d1", "--seed", 0, "--iterations", 40)
        store = DataStore(data)
        assert store.latest_version("d1") == 1
        cb = store.load_codebook("d1")
        assert [t.name for t in cb.topics] == ["0", "1", "2", "3", "4"]

    def test_not_ingested_fails(self, tmp_path):
        assert run("--data-dir", tmp_path, "gen-codebook", "--discussion", "ghost") == 1


class TestModel:
    def seed(self, data, posts):
        store = DataStore(data)
        store.save_posts("d1", posts)
        cb = build_codebook(
            "d1",
            [("a", ["testing"]), ("b", ["boundary"]), ("c", ["interface"]),
             ("d", ["category"]), ("e", ["subclass"])],
        )
        store.append_codebook("d1", cb)
        return store

    def test_stable_output_files(self, tmp_path):
        data = tmp_path / "data"
        self.seed(data, [make_post("p1", "s1", "testing the boundary")])
        assert run("--data-dir", data, "model", "--discussion", "d1", "--scope", "all") == 0
        out = data / "discussions" / "d1" / "1"
        assert (out / "model-all.json").exists()
        assert (out / "model-all.edges.txt").exists()
        assert (out / "model-all.svg").exists()
        payload = json.loads((out / "model-all.json").read_text())
        assert payload["scope"] == "all"

    def test_initial_only_on_reply_heavy_fixture(self, tmp_path):
        data = tmp_path / "data"
        posts = [
            make_post("p1", "s1", "interface note"),
            make_post("p2", "s1", "testing the boundary", parent="p1", minutes=1),
        ]
        self.seed(data, posts)
        assert run("--data-dir", data, "model", "--discussion", "d1", "--scope", "initial_only") == 0
        edges = (data / "discussions" / "d1" / "1" / "model-initial_only.edges.txt").read_text()
        assert "(no connections)" in edges
        assert run("--data-dir", data, "model", "--discussion", "d1", "--scope", "all") == 0
        edges_all = (data / "discussions" / "d1" / "1" / "model-all.edges.txt").read_text()
        assert "a -- b" in edges_all

    def test_unknown_discussion(self, tmp_path):
        assert run("--data-dir", tmp_path, "model", "--discussion", "ghost") == 1


class TestExportAndRecode:
    def test_round_trip_matrix(self, tmp_path):
        data = tmp_path / "data"
        posts = [
            make_post("p1", "s1", "testing the boundary with interface"),
            make_post("p2", "s2", "category subclass testing", minutes=1),
            make_post("p3", "s1", "plain words only", minutes=2),
        ]
        TestModel().seed(data, posts)
        export_path = tmp_path / "export.csv"
        assert run("--data-dir", data, "export", "--discussion", "d1", "--out", export_path) == 0

        recoded_path = tmp_path / "recoded.csv"
        assert run("--data-dir", data, "code", "--discussion", "d1",
                   "--from-csv", export_path, "--out", recoded_path) == 0

        original = import_csv(export_path.read_bytes())
        recoded = import_csv(recoded_path.read_bytes())
        key = lambda imp: {(p.author_id, p.post_id): c for p, c in zip(imp.posts, imp.codes)}
        assert key(original) == key(recoded)

    def test_help_exits_clean(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--help"])
        assert err.value.code == 0
