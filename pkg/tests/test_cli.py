"""End-to-end exercise of the command-line surface on small inputs."""

import pytest
from click.testing import CliRunner

from idiomatch.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


RAW_TEXT = """\
She's so cool and down to earth. They were teaching me a lesson.
Others have poured gasoline on the fire by blaming farmers.
He grasped at straws. Nothing else happened today.
"""


@pytest.fixture()
def workspace(runner, tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text(RAW_TEXT)
    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text(
        "down-to-earth\n"
        "teach someone a lesson\n"
        "add fuel to the fire\tpour gasoline on the fire\n"
        "grasp at straws\n"
    )
    run_ok(runner, ["annotate", "--input", str(raw), "--out", str(tmp_path / "annotated.tsv")])
    run_ok(runner, [
        "lexicon", "compile", "--input", str(lexicon), "--mode", "baseline",
        "--out", str(tmp_path / "rules.json"),
    ])
    return tmp_path


class TestAnnotateValidate:
    def test_validate_accepts_annotator_output(self, runner, workspace):
        result = run_ok(runner, ["validate", "--input", str(workspace / "annotated.tsv")])
        assert result.output.startswith("ok:")
        assert "5 sentences" in result.output

    def test_validate_rejects_malformed(self, runner, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("only\ttwo\n")
        result = runner.invoke(main, ["validate", "--input", str(bad)])
        assert result.exit_code == 1
        assert "line 1" in result.output

    def test_sentence_splitting_on_periods(self, runner, workspace):
        text = (workspace / "annotated.tsv").read_text()
        assert text.count("\n\n") == 5  # five sentences from three lines


class TestIdentifyPipeline:
    def test_artifacts_written(self, runner, workspace):
        run_ok(runner, [
            "identify", "--rules", str(workspace / "rules.json"),
            "--corpus", str(workspace / "annotated.tsv"),
            "--out-dir", str(workspace / "artifacts"),
        ])
        sent = (workspace / "artifacts" / "idiom2sent.tsv").read_text().splitlines()
        keys = sorted(line.split("\t")[0] for line in sent)
        assert keys == [
            "add_fuel_to_the_fire", "down-to-earth", "grasp_at_straws",
            "teach_someone_a_lesson",
        ]
        bows = (workspace / "artifacts" / "idiom2bows.tsv").read_text().splitlines()
        assert len(bows) == 4

    def test_strip_stopwords_flag(self, runner, workspace):
        run_ok(runner, [
            "identify", "--rules", str(workspace / "rules.json"),
            "--corpus", str(workspace / "annotated.tsv"),
            "--out-dir", str(workspace / "stripped"), "--strip-stopwords",
        ])
        text = (workspace / "stripped" / "idiom2sent.tsv").read_text()
        rows = dict(line.split("\t") for line in text.splitlines())
        # She/'s/so/and are stopwords; cool and the final period survive
        assert rows["down-to-earth"] == "[cool, [IDIOM], .]"

    def test_colloc_models(self, runner, workspace):
        run_ok(runner, [
            "identify", "--rules", str(workspace / "rules.json"),
            "--corpus", str(workspace / "annotated.tsv"),
            "--out-dir", str(workspace / "artifacts"),
        ])
        for model in ("tf", "tfidf", "pmi"):
            result = run_ok(runner, [
                "colloc", "--bows", str(workspace / "artifacts" / "idiom2bows.tsv"),
                "--model", model, "--out", str(workspace / f"colls_{model}.tsv"),
            ])
            assert "scored pairs" in result.output


class TestTrainQueryEval:
    @pytest.fixture()
    def trained(self, runner, tmp_path):
        corpus = tmp_path / "train.tsv"
        rows = []
        for i in range(40):
            rows.append(
                "warm_idiom\t[[sun, NOUN], [bright, ADJ], [[IDIOM], X], [shine, VERB]]"
            )
            rows.append(
                "cold_idiom\t[[ice, NOUN], [frozen, ADJ], [[IDIOM], X], [snow, NOUN]]"
            )
        corpus.write_text("\n".join(rows) + "\n")
        run_ok(runner, [
            "train", "--corpus", str(corpus), "--out", str(tmp_path / "vectors.txt"),
            "--epochs", "6", "--dim", "12", "--window", "3", "--seed", "3", "--quiet",
        ])
        return tmp_path

    def test_neighbors_self_row(self, runner, trained):
        result = run_ok(runner, [
            "neighbors", "--vectors", str(trained / "vectors.txt"), "--idiom", "warm_idiom",
        ])
        first = result.output.splitlines()[0].split("\t")
        assert first[0] == "warm_idiom"
        assert float(first[1]) == pytest.approx(1.0, abs=1e-4)

    def test_neighbors_unknown_idiom_fails(self, runner, trained):
        result = runner.invoke(main, [
            "neighbors", "--vectors", str(trained / "vectors.txt"), "--idiom", "nope",
        ])
        assert result.exit_code == 1

    def test_idiomify_query(self, runner, trained):
        colls = trained / "colls.tsv"
        colls.write_text("warm_idiom\tnoun\tsun\t1.000000\t2\n")
        result = run_ok(runner, [
            "idiomify", "--vectors", str(trained / "vectors.txt"),
            "--colls", str(colls), "--phrase", "bright sun", "-k", "2",
        ])
        assert "refined: bright sun" in result.output
        assert "warm_idiom" in result.output.splitlines()[1]

    def test_idiomify_oov_phrase(self, runner, trained):
        colls = trained / "colls.tsv"
        colls.write_text("warm_idiom\tnoun\tsun\t1.000000\t2\n")
        result = run_ok(runner, [
            "idiomify", "--vectors", str(trained / "vectors.txt"),
            "--colls", str(colls), "--phrase", "zzzqqq",
        ])
        assert "no known tokens" in result.output

    def test_eval_reports_median(self, runner, trained):
        testset = trained / "testset.tsv"
        testset.write_text("warm_idiom\tbright sun shine\ncold_idiom\tfrozen ice snow\n")
        result = run_ok(runner, [
            "eval", "--vectors", str(trained / "vectors.txt"),
            "--testset", str(testset), "--out", str(trained / "report.tsv"),
        ])
        assert "median rank 0.0" in result.output
        report = (trained / "report.tsv").read_text()
        assert "# median_rank\t0.0" in report


class TestServeConfig:
    def test_bad_config_exits_nonzero(self, runner, tmp_path):
        config = tmp_path / "config.json"
        config.write_text('{"vectors": "missing.txt", "collocations": {}}')
        result = runner.invoke(main, ["serve", "--config", str(config)])
        assert result.exit_code == 1
        assert "failed to start" in result.output
