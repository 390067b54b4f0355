"""Command-line interface: compile rules, annotate and identify corpora,
extract collocations, train embeddings, query and serve."""

from __future__ import annotations

import re
import sys
from pathlib import Path

import click

from idiomatch import _resources, colloc, embed, idiomify as idiomify_mod, matcher as matcher_mod
from idiomatch.corpus import AnnotatedCorpusReader, fallback_annotate, write_annotated
from idiomatch.lexicon import compile_lexicon, load_lexicon, load_rules, save_rules
from idiomatch.service import ApiConfig, ConfigError, create_app

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


@click.group()
def main() -> None:
    """Idiom identification, collocation extraction and reverse search."""


@main.group()
def lexicon() -> None:
    """Idiom vocabulary commands."""


@lexicon.command("compile")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["baseline", "extended"]), default="baseline")
@click.option("--min-words", type=int, default=3, show_default=True)
@click.option("--max-fill", type=int, default=3, show_default=True)
@click.option("--slop", type=int, default=None, help="override the extended-mode slop budget")
@click.option("--out", "out_path", required=True, type=click.Path())
def lexicon_compile(input_path: str, mode: str, min_words: int, max_fill: int,
                    slop: int | None, out_path: str) -> None:
    """Compile a lexicon file into a rules file."""
    lex = load_lexicon(input_path, min_words=min_words)
    rules = compile_lexicon(lex, mode, max_fill=max_fill, slop=slop)
    save_rules(rules, out_path, mode=mode)
    click.echo(f"compiled {len(rules)} rules ({mode}) -> {out_path}")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def annotate(input_path: str, out_path: str) -> None:
    """Annotate raw text with the fallback annotator."""
    sentences = []
    doc_id = Path(input_path).stem
    index = 0
    with open(input_path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            for piece in _SENTENCE_SPLIT.split(line):
                if piece.strip():
                    sentences.append(fallback_annotate(piece, doc_id=doc_id, sent_index=index))
                    index += 1
    with open(out_path, "w", encoding="utf-8") as handle:
        count = write_annotated(sentences, handle)
    click.echo(f"annotated {count} sentences -> {out_path}")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
def validate(input_path: str) -> None:
    """Check that an annotated corpus parses cleanly."""
    reader = AnnotatedCorpusReader(input_path)
    sentences = 0
    tokens = 0
    try:
        for sentence in reader:
            sentences += 1
            tokens += len(sentence)
    except ValueError as exc:
        click.echo(f"invalid: {exc}", err=True)
        sys.exit(1)
    click.echo(f"ok: {sentences} sentences, {tokens} tokens, "
               f"{reader.unknown_tag_count} unknown tags mapped to X")


@main.command()
@click.option("--rules", "rules_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--window", type=int, default=matcher_mod.DEFAULT_WINDOW, show_default=True)
@click.option("--strip-stopwords", is_flag=True, default=False)
def identify(rules_path: str, corpus_path: str, out_dir: str, window: int,
             strip_stopwords: bool) -> None:
    """Identify idioms in an annotated corpus and write the three artifacts."""
    rules = load_rules(rules_path)
    engine = matcher_mod.Matcher(rules)
    occurrences = []
    for sentence in AnnotatedCorpusReader(corpus_path):
        matches = engine.find(sentence)
        if matches:
            occurrences.extend(matcher_mod.merge_matches(sentence, matches))
    if strip_stopwords:
        occurrences = matcher_mod.strip_stopwords(occurrences, _resources.stopwords())
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "idiom2sent.tsv", "w", encoding="utf-8") as handle:
        matcher_mod.write_idiom2sent(occurrences, handle)
    with open(out / "idiom2lemma2pos.tsv", "w", encoding="utf-8") as handle:
        matcher_mod.write_idiom2lemma2pos(occurrences, handle)
    bows = matcher_mod.build_bows(occurrences, window=window)
    with open(out / "idiom2bows.tsv", "w", encoding="utf-8") as handle:
        matcher_mod.write_idiom2bows(bows, handle)
    click.echo(f"identified {len(occurrences)} occurrences of "
               f"{len({o.idiom_key for o in occurrences})} idioms -> {out_dir}")


@main.command("colloc")
@click.option("--bows", "bows_path", required=True, type=click.Path(exists=True))
@click.option("--model", type=click.Choice(list(colloc.MODELS)), required=True)
@click.option("--min-count", type=int, default=1, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def colloc_cmd(bows_path: str, model: str, min_count: int, out_path: str) -> None:
    """Extract ranked collocations from an idiom2bows table."""
    bows = matcher_mod.read_idiom2bows(bows_path)
    table = colloc.fit(model, bows, min_pair_count=min_count)
    with open(out_path, "w", encoding="utf-8") as handle:
        rows = colloc.write_table(table, handle)
    click.echo(f"{model}: {rows} scored pairs -> {out_path}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--epochs", type=int, default=80, show_default=True)
@click.option("--dim", type=int, default=200, show_default=True)
@click.option("--window", type=int, default=8, show_default=True)
@click.option("--min-count", type=int, default=1, show_default=True)
@click.option("--lr", type=float, default=0.025, show_default=True)
@click.option("--negative", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--parallel", type=int, default=1, show_default=True,
              help="worker threads; more than 1 gives up reproducibility")
@click.option("--quiet", is_flag=True, default=False)
def train(corpus_path: str, out_path: str, epochs: int, dim: int, window: int,
          min_count: int, lr: float, negative: int, seed: int, parallel: int,
          quiet: bool) -> None:
    """Train skip-gram embeddings on an idiom2lemma2pos corpus."""
    sequences = []
    keys = set()
    for key, pairs in matcher_mod.read_idiom2lemma2pos(corpus_path):
        keys.add(key)
        sequences.append([lemma for lemma, _ in pairs])
    config = embed.TrainingConfig(
        vector_size=dim, max_epochs=epochs, window=window, min_count=min_count,
        learning_rate=lr, negative_samples=negative, seed=seed,
    )
    store, trace = embed.train(sequences, config, idiom_keys=keys, workers=parallel)
    embed.save_vectors(store, out_path)
    if not quiet:
        for epoch, loss in enumerate(trace):
            click.echo(f"epoch {epoch}\tloss {loss:.3f}")
    click.echo(f"trained {len(store.vocab)} tokens ({len(store.idiom_keys)} idioms), "
               f"{len(trace)} epochs -> {out_path}")


@main.command()
@click.option("--vectors", "vectors_path", required=True, type=click.Path(exists=True))
@click.option("--idiom", required=True)
@click.option("-k", type=int, default=5, show_default=True)
def neighbors(vectors_path: str, idiom: str, k: int) -> None:
    """Nearest idioms to a known idiom key."""
    store = embed.load_vectors(vectors_path)
    if idiom not in store.idiom_keys:
        click.echo(f"unknown idiom {idiom!r}", err=True)
        sys.exit(1)
    for key, sim in embed.nearest_idioms(store, store.vector(idiom), k):
        click.echo(f"{key}\t{sim:.4f}")


@main.command("idiomify")
@click.option("--vectors", "vectors_path", required=True, type=click.Path(exists=True))
@click.option("--colls", "colls_path", required=True, type=click.Path(exists=True))
@click.option("--phrase", required=True)
@click.option("-k", type=int, default=5, show_default=True)
@click.option("--model", type=click.Choice(list(colloc.MODELS)), default="pmi", show_default=True)
def idiomify_cmd(vectors_path: str, colls_path: str, phrase: str, k: int, model: str) -> None:
    """Reverse-search idioms for a phrase."""
    store = embed.load_vectors(vectors_path)
    table = colloc.read_table(colls_path, model)
    engine = idiomify_mod.Idiomifier(store, {model: table}, default_model=model)
    response = engine.idiomify(phrase, k=k)
    click.echo(f"refined: {' '.join(response.refined_tokens)}")
    if response.reason:
        click.echo(f"no results: {response.reason}")
        return
    for rank, result in enumerate(response.results):
        click.echo(f"{rank}\t{result.idiom_key}\t{result.similarity:.4f}")
        for category in matcher_mod.CATEGORIES:
            pairs = result.collocations[category]
            listed = ", ".join(f"{lemma} ({score:.2f})" for lemma, score in pairs)
            click.echo(f"\t{category}: {listed}")


@main.command("eval")
@click.option("--vectors", "vectors_path", required=True, type=click.Path(exists=True))
@click.option("--testset", "testset_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def eval_cmd(vectors_path: str, testset_path: str, out_path: str) -> None:
    """Reverse-search every test definition and report rank statistics."""
    store = embed.load_vectors(vectors_path)
    items = idiomify_mod.read_testset(testset_path)
    report = idiomify_mod.evaluate(store, items)
    with open(out_path, "w", encoding="utf-8") as handle:
        idiomify_mod.write_report(report, handle)
    click.echo(f"median rank {report.median} over {len(report.rows)} items -> {out_path}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def serve(config_path: str) -> None:
    """Serve the query API over the trained artifacts."""
    import uvicorn

    try:
        config = ApiConfig.from_file(config_path)
        app = create_app(config)
    except (ConfigError, OSError, ValueError) as exc:
        click.echo(f"failed to start: {exc}", err=True)
        sys.exit(1)
    uvicorn.run(app, host=config.host, port=config.port)


if __name__ == "__main__":
    main()
