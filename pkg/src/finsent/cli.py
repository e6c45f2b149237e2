"""Single entry point exposing the pipeline as subcommands.

Settings come from an optional TOML config file; command-line flags win over
the file, and the ``FINSENT_OUT_DIR`` environment variable overrides the
configured output directory (but not an explicit ``--out-dir``). Every run
writes a ``manifest.json`` recording the resolved configuration, the seed,
and a SHA-256 digest of each input file, so artifacts are reproducible and
attributable. No artifact embeds a timestamp.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import annotation, corpus, embeddings, evaluation, lexicon, marketcorr, model
from .corpus import Sentiment
from .errors import FinsentError, ValidationError
from .series import write_series_csv

ENV_OUT_DIR = "FINSENT_OUT_DIR"


@dataclass
class RunConfig:
    """Resolved settings for one run (config file merged with flags)."""

    articles: str | None = None
    labels: str | None = None
    embeddings_path: str | None = None
    lexicon_path: str | None = None
    stopwords_path: str | None = None
    market: dict[str, tuple[str, str]] = field(default_factory=dict)  # name -> (path, field)
    preset: str = "M4"
    description_word_cap: int = corpus.DEFAULT_DESCRIPTION_WORD_CAP
    embedding_dim: int | None = None  # None: infer from the vector file
    max_len: int = embeddings.DEFAULT_MAX_LEN
    covid_tokens: tuple[str, ...] = embeddings.DEFAULT_COVID_TOKENS
    covid_fill: float = embeddings.DEFAULT_COVID_FILL
    lexicon_channel: bool = True
    filter_widths: tuple[int, ...] = (3, 4, 5)
    filters_per_width: int = 128
    hidden_size: int = 256
    dropout: tuple[float, float] = (0.5, 0.5)
    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 100
    test_fraction: float = 0.15
    excluded_annotators: tuple[str, ...] = ()
    window: int = 10
    market_pairs: tuple[tuple[str, str], ...] = ()
    terms: tuple[str, ...] = ()
    substring_match: bool = False
    timezone: str = corpus.DEFAULT_TIMEZONE
    seed: int = 0
    threads: int = 1
    out_dir: str = "runs/out"

    def cnn_config(self, feature_dim: int) -> model.CnnConfig:
        return model.CnnConfig(
            feature_dim=feature_dim,
            max_len=self.max_len,
            filter_widths=tuple(self.filter_widths),
            filters_per_width=self.filters_per_width,
            hidden_size=self.hidden_size,
            dropout=tuple(self.dropout),
            learning_rate=self.learning_rate,
            batch_size=self.batch_size,
            epochs=self.epochs,
            seed=self.seed,
        )


def load_config_file(path: str | Path) -> dict[str, Any]:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _market_from_toml(raw: dict[str, Any]) -> dict[str, tuple[str, str]]:
    out: dict[str, tuple[str, str]] = {}
    for name, value in raw.items():
        if isinstance(value, str):
            out[name] = (value, "close")
        else:
            out[name] = (value["path"], value.get("field", "close"))
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        data = load_config_file(args.config)
        paths = data.get("paths", {})
        cfg.articles = paths.get("articles", cfg.articles)
        cfg.labels = paths.get("labels", cfg.labels)
        cfg.embeddings_path = paths.get("embeddings", cfg.embeddings_path)
        cfg.lexicon_path = paths.get("lexicon", cfg.lexicon_path)
        cfg.stopwords_path = paths.get("stopwords", cfg.stopwords_path)
        cfg.market = _market_from_toml(paths.get("market", {}))
        pre = data.get("preprocess", {})
        cfg.preset = pre.get("preset", cfg.preset)
        cfg.description_word_cap = pre.get("description_word_cap", cfg.description_word_cap)
        feats = data.get("features", {})
        cfg.embedding_dim = feats.get("embedding_dim", cfg.embedding_dim)
        cfg.max_len = feats.get("max_len", cfg.max_len)
        cfg.covid_tokens = tuple(feats.get("covid_tokens", cfg.covid_tokens))
        cfg.covid_fill = feats.get("covid_fill", cfg.covid_fill)
        cfg.lexicon_channel = feats.get("lexicon_channel", cfg.lexicon_channel)
        mdl = data.get("model", {})
        cfg.filter_widths = tuple(mdl.get("filter_widths", cfg.filter_widths))
        cfg.filters_per_width = mdl.get("filters_per_width", cfg.filters_per_width)
        cfg.hidden_size = mdl.get("hidden_size", cfg.hidden_size)
        cfg.dropout = tuple(mdl.get("dropout", cfg.dropout))
        cfg.learning_rate = mdl.get("learning_rate", cfg.learning_rate)
        cfg.batch_size = mdl.get("batch_size", cfg.batch_size)
        cfg.epochs = mdl.get("epochs", cfg.epochs)
        tr = data.get("train", {})
        cfg.test_fraction = tr.get("test_fraction", cfg.test_fraction)
        cfg.excluded_annotators = tuple(tr.get("excluded_annotators", cfg.excluded_annotators))
        corr = data.get("correlate", {})
        cfg.window = corr.get("window", cfg.window)
        cfg.market_pairs = tuple(tuple(p) for p in corr.get("market_pairs", cfg.market_pairs))
        cfg.terms = tuple(corr.get("terms", cfg.terms))
        cfg.substring_match = corr.get("substring_match", cfg.substring_match)
        run = data.get("run", {})
        cfg.timezone = run.get("timezone", cfg.timezone)
        cfg.seed = run.get("seed", cfg.seed)
        cfg.threads = run.get("threads", cfg.threads)
        cfg.out_dir = run.get("out_dir", cfg.out_dir)

    env_out = os.environ.get(ENV_OUT_DIR)
    if env_out:
        cfg.out_dir = env_out

    # Flags win over both the file and the environment.
    for attr, flag in [
        ("articles", "articles"),
        ("labels", "labels"),
        ("embeddings_path", "embeddings"),
        ("lexicon_path", "lexicon"),
        ("stopwords_path", "stopwords"),
        ("preset", "preset"),
        ("embedding_dim", "embedding_dim"),
        ("max_len", "max_len"),
        ("epochs", "epochs"),
        ("window", "window"),
        ("seed", "seed"),
        ("threads", "threads"),
        ("out_dir", "out_dir"),
        ("test_fraction", "test_fraction"),
        ("timezone", "timezone"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    if getattr(args, "terms", None):
        cfg.terms = tuple(t.strip() for t in args.terms.split(",") if t.strip())
    if getattr(args, "substring", False):
        cfg.substring_match = True
    if getattr(args, "exclude_annotator", None):
        cfg.excluded_annotators = tuple(args.exclude_annotator)
    if getattr(args, "market", None):
        for entry in args.market:
            name, _, rest = entry.partition("=")
            if not rest:
                raise ValidationError(f"--market expects NAME=PATH[:FIELD], got {entry!r}")
            path, sep, fld = rest.rpartition(":")
            if sep and fld in ("close", "adj_close", "volume", "open", "high", "low"):
                cfg.market[name] = (path, fld)
            else:
                cfg.market[name] = (rest, "close")
    if getattr(args, "market_pair", None):
        pairs = []
        for raw in args.market_pair:
            left, _, right = raw.partition(",")
            if not right:
                raise ValidationError(f"--market-pair expects A,B, got {raw!r}")
            pairs.append((left.strip(), right.strip()))
        cfg.market_pairs = tuple(pairs)
    if getattr(args, "no_lexicon_channel", False):
        cfg.lexicon_channel = False
    if cfg.threads < 1:
        raise ValidationError(f"--threads must be >= 1, got {cfg.threads}")
    return cfg


# ---------------------------------------------------------------------------
# Manifest

def _sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir: Path,
    subcommand: str,
    cfg: RunConfig,
    inputs: dict[str, str],
    outputs: Sequence[str],
) -> None:
    manifest = {
        "subcommand": subcommand,
        "seed": cfg.seed,
        "threads": cfg.threads,
        "config": {
            k: (sorted(v.items()) if isinstance(v, dict) else v)
            for k, v in asdict(cfg).items()
        },
        "inputs": {
            name: {"path": str(path), "sha256": _sha256(path)}
            for name, path in sorted(inputs.items())
        },
        "outputs": sorted(outputs),
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(cfg: RunConfig, *attrs: str) -> None:
    missing = [a for a in attrs if not getattr(cfg, a)]
    if missing:
        raise ValidationError(
            "missing required inputs: " + ", ".join(missing)
            + " (set via config file or flags)"
        )


# ---------------------------------------------------------------------------
# Prediction CSV (article_id,label)

def write_predictions_csv(
    pairs: Sequence[tuple[str, Sentiment]], path: str | Path
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["article_id", "label"])
        for article_id, label in pairs:
            writer.writerow([article_id, int(label)])


def load_predictions_csv(path: str | Path) -> list[tuple[str, Sentiment]]:
    out: list[tuple[str, Sentiment]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"article_id", "label"}:
            raise ValidationError(f"{path}: expected header article_id,label")
        for row in reader:
            out.append((row["article_id"], Sentiment(int(row["label"]))))
    return out


# ---------------------------------------------------------------------------
# Subcommands

def cmd_stats(cfg: RunConfig) -> int:
    _require(cfg, "articles")
    out = _outdir(cfg)
    articles = corpus.load_articles(cfg.articles)
    stopwords = corpus.load_stopwords(cfg.stopwords_path)
    stats = corpus.corpus_stats(articles, stopwords=stopwords)
    corpus.write_stats_csv(stats, out / "stats.csv")
    corpus.write_top_words_csv(stats, out / "top_words.csv")
    inputs = {"articles": cfg.articles}
    if cfg.stopwords_path:
        inputs["stopwords"] = cfg.stopwords_path
    write_manifest(out, "stats", cfg, inputs, ["stats.csv", "top_words.csv"])
    print(
        f"{stats.article_count} articles, vocab {stats.vocab_size}, "
        f"title words {stats.title_word_count} -> {out / 'stats.csv'}"
    )
    return 0


def cmd_freq(cfg: RunConfig) -> int:
    _require(cfg, "articles")
    if not cfg.terms:
        raise ValidationError("freq requires query terms (--terms or [correlate].terms)")
    out = _outdir(cfg)
    articles = corpus.load_articles(cfg.articles)
    percents, volumes = corpus.query_frequency(
        articles, set(cfg.terms), tz=cfg.timezone, substring=cfg.substring_match
    )
    corpus.write_frequency_csv(percents, volumes, out / "freq.csv")
    write_manifest(out, "freq", cfg, {"articles": cfg.articles}, ["freq.csv"])
    print(f"{len(percents)} days -> {out / 'freq.csv'}")
    return 0


def cmd_agreement(cfg: RunConfig) -> int:
    _require(cfg, "labels")
    out = _outdir(cfg)
    records = corpus.load_labels(cfg.labels)
    aset = annotation.AnnotationSet.from_records(records)
    matrix = annotation.kappa_matrix(aset)
    annotation.write_kappa_csv(matrix, out / "kappa.csv")
    summary = annotation.format_agreement_summary(aset, matrix)
    (out / "agreement.txt").write_text(summary, encoding="utf-8")
    write_manifest(out, "agreement", cfg, {"labels": cfg.labels}, ["kappa.csv", "agreement.txt"])
    print(summary, end="")
    return 0


def _build_features(
    cfg: RunConfig, articles: list[corpus.Article]
) -> tuple[list[embeddings.EmbeddedDoc], embeddings.EmbeddingTable, dict[str, str]]:
    """Shared preprocess -> embed path for train and predict."""
    inputs: dict[str, str] = {"articles": cfg.articles, "embeddings": cfg.embeddings_path}
    pipeline = corpus.preset(cfg.preset, cfg.description_word_cap)
    stopwords = corpus.load_stopwords(cfg.stopwords_path)
    if cfg.stopwords_path:
        inputs["stopwords"] = cfg.stopwords_path
    docs = corpus.preprocess_articles(articles, pipeline, stopwords)

    table = embeddings.load_embedding_table(cfg.embeddings_path, cfg.embedding_dim)
    if pipeline.covid_embeddings:
        table = embeddings.add_synthetic_covid_embeddings(table, cfg.covid_tokens, cfg.covid_fill)

    score_fn = None
    if cfg.lexicon_path and cfg.lexicon_channel:
        lex = lexicon.load_lexicon(cfg.lexicon_path)
        score_fn = lambda tokens: lexicon.score_tokens(lex, tokens)
        inputs["lexicon"] = cfg.lexicon_path
    embedded = embeddings.embed_docs(
        table, [d.tokens for d in docs], cfg.max_len, score_fn=score_fn
    )
    return embedded, table, inputs


def cmd_train(cfg: RunConfig) -> int:
    _require(cfg, "articles", "labels", "embeddings_path")
    out = _outdir(cfg)
    articles = corpus.load_articles(cfg.articles)
    records = corpus.load_labels(cfg.labels)
    aset = annotation.AnnotationSet.from_records(records)
    gold = annotation.assemble_gold(aset, set(cfg.excluded_annotators))

    by_id = {a.id: a for a in articles}
    missing = [aid for aid, _ in gold if aid not in by_id]
    if missing:
        raise ValidationError(
            f"{len(missing)} labeled article ids missing from the corpus "
            f"(first: {missing[0]!r})"
        )
    labeled_articles = [by_id[aid] for aid, _ in gold]
    labels = [label for _, label in gold]

    embedded, table, inputs = _build_features(cfg, labeled_articles)
    inputs["labels"] = cfg.labels
    feature_dim = embedded[0].matrix.shape[1] if embedded else table.dim
    cnn_cfg = cfg.cnn_config(feature_dim)

    data = model.Dataset.from_docs(embedded, labels)
    train_set, test_set = model.train_test_split(data, cfg.test_fraction, cfg.seed)
    params, report, state = model.train(cnn_cfg, train_set, test_set)

    model.save_checkpoint(out / "checkpoint.bin", cnn_cfg, params, state)
    model.write_train_report_csv(report, out / "train_report.csv")
    summary = {
        "epochs": cnn_cfg.epochs,
        "train_examples": len(train_set),
        "test_examples": len(test_set),
        "max_macro_f1": report.max_macro_f1,
        "max_weighted_f1": report.max_weighted_f1,
        "best_macro_epoch": report.best_macro_epoch,
        "best_weighted_epoch": report.best_weighted_epoch,
        "final_macro_f1": report.final.test_macro_f1 if report.final else None,
        "final_weighted_f1": report.final.test_weighted_f1 if report.final else None,
    }
    with open(out / "train_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_manifest(
        out, "train", cfg, inputs,
        ["checkpoint.bin", "train_report.csv", "train_summary.json"],
    )
    if report.final:
        print(
            f"trained {cnn_cfg.epochs} epochs on {len(train_set)}/{len(test_set)} examples; "
            f"max weighted F1 {report.max_weighted_f1:.3f} "
            f"(epoch {report.best_weighted_epoch}), final {report.final.test_weighted_f1:.3f}"
        )
    else:
        print("trained 0 epochs; wrote initial parameters")
    return 0


def cmd_predict(cfg: RunConfig, checkpoint: str) -> int:
    _require(cfg, "articles", "embeddings_path")
    out = _outdir(cfg)
    cnn_cfg, params, _, _ = model.load_checkpoint(checkpoint)
    cfg.max_len = cnn_cfg.max_len  # embedding length must match training
    articles = corpus.load_articles(cfg.articles)
    embedded, _, inputs = _build_features(cfg, articles)
    inputs["checkpoint"] = checkpoint
    feature_dim = embedded[0].matrix.shape[1] if embedded else 0
    if embedded and feature_dim != cnn_cfg.feature_dim:
        raise ValidationError(
            f"feature dim {feature_dim} does not match checkpoint ({cnn_cfg.feature_dim}); "
            "check the lexicon-channel setting and embedding file"
        )
    preds = model.predict(params, embedded) if embedded else []
    write_predictions_csv(list(zip((a.id for a in articles), preds)), out / "predictions.csv")
    write_manifest(out, "predict", cfg, inputs, ["predictions.csv"])
    print(f"{len(preds)} predictions -> {out / 'predictions.csv'}")
    return 0


def cmd_eval(cfg: RunConfig, predictions_path: str) -> int:
    _require(cfg, "labels")
    out = _outdir(cfg)
    records = corpus.load_labels(cfg.labels)
    aset = annotation.AnnotationSet.from_records(records)
    gold = dict(annotation.assemble_gold(aset, set(cfg.excluded_annotators)))
    preds = dict(load_predictions_csv(predictions_path))
    shared = [aid for aid in gold if aid in preds]
    if not shared:
        raise ValidationError("no overlap between gold labels and predictions")
    y_true = [gold[aid] for aid in shared]
    y_pred = [preds[aid] for aid in shared]

    report = evaluation.f1_report(evaluation.confusion(y_true, y_pred))
    decomp = evaluation.off_by_one(y_true, y_pred)
    evaluation.write_metrics_csv(report, out / "metrics.csv")
    evaluation.write_decomposition_csv(decomp, out / "decomposition.csv")
    write_manifest(
        out, "eval", cfg,
        {"labels": cfg.labels, "predictions": predictions_path},
        ["metrics.csv", "decomposition.csv"],
    )
    print(evaluation.format_report(report), end="")
    print(
        f"correct {decomp.correct}, off-by-one {decomp.off_by_one_total} "
        f"(acceptable {decomp.acceptable}), clear {decomp.clear_total} of {decomp.total}"
    )
    return 0


def cmd_correlate(cfg: RunConfig, predictions_path: str, tickers: str | None = None) -> int:
    _require(cfg, "articles")
    if not cfg.market:
        raise ValidationError("correlate requires at least one --market NAME=PATH series")
    out = _outdir(cfg)
    articles = corpus.load_articles(cfg.articles)
    if tickers:
        wanted = {t.strip().upper() for t in tickers.split(",") if t.strip()}
        subset = marketcorr.filter_by_tickers(articles, wanted)
        print(
            f"ticker filter {sorted(wanted)}: {subset.count} of {len(articles)} articles "
            f"({100 * subset.fraction:.1f}%)"
        )
        articles = list(subset.articles)
    preds = dict(load_predictions_csv(predictions_path))
    missing = [a.id for a in articles if a.id not in preds]
    if missing:
        raise ValidationError(
            f"{len(missing)} articles lack predictions (first: {missing[0]!r})"
        )
    labels = [preds[a.id] for a in articles]
    sentiment = marketcorr.daily_sentiment(articles, labels, tz=cfg.timezone)

    market: dict[str, object] = {}
    inputs = {"articles": cfg.articles, "predictions": predictions_path}
    for name, (path, fld) in cfg.market.items():
        bars = marketcorr.load_market_csv(path)
        market[name] = marketcorr.series_from_bars(bars, fld)
        inputs[f"market:{name}"] = path

    if cfg.threads > 1:
        # Independent correlation groups; fixed result order keeps output stable.
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            futures = [
                pool.submit(
                    marketcorr.correlation_report, sentiment, {name: market[name]}, cfg.window
                )
                for name in market
            ]
            rows = [row for fut in futures for row in fut.result()]
        rows += marketcorr.market_pair_rows(market, cfg.market_pairs)
    else:
        rows = marketcorr.correlation_report(sentiment, market, cfg.window, cfg.market_pairs)

    marketcorr.write_correlation_csv(rows, out / "correlations.csv")
    raw = marketcorr.drop_non_trading(sentiment)
    smoothed = marketcorr.rolling_mean(raw, cfg.window)
    write_series_csv(raw, out / "sentiment_raw.csv", "sentiment")
    write_series_csv(smoothed, out / "sentiment_smoothed.csv", "sentiment")
    outputs = ["correlations.csv", "sentiment_raw.csv", "sentiment_smoothed.csv"]
    for name in market:
        fname = f"market_{name}.csv"
        write_series_csv(market[name], out / fname, name)
        outputs.append(fname)
    write_manifest(out, "correlate", cfg, inputs, outputs)
    for row in rows:
        print(f"{row.pair}: r={row.r:+.3f} (n={row.n_days})")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finsent",
        description="Financial-news sentiment pipeline: stats, agreement, training, "
        "prediction, evaluation, and market correlation.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="TOML config file; flags override it")
        p.add_argument("--out-dir", dest="out_dir", help="output directory")
        p.add_argument("--seed", type=int, help="seed for all randomness")
        p.add_argument("--threads", type=int, help="max worker parallelism (default 1)")
        p.add_argument("--stopwords", help="stopword file (default: bundled list)")
        p.add_argument("--timezone", help="timezone for article dates (default US/Eastern)")

    p = sub.add_parser("stats", help="corpus statistics report")
    common(p)
    p.add_argument("--articles", help="article JSONL file")

    p = sub.add_parser("freq", help="daily query-word frequency timeseries")
    common(p)
    p.add_argument("--articles", help="article JSONL file")
    p.add_argument("--terms", help="comma-separated query terms")
    p.add_argument("--substring", action="store_true", help="substring instead of exact token match")

    p = sub.add_parser("agreement", help="inter-annotator agreement report")
    common(p)
    p.add_argument("--labels", help="label CSV (article_id,annotator,label)")

    p = sub.add_parser("train", help="train the CNN classifier")
    common(p)
    p.add_argument("--articles", help="article JSONL file")
    p.add_argument("--labels", help="label CSV")
    p.add_argument("--embeddings", help="word-vector text file")
    p.add_argument("--lexicon", help="valence lexicon TSV")
    p.add_argument("--no-lexicon-channel", action="store_true",
                   help="drop the per-token valence feature channel")
    p.add_argument("--preset", help="preprocessing preset M1..M5")
    p.add_argument("--embedding-dim", dest="embedding_dim", type=int,
                   help="expected vector length (default: inferred from the file)")
    p.add_argument("--max-len", dest="max_len", type=int, help="sequence length")
    p.add_argument("--epochs", type=int)
    p.add_argument("--test-fraction", dest="test_fraction", type=float)
    p.add_argument("--exclude-annotator", action="append", help="repeatable")

    p = sub.add_parser("predict", help="predict with a trained checkpoint")
    common(p)
    p.add_argument("--articles", help="article JSONL file")
    p.add_argument("--embeddings", help="word-vector text file")
    p.add_argument("--lexicon", help="valence lexicon TSV")
    p.add_argument("--no-lexicon-channel", action="store_true")
    p.add_argument("--preset", help="preprocessing preset M1..M5")
    p.add_argument("--checkpoint", required=True, help="checkpoint written by train")

    p = sub.add_parser("eval", help="score predictions against gold labels")
    common(p)
    p.add_argument("--labels", help="gold label CSV")
    p.add_argument("--predictions", required=True, help="predictions CSV from predict")
    p.add_argument("--exclude-annotator", action="append")

    p = sub.add_parser("correlate", help="correlate sentiment with market series")
    common(p)
    p.add_argument("--articles", help="article JSONL file")
    p.add_argument("--predictions", required=True, help="predictions CSV from predict")
    p.add_argument("--market", action="append", help="NAME=PATH[:FIELD], repeatable")
    p.add_argument("--market-pair", action="append", help="A,B market-vs-market pair, repeatable")
    p.add_argument("--window", type=int, help="smoothing window in trading days")
    p.add_argument("--tickers", help="comma-separated symbols: restrict to the tagged sub-corpus")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.subcommand == "stats":
            return cmd_stats(cfg)
        if args.subcommand == "freq":
            return cmd_freq(cfg)
        if args.subcommand == "agreement":
            return cmd_agreement(cfg)
        if args.subcommand == "train":
            return cmd_train(cfg)
        if args.subcommand == "predict":
            return cmd_predict(cfg, args.checkpoint)
        if args.subcommand == "eval":
            return cmd_eval(cfg, args.predictions)
        if args.subcommand == "correlate":
            return cmd_correlate(cfg, args.predictions, args.tickers)
        parser.error(f"unknown subcommand {args.subcommand!r}")
    except FinsentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
