"""Pretrained word-vector loading, synthetic COVID vectors, and doc embedding.

Vector files are whitespace-delimited text (``token v1 ... vN``), one entry
per line, optionally preceded by a ``count dim`` header line which is
detected and skipped. Vectors are stored as float32. Unknown tokens and
padding both map to the zero vector.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ValidationError

log = logging.getLogger(__name__)

# Tokens the news-trained vector files predate; see add_synthetic_covid_embeddings.
DEFAULT_COVID_TOKENS = ("coronavirus", "covid19", "2019ncov", "covid", "sarscov2")
DEFAULT_COVID_FILL = -5.99
DEFAULT_MAX_LEN = 40  # mean title ~9 words + 25-word description + margin


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]
    synthetic_tokens: frozenset[str] = frozenset()

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def lookup(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)


def load_embedding_table(path: str | Path, expected_dim: int | None = 300) -> EmbeddingTable:
    """Load a text-format vector file (Word2Vec/GloVe text layout).

    Any line whose vector length differs from ``expected_dim`` raises, naming
    the offending token. ``expected_dim=None`` infers the dimension from the
    header line when present, otherwise from the first entry. Duplicate
    tokens keep the last value with a warning.
    """
    path = Path(path)
    dim = expected_dim
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(_is_int(p) for p in parts):
                if dim is None:
                    dim = int(parts[1])
                continue  # word2vec-style "count dim" header
            token, values = parts[0], parts[1:]
            if dim is None:
                dim = len(values)
            if len(values) != dim:
                raise ParseError(
                    f"token {token!r} has {len(values)} values, expected {dim}",
                    str(path),
                    lineno,
                )
            try:
                vec = np.asarray([float(v) for v in values], dtype=np.float32)
            except ValueError as exc:
                raise ParseError(f"token {token!r}: {exc}", str(path), lineno) from exc
            if token in vectors:
                log.warning("%s:%d: duplicate token %r, keeping last value", path, lineno, token)
            vectors[token] = vec
    if dim is None:
        raise ParseError("cannot infer vector dimension from an empty file", str(path))
    return EmbeddingTable(dim=dim, vectors=vectors)


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


def add_synthetic_covid_embeddings(
    table: EmbeddingTable,
    tokens: Iterable[str] = DEFAULT_COVID_TOKENS,
    fill_value: float = DEFAULT_COVID_FILL,
) -> EmbeddingTable:
    """Return a new table with each token mapped to a constant-fill vector."""
    vectors = dict(table.vectors)
    synthetic = set(table.synthetic_tokens)
    for token in tokens:
        if token in vectors:
            log.warning("overwriting existing vector for synthetic token %r", token)
        vectors[token] = np.full(table.dim, fill_value, dtype=np.float32)
        synthetic.add(token)
    return EmbeddingTable(dim=table.dim, vectors=vectors, synthetic_tokens=frozenset(synthetic))


@dataclass(frozen=True)
class EmbeddedDoc:
    """Fixed-shape embedding of one token sequence.

    ``matrix`` is (max_len, feature_dim); ``mask`` is True where a position
    holds a known-token embedding. ``missing_fraction`` is the share of
    non-pad positions whose token was absent from the table.
    """

    matrix: np.ndarray
    mask: np.ndarray = field(repr=False)
    missing_fraction: float


def embed_tokens(
    table: EmbeddingTable,
    tokens: Sequence[str],
    max_len: int = DEFAULT_MAX_LEN,
    pad_policy: str = "post",
    token_scores: Sequence[float] | None = None,
) -> EmbeddedDoc:
    """Embed the first ``max_len`` tokens row-wise into a fixed-shape matrix.

    Unknown tokens and padding are zero rows. ``token_scores``, when given,
    must align with ``tokens`` and is appended as one extra feature column
    (the per-token lexicon channel), zero at pad positions.
    """
    if max_len < 1:
        raise ValidationError(f"max_len must be >= 1, got {max_len}")
    if pad_policy not in ("post", "pre"):
        raise ValidationError(f"pad_policy must be 'post' or 'pre', got {pad_policy!r}")
    if token_scores is not None and len(token_scores) != len(tokens):
        raise ValidationError("token_scores must align one-to-one with tokens")

    kept = list(tokens[:max_len])
    scores = None if token_scores is None else list(token_scores[:max_len])
    feature_dim = table.dim + (1 if scores is not None else 0)
    matrix = np.zeros((max_len, feature_dim), dtype=np.float32)
    mask = np.zeros(max_len, dtype=bool)

    offset = max_len - len(kept) if pad_policy == "pre" else 0
    unknown = 0
    for i, token in enumerate(kept):
        vec = table.lookup(token)
        if vec is None:
            unknown += 1
        else:
            matrix[offset + i, : table.dim] = vec
            mask[offset + i] = True
        if scores is not None:
            matrix[offset + i, table.dim] = scores[i]

    missing = unknown / len(kept) if kept else 0.0
    return EmbeddedDoc(matrix=matrix, mask=mask, missing_fraction=missing)


def embed_docs(
    table: EmbeddingTable,
    token_docs: Iterable[Sequence[str]],
    max_len: int = DEFAULT_MAX_LEN,
    pad_policy: str = "post",
    score_fn=None,
) -> list[EmbeddedDoc]:
    """Embed many docs; ``score_fn(tokens) -> scores`` adds the lexicon channel."""
    docs = []
    for tokens in token_docs:
        scores = None if score_fn is None else score_fn(tokens)
        docs.append(embed_tokens(table, tokens, max_len, pad_policy, scores))
    return docs


@dataclass(frozen=True)
class CoverageReport:
    missing_percent: float
    missing_tokens: tuple[tuple[str, int], ...]  # (token, corpus frequency), ranked


def coverage_report(table: EmbeddingTable, corpus_tokens: Iterable[str]) -> CoverageReport:
    """Percentage of unique corpus tokens absent from the table.

    ``corpus_tokens`` is the full token stream (duplicates included) so that
    missing tokens can be ranked by frequency; ties rank alphabetically.
    """
    counts = Counter(corpus_tokens)
    if not counts:
        raise ValidationError("coverage_report requires a non-empty corpus")
    missing = {t: c for t, c in counts.items() if t not in table.vectors}
    ranked = sorted(missing.items(), key=lambda kv: (-kv[1], kv[0]))
    return CoverageReport(
        missing_percent=100.0 * len(missing) / len(counts),
        missing_tokens=tuple(ranked),
    )
