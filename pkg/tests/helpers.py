"""Builders shared across test modules."""

from __future__ import annotations

import datetime as dt

import numpy as np

from finsent import embeddings, model
from finsent.corpus import Article, Sentiment

FIXTURE_CUES = {
    Sentiment.POSITIVE: ["soars"],
    Sentiment.NEGATIVE: ["craters"],
    Sentiment.NEUTRAL: [],
}


def make_article(
    article_id: str,
    title: str,
    description: str = "",
    when: str = "2020-03-02T12:00:00Z",
    tickers: tuple[str, ...] = (),
    publisher: str = "Newswire",
) -> Article:
    return Article(
        id=article_id,
        title=title,
        description=description,
        publisher=publisher,
        published_at=dt.datetime.fromisoformat(when.replace("Z", "+00:00")),
        tickers=tickers,
    )


def random_table(dim: int = 16, n_tokens: int = 40, seed: int = 42) -> embeddings.EmbeddingTable:
    """Random filler vectors plus distinct random vectors for the cue tokens.

    Full-dimension random cue vectors give an aligned conv filter a far
    larger margin over filler noise than any single-coordinate spike would.
    """
    rng = np.random.default_rng(seed)
    vectors = {f"w{i}": rng.normal(size=dim).astype(np.float32) for i in range(n_tokens)}
    for cues in FIXTURE_CUES.values():
        for cue in cues:
            vectors[cue] = rng.normal(size=dim).astype(np.float32)
    return embeddings.EmbeddingTable(dim=dim, vectors=vectors)


def separable_corpus(
    n_per_class: int,
    table: embeddings.EmbeddingTable,
    max_len: int = 12,
    seed: int = 42,
) -> tuple[list[embeddings.EmbeddedDoc], list[Sentiment]]:
    """Docs with planted per-class cue tokens plus random filler."""
    rng = np.random.default_rng(seed)
    n_filler = sum(1 for t in table.vectors if t.startswith("w"))
    docs, labels = [], []
    for cls in (Sentiment.NEGATIVE, Sentiment.NEUTRAL, Sentiment.POSITIVE):
        for _ in range(n_per_class):
            tokens = [f"w{rng.integers(n_filler)}" for _ in range(8)]
            if FIXTURE_CUES[cls]:
                tokens.append(str(rng.choice(FIXTURE_CUES[cls])))
            rng.shuffle(tokens)
            docs.append(embeddings.embed_tokens(table, tokens, max_len))
            labels.append(cls)
    return docs, labels


def perturbed_params(cfg: model.CnnConfig, scale: float = 0.3, seed: int = 11) -> model.CnnParams:
    """Init params then shift every tensor off the zero-bias ReLU kinks.

    Gradient checks need a generic point: exact zeros in pre-activations make
    central differences straddle the kink and disagree with the subgradient.
    """
    params = model.init_params(cfg)
    rng = np.random.default_rng(seed)
    for _, tensor in params.named_tensors():
        tensor += rng.normal(scale=scale, size=tensor.shape)
    return params


def finite_difference_grads(
    params: model.CnnParams, x: np.ndarray, y: np.ndarray, eps: float = 1e-4
) -> dict[str, np.ndarray]:
    """Central-difference loss gradients, the oracle for the analytic pass."""
    out: dict[str, np.ndarray] = {}
    for name, tensor in params.named_tensors():
        grad = np.zeros_like(tensor)
        for idx in np.ndindex(tensor.shape):
            original = tensor[idx]
            tensor[idx] = original + eps
            loss_plus, _ = model.loss_and_grad(params, x, y)
            tensor[idx] = original - eps
            loss_minus, _ = model.loss_and_grad(params, x, y)
            tensor[idx] = original
            grad[idx] = (loss_plus - loss_minus) / (2 * eps)
        out[name] = grad
    return out


def max_relative_grad_error(
    params: model.CnnParams, x: np.ndarray, y: np.ndarray, eps: float = 1e-4
) -> float:
    _, analytic = model.loss_and_grad(params, x, y)
    numeric = finite_difference_grads(params, x, y, eps)
    analytic_map = dict(analytic.named_tensors())
    worst = 0.0
    for name, num in numeric.items():
        ana = analytic_map[name]
        rel = np.abs(num - ana) / np.maximum(np.abs(num) + np.abs(ana), 1e-8)
        worst = max(worst, float(rel.max()))
    return worst
