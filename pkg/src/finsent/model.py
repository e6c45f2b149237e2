"""From-scratch convolutional sentiment classifier.

The network is: per filter width, a 1-D convolution over the sequence axis,
ReLU, global max pool; the pooled features are concatenated, then dropout,
dense+ReLU, dropout, dense, softmax. Everything (forward, backward, the
adaptive-moment optimizer) is implemented directly on numpy arrays so the
gradients can be verified against finite differences.

Computation runs in float64 for gradient fidelity; checkpoints store tensors
as float32 (see ``save_checkpoint`` for the container layout).

Class indices are 0=negative, 1=neutral, 2=positive (``Sentiment`` value
plus one). Argmax ties break to the lowest index, i.e. toward negative.
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .corpus import Sentiment
from .embeddings import EmbeddedDoc
from .errors import ParseError, ValidationError
from . import evaluation

EvalFn = Callable[[np.ndarray, np.ndarray], tuple[float, float]]

_CHECKPOINT_MAGIC = b"FSNCKPT1"


@dataclass(frozen=True)
class CnnConfig:
    feature_dim: int = 300
    max_len: int = 40
    filter_widths: tuple[int, ...] = (3, 4, 5)
    filters_per_width: int = 128
    hidden_size: int = 256
    dropout: tuple[float, float] = (0.5, 0.5)
    classes: int = 3
    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 100
    seed: int = 0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self) -> None:
        if self.feature_dim < 1 or self.max_len < 1 or self.hidden_size < 1:
            raise ValidationError("feature_dim, max_len, and hidden_size must be >= 1")
        if not self.filter_widths or any(w < 1 for w in self.filter_widths):
            raise ValidationError("filter widths must be a non-empty list of integers >= 1")
        if max(self.filter_widths) > self.max_len:
            raise ValidationError(
                f"largest filter width {max(self.filter_widths)} exceeds max_len {self.max_len}"
            )
        if self.filters_per_width < 1:
            raise ValidationError("filters_per_width must be >= 1")
        if len(self.dropout) != 2 or any(not 0.0 <= p < 1.0 for p in self.dropout):
            raise ValidationError("dropout must be two rates in [0, 1)")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be >= 1")
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")

    @property
    def total_filters(self) -> int:
        return self.filters_per_width * len(self.filter_widths)


@dataclass
class CnnParams:
    """All trainable tensors, keyed by filter width where applicable."""

    conv_kernels: dict[int, np.ndarray]  # width -> (width, feature_dim, filters)
    conv_biases: dict[int, np.ndarray]  # width -> (filters,)
    dense1_weight: np.ndarray  # (total_filters, hidden)
    dense1_bias: np.ndarray  # (hidden,)
    dense2_weight: np.ndarray  # (hidden, classes)
    dense2_bias: np.ndarray  # (classes,)

    def named_tensors(self) -> list[tuple[str, np.ndarray]]:
        """Fixed iteration order used by the optimizer and checkpoints."""
        out: list[tuple[str, np.ndarray]] = []
        for w in sorted(self.conv_kernels):
            out.append((f"conv{w}.kernel", self.conv_kernels[w]))
            out.append((f"conv{w}.bias", self.conv_biases[w]))
        out.append(("dense1.weight", self.dense1_weight))
        out.append(("dense1.bias", self.dense1_bias))
        out.append(("dense2.weight", self.dense2_weight))
        out.append(("dense2.bias", self.dense2_bias))
        return out

    def copy(self) -> CnnParams:
        return CnnParams(
            conv_kernels={w: k.copy() for w, k in self.conv_kernels.items()},
            conv_biases={w: b.copy() for w, b in self.conv_biases.items()},
            dense1_weight=self.dense1_weight.copy(),
            dense1_bias=self.dense1_bias.copy(),
            dense2_weight=self.dense2_weight.copy(),
            dense2_bias=self.dense2_bias.copy(),
        )

    def all_finite(self) -> bool:
        return all(np.isfinite(t).all() for _, t in self.named_tensors())


def _glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_params(cfg: CnnConfig, seed: int | None = None) -> CnnParams:
    """Scaled-uniform (Glorot) weight init, zero biases, deterministic per seed.

    Fan-in counts receptive field times input channels; fan-out receptive
    field times output channels.
    """
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    kernels: dict[int, np.ndarray] = {}
    biases: dict[int, np.ndarray] = {}
    for w in sorted(cfg.filter_widths):
        kernels[w] = _glorot_uniform(
            rng,
            (w, cfg.feature_dim, cfg.filters_per_width),
            fan_in=w * cfg.feature_dim,
            fan_out=w * cfg.filters_per_width,
        )
        biases[w] = np.zeros(cfg.filters_per_width)
    dense1_w = _glorot_uniform(
        rng, (cfg.total_filters, cfg.hidden_size), cfg.total_filters, cfg.hidden_size
    )
    dense2_w = _glorot_uniform(rng, (cfg.hidden_size, cfg.classes), cfg.hidden_size, cfg.classes)
    return CnnParams(
        conv_kernels=kernels,
        conv_biases=biases,
        dense1_weight=dense1_w,
        dense1_bias=np.zeros(cfg.hidden_size),
        dense2_weight=dense2_w,
        dense2_bias=np.zeros(cfg.classes),
    )


# ---------------------------------------------------------------------------
# Forward / backward

def stack_docs(docs: Sequence[EmbeddedDoc] | np.ndarray) -> np.ndarray:
    """Stack embedded docs into a (batch, max_len, feature_dim) float64 array."""
    if isinstance(docs, np.ndarray):
        x = docs
    else:
        x = np.stack([d.matrix for d in docs])
    if x.ndim != 3:
        raise ValidationError(f"expected a 3-D batch, got shape {x.shape}")
    return np.ascontiguousarray(x, dtype=np.float64)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _make_dropout_masks(
    cfg: CnnConfig, batch_size: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # Inverted dropout: surviving units are scaled by 1/keep at train time.
    p1, p2 = cfg.dropout
    mask1 = (rng.random((batch_size, cfg.total_filters)) >= p1) / (1.0 - p1)
    mask2 = (rng.random((batch_size, cfg.hidden_size)) >= p2) / (1.0 - p2)
    return mask1, mask2


class _ForwardCache:
    """Intermediate activations kept for the backward pass."""

    __slots__ = ("x", "windows", "pre_relu", "post_pool_idx", "pooled", "mask1",
                 "hidden_pre", "hidden_post", "mask2", "probs")

    def __init__(self) -> None:
        self.windows: dict[int, np.ndarray] = {}
        self.pre_relu: dict[int, np.ndarray] = {}
        self.post_pool_idx: dict[int, np.ndarray] = {}


def _forward(
    params: CnnParams,
    x: np.ndarray,
    masks: tuple[np.ndarray, np.ndarray] | None = None,
) -> _ForwardCache:
    cache = _ForwardCache()
    cache.x = x
    batch = x.shape[0]
    pooled_parts = []
    for w in sorted(params.conv_kernels):
        kernel = params.conv_kernels[w]
        if w > x.shape[1] or kernel.shape[1] != x.shape[2]:
            raise ValidationError(
                f"input shape {x.shape} incompatible with width-{w} kernel {kernel.shape}"
            )
        # (B, T, D, w) -> (B*T, w*D) so the convolution is a single GEMM.
        win = sliding_window_view(x, w, axis=1)
        t_steps = win.shape[1]
        flat = np.ascontiguousarray(win.transpose(0, 1, 3, 2)).reshape(batch * t_steps, -1)
        z = (flat @ kernel.reshape(-1, kernel.shape[2])).reshape(batch, t_steps, -1)
        z += params.conv_biases[w]
        act = np.maximum(z, 0.0)
        idx = act.argmax(axis=1)  # first max wins: deterministic tie-break
        pooled_parts.append(np.take_along_axis(act, idx[:, None, :], axis=1)[:, 0, :])
        cache.windows[w] = flat
        cache.pre_relu[w] = z
        cache.post_pool_idx[w] = idx
    pooled = np.concatenate(pooled_parts, axis=1)
    cache.pooled = pooled

    mask1, mask2 = masks if masks is not None else (None, None)
    cache.mask1, cache.mask2 = mask1, mask2
    dropped = pooled if mask1 is None else pooled * mask1
    hidden_pre = dropped @ params.dense1_weight + params.dense1_bias
    hidden = np.maximum(hidden_pre, 0.0)
    cache.hidden_pre = hidden_pre
    hidden_dropped = hidden if mask2 is None else hidden * mask2
    cache.hidden_post = hidden_dropped
    logits = hidden_dropped @ params.dense2_weight + params.dense2_bias
    cache.probs = _softmax(logits)
    return cache


def forward(
    params: CnnParams,
    docs: Sequence[EmbeddedDoc] | np.ndarray,
    train_mode: bool = False,
    rng: np.random.Generator | None = None,
    cfg: CnnConfig | None = None,
) -> np.ndarray:
    """Class probabilities, shape (batch, classes); rows sum to 1.

    ``train_mode`` applies dropout and requires ``rng`` and ``cfg`` for the
    mask shapes and rates.
    """
    x = stack_docs(docs)
    masks = None
    if train_mode:
        if rng is None or cfg is None:
            raise ValidationError("train_mode forward requires rng and cfg for dropout")
        masks = _make_dropout_masks(cfg, x.shape[0], rng)
    return _forward(params, x, masks).probs


def _backward(
    params: CnnParams, cache: _ForwardCache, labels: np.ndarray
) -> tuple[float, CnnParams]:
    batch = cache.x.shape[0]
    probs = cache.probs
    loss = float(-np.mean(np.log(probs[np.arange(batch), labels])))

    dlogits = probs.copy()
    dlogits[np.arange(batch), labels] -= 1.0
    dlogits /= batch

    grad_w2 = cache.hidden_post.T @ dlogits
    grad_b2 = dlogits.sum(axis=0)
    dhidden = dlogits @ params.dense2_weight.T
    if cache.mask2 is not None:
        dhidden = dhidden * cache.mask2
    dhidden_pre = dhidden * (cache.hidden_pre > 0.0)

    dropped = cache.pooled if cache.mask1 is None else cache.pooled * cache.mask1
    grad_w1 = dropped.T @ dhidden_pre
    grad_b1 = dhidden_pre.sum(axis=0)
    dpooled = dhidden_pre @ params.dense1_weight.T
    if cache.mask1 is not None:
        dpooled = dpooled * cache.mask1

    grad_kernels: dict[int, np.ndarray] = {}
    grad_biases: dict[int, np.ndarray] = {}
    offset = 0
    for w in sorted(params.conv_kernels):
        kernel = params.conv_kernels[w]
        n_filters = kernel.shape[2]
        dpool_w = dpooled[:, offset : offset + n_filters]
        offset += n_filters
        z = cache.pre_relu[w]
        dact = np.zeros_like(z)
        np.put_along_axis(dact, cache.post_pool_idx[w][:, None, :], dpool_w[:, None, :], axis=1)
        dz = dact * (z > 0.0)
        flat_dz = dz.reshape(-1, n_filters)
        # windows were flattened (w, D) -> w*D with w outermost, matching kernel layout
        grad_kernels[w] = (cache.windows[w].T @ flat_dz).reshape(kernel.shape)
        grad_biases[w] = dz.sum(axis=(0, 1))

    grads = CnnParams(
        conv_kernels=grad_kernels,
        conv_biases=grad_biases,
        dense1_weight=grad_w1,
        dense1_bias=grad_b1,
        dense2_weight=grad_w2,
        dense2_bias=grad_b2,
    )
    return loss, grads


def loss_and_grad(
    params: CnnParams,
    docs: Sequence[EmbeddedDoc] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    train_mode: bool = False,
    rng: np.random.Generator | None = None,
    cfg: CnnConfig | None = None,
) -> tuple[float, CnnParams]:
    """Mean cross-entropy over the batch plus gradients for every tensor.

    ``labels`` are class indices in {0, 1, 2}. Dropout is off unless
    ``train_mode`` is set (gradient checks rely on the deterministic path).
    """
    x = stack_docs(docs)
    y = np.asarray(labels, dtype=np.int64)
    if y.ndim != 1 or y.shape[0] != x.shape[0]:
        raise ValidationError(f"labels shape {y.shape} does not match batch {x.shape[0]}")
    if y.size and (y.min() < 0 or y.max() > 2):
        raise ValidationError("labels must be class indices in {0, 1, 2}")
    masks = None
    if train_mode:
        if rng is None or cfg is None:
            raise ValidationError("train_mode requires rng and cfg for dropout")
        masks = _make_dropout_masks(cfg, x.shape[0], rng)
    cache = _forward(params, x, masks)
    return _backward(params, cache, y)


# ---------------------------------------------------------------------------
# Optimizer

@dataclass
class AdamState:
    step: int
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]

    @classmethod
    def create(cls, params: CnnParams) -> AdamState:
        return cls(
            step=0,
            m={name: np.zeros_like(t) for name, t in params.named_tensors()},
            v={name: np.zeros_like(t) for name, t in params.named_tensors()},
        )


def adam_step(params: CnnParams, grads: CnnParams, state: AdamState, cfg: CnnConfig) -> None:
    """One in-place adaptive-moment update over all tensors."""
    state.step += 1
    t = state.step
    b1, b2, eps, lr = cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, cfg.learning_rate
    grad_map = dict(grads.named_tensors())
    for name, tensor in params.named_tensors():
        g = grad_map[name]
        state.m[name] = b1 * state.m[name] + (1 - b1) * g
        state.v[name] = b2 * state.v[name] + (1 - b2) * g * g
        m_hat = state.m[name] / (1 - b1**t)
        v_hat = state.v[name] / (1 - b2**t)
        tensor -= lr * m_hat / (np.sqrt(v_hat) + eps)


# ---------------------------------------------------------------------------
# Training

@dataclass(frozen=True)
class Dataset:
    """Embedded inputs (N, max_len, feature_dim) with class-index targets."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        if self.x.ndim != 3 or self.y.ndim != 1 or self.x.shape[0] != self.y.shape[0]:
            raise ValidationError(
                f"inconsistent dataset shapes x={self.x.shape} y={self.y.shape}"
            )

    def __len__(self) -> int:
        return int(self.x.shape[0])

    @classmethod
    def from_docs(cls, docs: Sequence[EmbeddedDoc], labels: Sequence[Sentiment]) -> Dataset:
        if len(docs) != len(labels):
            raise ValidationError("one label per document required")
        return cls(
            x=stack_docs(docs),
            y=np.asarray([Sentiment(l).class_index for l in labels], dtype=np.int64),
        )


def train_test_split(
    data: Dataset, test_fraction: float = 0.15, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Seeded shuffle split; test gets ``round(n * test_fraction)`` examples."""
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n = len(data)
    n_test = int(round(n * test_fraction))
    if n_test == 0 or n_test == n:
        raise ValidationError(f"split of {n} examples at {test_fraction} leaves an empty side")
    order = np.random.default_rng(seed).permutation(n)
    test_idx, train_idx = order[:n_test], order[n_test:]
    return (
        Dataset(data.x[train_idx], data.y[train_idx]),
        Dataset(data.x[test_idx], data.y[test_idx]),
    )


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    test_macro_f1: float
    test_weighted_f1: float


@dataclass(frozen=True)
class TrainReport:
    """Per-epoch trace plus the max-over-epochs test scores.

    The maxima implement the evaluation protocol of reporting the best test
    F1 seen during training; the final epoch's scores are also exposed for
    a peek-free reading.
    """

    records: tuple[EpochRecord, ...]

    @property
    def max_macro_f1(self) -> float | None:
        return max((r.test_macro_f1 for r in self.records), default=None)

    @property
    def max_weighted_f1(self) -> float | None:
        return max((r.test_weighted_f1 for r in self.records), default=None)

    @property
    def best_macro_epoch(self) -> int | None:
        if not self.records:
            return None
        return max(self.records, key=lambda r: (r.test_macro_f1, -r.epoch)).epoch

    @property
    def best_weighted_epoch(self) -> int | None:
        if not self.records:
            return None
        return max(self.records, key=lambda r: (r.test_weighted_f1, -r.epoch)).epoch

    @property
    def final(self) -> EpochRecord | None:
        return self.records[-1] if self.records else None


def default_eval_fn(y_true: np.ndarray, y_pred: np.ndarray) -> tuple[float, float]:
    """(macro F1, weighted F1) over class-index arrays."""
    report = evaluation.f1_report(evaluation.confusion(y_true - 1, y_pred - 1))
    return report.macro_f1, report.weighted_f1


def predict_indices(params: CnnParams, x: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Argmax class indices with dropout off, evaluated in batches."""
    out = np.empty(x.shape[0], dtype=np.int64)
    for start in range(0, x.shape[0], batch_size):
        chunk = x[start : start + batch_size]
        probs = _forward(params, stack_docs(chunk)).probs
        out[start : start + chunk.shape[0]] = probs.argmax(axis=1)
    return out


def predict(params: CnnParams, docs: Sequence[EmbeddedDoc] | np.ndarray) -> list[Sentiment]:
    if not params.all_finite():
        raise ValidationError("model parameters contain non-finite values")
    x = stack_docs(docs)
    return [Sentiment.from_class_index(int(i)) for i in predict_indices(params, x)]


def allneutral_predict(n: int) -> list[Sentiment]:
    """The majority-class baseline: neutral for every instance."""
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    return [Sentiment.NEUTRAL] * n


def train(
    cfg: CnnConfig,
    train_set: Dataset,
    test_set: Dataset,
    eval_fn: EvalFn | None = None,
) -> tuple[CnnParams, TrainReport, AdamState]:
    """Mini-batch gradient descent with per-epoch test evaluation.

    All randomness (init, shuffling, dropout) flows from ``cfg.seed``, so a
    given (seed, data, config) triple reproduces the report bit for bit.
    Returns the final-epoch parameters, the report, and the optimizer state.
    """
    if len(train_set) == 0 or len(test_set) == 0:
        raise ValidationError("train and test sets must both be non-empty")
    if eval_fn is None:
        eval_fn = default_eval_fn

    params = init_params(cfg)
    state = AdamState.create(params)
    rng = np.random.default_rng(cfg.seed)
    n = len(train_set)

    records = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        loss_sum = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            loss, grads = loss_and_grad(
                params, train_set.x[idx], train_set.y[idx], train_mode=True, rng=rng, cfg=cfg
            )
            adam_step(params, grads, state, cfg)
            loss_sum += loss * len(idx)
        test_pred = predict_indices(params, test_set.x)
        macro, weighted = eval_fn(test_set.y, test_pred)
        records.append(
            EpochRecord(
                epoch=epoch,
                train_loss=loss_sum / n,
                test_macro_f1=macro,
                test_weighted_f1=weighted,
            )
        )
    return params, TrainReport(tuple(records)), state


def write_train_report_csv(report: TrainReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "train_loss", "test_macro_f1", "test_weighted_f1"])
        for r in report.records:
            writer.writerow(
                [r.epoch, f"{r.train_loss:.10g}", f"{r.test_macro_f1:.10g}",
                 f"{r.test_weighted_f1:.10g}"]
            )


# ---------------------------------------------------------------------------
# Checkpoints
#
# Container layout (all integers little-endian):
#   bytes 0-7    magic "FSNCKPT1"
#   bytes 8-11   uint32 header length H
#   bytes 12..   UTF-8 JSON header of length H:
#                  {"config": {...}, "seed": int,
#                   "tensors": [{"name": str, "shape": [int, ...]}, ...],
#                   "optimizer": {"step": int} | null}
#   remainder    for each entry in "tensors", in order: the tensor's values
#                as row-major float32. When an optimizer state is saved, the
#                tensor list includes "adam.m.<name>" and "adam.v.<name>"
#                entries after the parameters.

def save_checkpoint(
    path: str | Path,
    cfg: CnnConfig,
    params: CnnParams,
    state: AdamState | None = None,
    seed: int | None = None,
) -> None:
    tensors: list[tuple[str, np.ndarray]] = list(params.named_tensors())
    if state is not None:
        tensors += [(f"adam.m.{name}", state.m[name]) for name, _ in params.named_tensors()]
        tensors += [(f"adam.v.{name}", state.v[name]) for name, _ in params.named_tensors()]
    header = {
        "config": asdict(cfg),
        "seed": cfg.seed if seed is None else seed,
        "tensors": [{"name": name, "shape": list(t.shape)} for name, t in tensors],
        "optimizer": {"step": state.step} if state is not None else None,
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for _, tensor in tensors:
            fh.write(np.ascontiguousarray(tensor, dtype="<f4").tobytes())


def load_checkpoint(path: str | Path) -> tuple[CnnConfig, CnnParams, AdamState | None, int]:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != _CHECKPOINT_MAGIC:
            raise ParseError(f"bad checkpoint magic {magic!r}", str(path))
        (header_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        raw_cfg = dict(header["config"])
        raw_cfg["filter_widths"] = tuple(raw_cfg["filter_widths"])
        raw_cfg["dropout"] = tuple(raw_cfg["dropout"])
        cfg = CnnConfig(**raw_cfg)

        loaded: dict[str, np.ndarray] = {}
        for entry in header["tensors"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            data = fh.read(4 * count)
            if len(data) != 4 * count:
                raise ParseError(f"truncated tensor {entry['name']!r}", str(path))
            loaded[entry["name"]] = (
                np.frombuffer(data, dtype="<f4").astype(np.float64).reshape(shape)
            )

    def take(name: str) -> np.ndarray:
        try:
            return loaded[name]
        except KeyError:
            raise ParseError(f"checkpoint missing tensor {name!r}", str(path)) from None

    params = CnnParams(
        conv_kernels={w: take(f"conv{w}.kernel") for w in sorted(cfg.filter_widths)},
        conv_biases={w: take(f"conv{w}.bias") for w in sorted(cfg.filter_widths)},
        dense1_weight=take("dense1.weight"),
        dense1_bias=take("dense1.bias"),
        dense2_weight=take("dense2.weight"),
        dense2_bias=take("dense2.bias"),
    )
    state = None
    if header.get("optimizer"):
        names = [name for name, _ in params.named_tensors()]
        state = AdamState(
            step=int(header["optimizer"]["step"]),
            m={name: take(f"adam.m.{name}") for name in names},
            v={name: take(f"adam.v.{name}") for name in names},
        )
    return cfg, params, state, int(header["seed"])
