"""Financial-news sentiment classification and market correlation toolkit."""

from .corpus import (
    Article,
    GoldLabel,
    PipelineConfig,
    PRESETS,
    Sentiment,
    TokenizedDoc,
    load_articles,
    load_labels,
    preprocess,
    corpus_stats,
    query_frequency,
    threshold_continuous,
)
from .embeddings import EmbeddingTable, EmbeddedDoc, load_embedding_table, embed_tokens
from .lexicon import Lexicon, load_lexicon, score_tokens, vadermax_predict
from .annotation import AnnotationSet, cohens_kappa, kappa_matrix, agreement_band, assemble_gold
from .evaluation import ConfusionMatrix, confusion, f1_report, off_by_one
from .model import CnnConfig, CnnParams, TrainReport, init_params, forward, train, predict
from .marketcorr import (
    MarketBar,
    load_market_csv,
    daily_sentiment,
    rolling_mean,
    drop_non_trading,
    pearson_r,
    correlation_report,
    filter_by_tickers,
)
from .series import DailySeries

__version__ = "0.1.0"
