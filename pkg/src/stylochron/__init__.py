"""stylochron: corpus stylometry toolkit.

Function-word stylome extraction, rank-distance hierarchical clustering,
PCA visualization data, leave-one-out linear classification, LDA topic
features and temporal style-drift significance scanning over any labeled
plain-text corpus.
"""

__version__ = "0.1.0"

from .corpus import Corpus, Document, group_documents, load_corpus, tokenize
from .features import (
    FeatureVector,
    FunctionWordList,
    StylisticMetrics,
    build_content_vocab,
    content_word_vector,
    default_function_words,
    function_word_vector,
    stylistic_metrics,
)
from .metricspace import DistanceMatrix, RankVector, distance_matrix, rank_distance, rank_transform
from .analysis import Dendrogram, Projection, cut_clusters, hierarchical_cluster, pca_project
from .classify import EvalReport, LinearModel, loo_evaluate, predict, train_linear_svm
from .topics import TopicFeatures, TopicModel, fit_lda, topic_features
from .temporal import (
    DriftReport,
    YearSeries,
    moving_average,
    permutation_test,
    split_scan,
    welch_t_test,
    yearly_series,
)

__all__ = [
    "Corpus",
    "Document",
    "group_documents",
    "load_corpus",
    "tokenize",
    "FeatureVector",
    "FunctionWordList",
    "StylisticMetrics",
    "build_content_vocab",
    "content_word_vector",
    "default_function_words",
    "function_word_vector",
    "stylistic_metrics",
    "DistanceMatrix",
    "RankVector",
    "distance_matrix",
    "rank_distance",
    "rank_transform",
    "Dendrogram",
    "Projection",
    "cut_clusters",
    "hierarchical_cluster",
    "pca_project",
    "EvalReport",
    "LinearModel",
    "loo_evaluate",
    "predict",
    "train_linear_svm",
    "TopicFeatures",
    "TopicModel",
    "fit_lda",
    "topic_features",
    "DriftReport",
    "YearSeries",
    "moving_average",
    "permutation_test",
    "split_scan",
    "welch_t_test",
    "yearly_series",
]
