"""Desk-scale coherence evaluator: hashed AMR/text features and a logistic regression."""

from incoherify.proxy import features, model
from incoherify.proxy.features import (
    DEFAULT_DIM,
    FeatureVector,
    feature_strings,
    featurize,
    hash_feature,
)
from incoherify.proxy.model import (
    MAGIC,
    LinearModel,
    TrainingMeta,
    labels_of,
    load_model,
    loss_and_gradient,
    save_model,
    score,
    score_vector,
    train,
    train_vectors,
)
