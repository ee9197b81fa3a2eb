"""
Evaluation statistics: score tables, Spearman correlation, accuracy, and the
cross-manipulation train/test matrix.
"""

from incoherify.evaluation import heatmap, matrix, scores
from incoherify.evaluation.heatmap import render_heatmap
from incoherify.evaluation.matrix import (
    check_balance,
    cross_manipulation_matrix,
    read_matrix,
    write_matrix,
)
from incoherify.evaluation.scores import (
    Aspect,
    Benchmark,
    ScoreRow,
    ScoreTable,
    accuracy,
    aggregate_annotations,
    attach_annotations,
    correlation_report,
    read_annotations,
    read_model_scores,
    read_score_table,
    spearman,
    write_model_scores,
    write_score_table,
)
