from .classifiers import (BLDA, ELM, ClassifierModel, LinearSVM, StepwiseLDA, predict_scores,
                          train, train_blda, train_elm, train_steplda,
                          train_svm, zscore_fit_apply)
from .metrics import auc, confusion_metrics
from .report import EvalReport
from .retrieval import average_precision, euclidean_rank, precision_at_k, retrieval_eval
from .validation import (confidence_sweep, cv_classify, cv_classify_features, dataset_features,
                         kfold_split)

__all__ = [
    "BLDA", "ELM", "ClassifierModel", "EvalReport", "LinearSVM", "StepwiseLDA", "auc",
    "average_precision", "confidence_sweep", "confusion_metrics", "cv_classify",
    "cv_classify_features", "dataset_features", "euclidean_rank", "kfold_split",
    "precision_at_k", "predict_scores", "retrieval_eval", "train",
    "train_blda", "train_elm", "train_steplda", "train_svm", "zscore_fit_apply",
]
