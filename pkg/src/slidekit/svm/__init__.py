"""Soft-margin RBF SVM trained by SMO, used as the embedding post-classifier."""

from .head import fit_head, head_decision, head_predict, head_probability
from .kernel import rbf_kernel, rbf_kernel_matrix, resolve_gamma
from .serialize import load_svm, save_svm
from .smo import (
    SvmConfig,
    SvmModel,
    decision,
    decision_batch,
    dual_objective,
    fit_smo,
    model_dual_objective,
    predict,
)

__all__ = [
    "SvmConfig",
    "SvmModel",
    "decision",
    "decision_batch",
    "dual_objective",
    "fit_head",
    "fit_smo",
    "head_decision",
    "head_predict",
    "head_probability",
    "load_svm",
    "model_dual_objective",
    "predict",
    "rbf_kernel",
    "rbf_kernel_matrix",
    "resolve_gamma",
    "save_svm",
]
