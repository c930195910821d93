"""Linear max-margin classification with leave-one-out evaluation.

The classifier is a soft-margin linear SVM trained in the primal with an
epoch-shuffled subgradient scheme (Pegasos-style 1/(lambda*t) steps), so no
external solver is needed.  Multi-class is one-vs-rest with argmax decision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ClassTooSmallError, SingleClassError, SpaceMismatchError
from .features import FeatureVector


@dataclass(frozen=True)
class LinearModel:
    space_id: str
    classes: tuple
    weights: np.ndarray  # (n_classes, dim)
    biases: np.ndarray  # (n_classes,)
    C: float
    epochs: int
    seed: int
    standardize_mean: np.ndarray | None = None
    standardize_scale: np.ndarray | None = None


@dataclass(frozen=True)
class EvalReport:
    space_id: str
    target: str
    classes: tuple
    accuracy: float
    confusion: np.ndarray  # confusion[true][pred]
    per_class_precision: tuple[float, ...]
    per_class_recall: tuple[float, ...]
    predictions: tuple  # (doc_id, true, predicted) per fold


def _train_binary(
    X: np.ndarray, y: np.ndarray, C: float, epochs: int, seed: int
) -> tuple[np.ndarray, float]:
    """Pegasos subgradient descent on the hinge loss, targets in {-1, +1}.

    Minimizes lam/2 ||w||^2 + (1/n) sum hinge(y_i w.x'_i), lam = 1/(C*n),
    where x' carries an appended constant-1 coordinate so the bias is part of
    the (regularized) weight vector.  Step 1/(lam*t) with the standard norm
    projection onto the 1/sqrt(lam) ball.  The returned solution is the
    average of the iterates from the second half of training, which removes
    most of the last-iterate noise of plain Pegasos.
    """
    n, dim = X.shape
    lam = 1.0 / (C * n)
    rng = np.random.default_rng(seed)
    Xa = np.hstack([X, np.ones((n, 1))])
    w = np.zeros(dim + 1)
    radius = 1.0 / np.sqrt(lam)
    total = epochs * n
    tail_start = total // 2
    w_sum = np.zeros(dim + 1)
    tail_count = 0
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = y[i] * (w @ Xa[i])
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * y[i] * Xa[i]
            norm = np.linalg.norm(w)
            if norm > radius:
                w *= radius / norm
            if t > tail_start:
                w_sum += w
                tail_count += 1
    w = w_sum / tail_count
    return w[:-1], float(w[-1])


def hinge_objective(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, C: float
) -> float:
    """Regularized hinge loss: lam/2 ||w||^2 + mean hinge, lam = 1/(C n)."""
    lam = 1.0 / (C * len(y))
    margins = y * (X @ w + b)
    return 0.5 * lam * float(w @ w) + float(np.maximum(0.0, 1.0 - margins).mean())


def train_linear_svm(
    vectors: list[FeatureVector],
    labels: list,
    C: float = 1.0,
    epochs: int = 100,
    seed: int = 0,
    standardize: bool = False,
) -> LinearModel:
    """One-vs-rest linear SVM over a shared feature space.

    Deterministic given the seed; class order follows sorted label order and
    breaks prediction ties.
    """
    if len(vectors) != len(labels):
        raise ValueError("vectors and labels must align")
    space = vectors[0].space_id
    for v in vectors[1:]:
        if v.space_id != space:
            raise SpaceMismatchError(f"mixed spaces: {space!r} vs {v.space_id!r}")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise SingleClassError("training data contains a single class")
    X = np.array([v.values for v in vectors], dtype=float)
    mean = scale = None
    if standardize:
        mean = X.mean(axis=0)
        scale = X.std(axis=0, ddof=0)
        scale = np.where(scale == 0, 1.0, scale)
        X = (X - mean) / scale
    weights = np.zeros((len(classes), X.shape[1]))
    biases = np.zeros(len(classes))
    for k, cls in enumerate(classes):
        y = np.where(np.array(labels, dtype=object) == cls, 1.0, -1.0)
        weights[k], biases[k] = _train_binary(X, y, C, epochs, seed)
    return LinearModel(
        space_id=space,
        classes=classes,
        weights=weights,
        biases=biases,
        C=C,
        epochs=epochs,
        seed=seed,
        standardize_mean=mean,
        standardize_scale=scale,
    )


def decision_scores(model: LinearModel, v: FeatureVector) -> np.ndarray:
    if v.space_id != model.space_id:
        raise SpaceMismatchError(
            f"vector space {v.space_id!r} != model space {model.space_id!r}"
        )
    x = np.asarray(v.values, dtype=float)
    if model.standardize_mean is not None:
        x = (x - model.standardize_mean) / model.standardize_scale
    return model.weights @ x + model.biases


def predict(model: LinearModel, v: FeatureVector):
    """Argmax over class scores; ties go to the first class in class order."""
    scores = decision_scores(model, v)
    return model.classes[int(np.argmax(scores))]


def loo_evaluate(
    vectors: list[FeatureVector],
    labels: list,
    target: str = "period",
    C: float = 1.0,
    epochs: int = 100,
    seed: int = 0,
    standardize: bool = False,
) -> EvalReport:
    """Leave-one-out evaluation: each document is predicted by a model
    trained on all the others."""
    if len(vectors) < 3:
        raise ClassTooSmallError("need at least 3 documents for leave-one-out")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise SingleClassError("evaluation data contains a single class")
    counts = {c: labels.count(c) for c in classes}
    small = [c for c, n in counts.items() if n < 2]
    if small:
        raise ClassTooSmallError(f"classes with fewer than 2 members: {small}")

    cls_index = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=int)
    predictions = []
    for i in range(len(vectors)):
        train_vecs = vectors[:i] + vectors[i + 1 :]
        train_labels = labels[:i] + labels[i + 1 :]
        model = train_linear_svm(
            train_vecs, train_labels, C=C, epochs=epochs, seed=seed,
            standardize=standardize,
        )
        pred = predict(model, vectors[i])
        confusion[cls_index[labels[i]], cls_index[pred]] += 1
        predictions.append((vectors[i].doc_id, labels[i], pred))

    total = confusion.sum()
    accuracy = float(np.trace(confusion)) / total
    col = confusion.sum(axis=0)
    row = confusion.sum(axis=1)
    precision = tuple(
        float(confusion[k, k]) / col[k] if col[k] else 0.0 for k in range(len(classes))
    )
    recall = tuple(
        float(confusion[k, k]) / row[k] if row[k] else 0.0 for k in range(len(classes))
    )
    return EvalReport(
        space_id=vectors[0].space_id,
        target=target,
        classes=classes,
        accuracy=accuracy,
        confusion=confusion,
        per_class_precision=precision,
        per_class_recall=recall,
        predictions=tuple(predictions),
    )


def report_json(report: EvalReport) -> str:
    payload = {
        "space_id": report.space_id,
        "target": report.target,
        "classes": [str(c) for c in report.classes],
        "accuracy": report.accuracy,
        "per_class_precision": list(report.per_class_precision),
        "per_class_recall": list(report.per_class_recall),
        "confusion": report.confusion.tolist(),
    }
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def write_fold_predictions(path: str | Path, report: EvalReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("doc_id,true,predicted\n")
        for doc_id, true, pred in report.predictions:
            fh.write(f"{doc_id},{true},{pred}\n")
