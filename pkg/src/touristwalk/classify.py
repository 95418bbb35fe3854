"""
Linear discriminant analysis with stratified k-fold cross-validation.

Classes share one (ridge-regularised) within-class covariance; a sample
is assigned to the class with the largest linear discriminant
``x' P m_c - m_c' P m_c / 2 + log prior_c``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .image import DataError

RIDGE = 1e-4
DEFAULT_SEED = 42


@dataclass(frozen=True)
class LdaModel:
    class_means: np.ndarray  # (C, D)
    pooled_precision: np.ndarray  # (D, D)
    log_priors: np.ndarray  # (C,)

    @property
    def dimension(self) -> int:
        return self.class_means.shape[1]

    def discriminants(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dimension:
            raise ValueError(f"expected {self.dimension} features, got {X.shape[1]}")
        pm = self.class_means @ self.pooled_precision  # P symmetric
        bias = -0.5 * np.einsum("cd,cd->c", pm, self.class_means) + self.log_priors
        return X @ pm.T + bias


def fit_lda(X, y, ridge: float = RIDGE) -> LdaModel:
    """Fit class means, shared covariance and empirical priors.

    Labels must be dense integers ``0..C-1``. The pooled covariance is
    regularised as ``S + ridge * trace(S)/D * I`` so that rank-deficient
    feature sets (more dimensions than samples, constant features) still
    give a positive-definite matrix.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be (n, D) with one label per row")
    n, d = X.shape
    classes, counts = np.unique(y, return_counts=True)
    c = int(classes.max()) + 1 if classes.size else 0
    if classes.size < 2:
        raise DataError("LDA needs at least two classes")
    if not np.array_equal(classes, np.arange(c)):
        raise DataError("class labels must be dense integers 0..C-1")
    if counts.min() < 2:
        raise DataError(f"class {int(classes[counts.argmin()])} has fewer than 2 samples")
    if not np.all(np.isfinite(X)):
        raise DataError("features contain NaN or infinite values")

    means = np.zeros((c, d))
    scatter = np.zeros((d, d))
    for k in range(c):
        xk = X[y == k]
        means[k] = xk.mean(axis=0)
        centered = xk - means[k]
        scatter += centered.T @ centered
    cov = scatter / (n - c)
    cov = 0.5 * (cov + cov.T)
    scale = np.trace(cov) / d
    if scale <= 0:
        scale = 1.0
    cov[np.diag_indices(d)] += ridge * scale
    try:
        factor = linalg.cho_factor(cov, lower=True)
    except linalg.LinAlgError as exc:
        raise AssertionError(f"regularised covariance is not positive definite: {exc}") from exc
    precision = linalg.cho_solve(factor, np.eye(d))
    precision = 0.5 * (precision + precision.T)
    return LdaModel(means, precision, np.log(counts / n))


def predict(model: LdaModel, X) -> np.ndarray:
    """Class index per row; ties go to the lowest index."""
    return np.argmax(model.discriminants(X), axis=1)


def predict_one(model: LdaModel, x) -> int:
    return int(predict(model, x)[0])


# --------------------------------------------------------------------------
# cross-validation
# --------------------------------------------------------------------------

def stratified_folds(y, folds: int = 10, seed: int = DEFAULT_SEED, classes=None) -> np.ndarray:
    """Fold index per sample.

    Each class is shuffled with a seeded generator and dealt round-robin
    over the folds; the starting fold rotates from class to class so that
    fold sizes stay balanced as well.
    """
    y = np.asarray(y)
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=np.int64)
    offset = 0
    for k in np.unique(y):
        idx = np.flatnonzero(y == k)
        if len(idx) < folds:
            name = classes[k] if classes is not None else int(k)
            raise DataError(
                f"class {name!s} has {len(idx)} samples, fewer than the {folds} folds"
            )
        idx = idx[rng.permutation(len(idx))]
        assignment[idx] = (offset + np.arange(len(idx))) % folds
        offset = (offset + len(idx)) % folds
    return assignment


@dataclass(frozen=True)
class CvReport:
    fold_accuracies: tuple[float, ...]
    fold_sizes: tuple[int, ...]
    correct: int
    total: int
    confusion: np.ndarray  # rows: true class, cols: predicted
    seed: int
    classes: tuple[str, ...] = ()

    @property
    def ccr(self) -> float:
        return self.correct / self.total

    def summary(self) -> str:
        lines = [f"{'fold':>6} {'n':>5} {'accuracy':>9}"]
        for i, (n, acc) in enumerate(zip(self.fold_sizes, self.fold_accuracies)):
            lines.append(f"{i:>6} {n:>5} {100 * acc:>9.2f}")
        lines.append(f"CCR {100 * self.ccr:.2f}")
        return "\n".join(lines)


def cross_validate(X, y, folds: int = 10, seed: int = DEFAULT_SEED,
                   classes=None, ridge: float = RIDGE) -> CvReport:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    n_classes = int(y.max()) + 1
    assignment = stratified_folds(y, folds, seed, classes)
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    accs, sizes = [], []
    for f in range(folds):
        test = assignment == f
        model = fit_lda(X[~test], y[~test], ridge)
        pred = predict(model, X[test])
        truth = y[test]
        np.add.at(confusion, (truth, pred), 1)
        accs.append(float(np.mean(pred == truth)))
        sizes.append(int(test.sum()))
    correct = int(np.trace(confusion))
    return CvReport(tuple(accs), tuple(sizes), correct, len(y), confusion, seed,
                    tuple(classes) if classes is not None else ())


def write_cv_report(report: CvReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["fold", "accuracy"])
        for i, acc in enumerate(report.fold_accuracies):
            w.writerow([i, f"{acc:.6f}"])
        w.writerow(["overall", f"{report.ccr:.6f}"])


def write_confusion(report: CvReport, path) -> None:
    names = list(report.classes) or [str(i) for i in range(len(report.confusion))]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["true\\pred"] + names)
        for name, row in zip(names, report.confusion):
            w.writerow([name] + [int(v) for v in row])
