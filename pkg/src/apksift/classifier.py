"""Bernoulli naive Bayes over selected binary features.

Training estimates class priors from class sizes and, for every selected
feature, the probability of seeing the bit set in each class with
additive smoothing: theta = (positives + alpha) / (class size + 2*alpha).
Scoring evaluates the posterior odds of the two classes in log space
(the likelihood product underflows past a few dozen features otherwise)
and normalizes back to a probability. A sample is called suspicious when
its posterior reaches the decision threshold; exact ties go to
suspicious, the costlier class to miss.

Models persist as JSON holding only integer counts plus the smoothing
value, so a save/load round trip reproduces posteriors bit-for-bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import ClassLabel
from .detectors import FeatureMatrix, FeatureVector
from .errors import ModelError

MODEL_SCHEMA_VERSION = 1


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


@dataclass(frozen=True)
class TrainedModel:
    feature_names: tuple[str, ...]
    n_benign: int
    n_suspicious: int
    pos_benign: tuple[int, ...]     # per feature: count of bit=1 among benign
    pos_suspicious: tuple[int, ...]
    alpha: float
    catalog_mode: str | None = None

    def __post_init__(self):
        if self.n_benign < 1 or self.n_suspicious < 1:
            raise ModelError("training requires at least one sample of each class")
        if not (len(self.feature_names) == len(self.pos_benign) == len(self.pos_suspicious)):
            raise ModelError("per-feature count arrays must match the feature list")
        if self.alpha < 0:
            raise ModelError("smoothing alpha must be nonnegative")

    @property
    def priors(self) -> tuple[float, float]:
        """(P(benign), P(suspicious))."""
        n = self.n_benign + self.n_suspicious
        return self.n_benign / n, self.n_suspicious / n

    def theta(self, label: ClassLabel) -> np.ndarray:
        """P(bit=1 | class) per feature, with additive smoothing."""
        counts, total = {
            ClassLabel.BENIGN: (self.pos_benign, self.n_benign),
            ClassLabel.SUSPICIOUS: (self.pos_suspicious, self.n_suspicious),
        }[label]
        return (np.array(counts, dtype=np.float64) + self.alpha) / (total + 2.0 * self.alpha)


@dataclass(frozen=True)
class Prediction:
    sample_id: str
    posterior: float            # P(suspicious | vector)
    decision: ClassLabel
    score: float                # log2 posterior odds of suspicious vs benign


def train(
    matrix: FeatureMatrix,
    selection,
    alpha: float = 1.0,
    catalog_mode: str | None = None,
) -> TrainedModel:
    """Fit priors and per-feature conditionals on a fully labeled matrix."""
    names = tuple(selection.names) if hasattr(selection, "names") else tuple(selection)
    missing = [n for n in names if n not in matrix.feature_names]
    if missing:
        raise ModelError(f"selected features missing from matrix: {', '.join(missing)}")
    unlabeled = [matrix.ids[i] for i, lab in enumerate(matrix.labels) if lab is None]
    if unlabeled:
        raise ModelError(f"training matrix contains unlabeled rows: {', '.join(unlabeled[:5])}")

    cols = [matrix.feature_names.index(n) for n in names]
    sus_mask = np.array([lab is ClassLabel.SUSPICIOUS for lab in matrix.labels])
    n_sus = int(sus_mask.sum())
    n_ben = len(matrix) - n_sus
    sub = matrix.bits[:, cols]
    return TrainedModel(
        feature_names=names,
        n_benign=n_ben,
        n_suspicious=n_sus,
        pos_benign=tuple(int(v) for v in sub[~sus_mask].sum(axis=0)),
        pos_suspicious=tuple(int(v) for v in sub[sus_mask].sum(axis=0)),
        alpha=alpha,
        catalog_mode=catalog_mode if catalog_mode is not None else matrix.mode,
    )


def _project(model: TrainedModel, vector: FeatureVector) -> np.ndarray:
    positions = {}
    for i, name in enumerate(vector.names):
        positions[name] = i
    try:
        idx = [positions[n] for n in model.feature_names]
    except KeyError as exc:
        raise ModelError(f"vector is missing model feature {exc}") from exc
    return vector.bits[idx].astype(np.float64)


def _joint_logs(model: TrainedModel, bits: np.ndarray) -> tuple[float, float]:
    """Unnormalized log joints (benign, suspicious) for one projected vector."""
    prior_ben, prior_sus = model.priors
    logs = []
    for prior, label in ((prior_ben, ClassLabel.BENIGN), (prior_sus, ClassLabel.SUSPICIOUS)):
        theta = model.theta(label)
        total = _log(prior)
        for r, t in zip(bits, theta):
            total += _log(t) if r else _log(1.0 - t)
        logs.append(total)
    return logs[0], logs[1]


def posterior(model: TrainedModel, vector: FeatureVector) -> float:
    """P(suspicious | vector), computed in log space then normalized."""
    log_ben, log_sus = _joint_logs(model, _project(model, vector))
    if log_ben == -math.inf and log_sus == -math.inf:
        return 0.5  # both classes impossible under alpha=0; no evidence either way
    m = max(log_ben, log_sus)
    denom = math.exp(log_ben - m) + math.exp(log_sus - m)
    return math.exp(log_sus - m) / denom


def classify(model: TrainedModel, vector: FeatureVector, threshold: float = 0.5) -> Prediction:
    """Decide suspicious iff the posterior reaches ``threshold`` (ties suspicious)."""
    p = posterior(model, vector)
    decision = ClassLabel.SUSPICIOUS if p >= threshold else ClassLabel.BENIGN
    if p >= 1.0:
        score = math.inf
    elif p <= 0.0:
        score = -math.inf
    else:
        score = math.log2(p / (1.0 - p))
    return Prediction(vector.sample_id, p, decision, score)


def posterior_matrix(model: TrainedModel, matrix: FeatureMatrix) -> np.ndarray:
    """Vectorized posteriors for every row of a matrix (same math as posterior)."""
    try:
        cols = [matrix.feature_names.index(n) for n in model.feature_names]
    except ValueError as exc:
        raise ModelError(f"matrix is missing a model feature: {exc}") from exc
    bits = matrix.bits[:, cols].astype(np.float64)
    prior_ben, prior_sus = model.priors
    with np.errstate(divide="ignore"):
        out = np.empty((len(matrix), 2), dtype=np.float64)
        for k, (prior, label) in enumerate(
            ((prior_ben, ClassLabel.BENIGN), (prior_sus, ClassLabel.SUSPICIOUS))
        ):
            theta = model.theta(label)
            out[:, k] = (
                np.log(prior) + bits @ np.log(theta) + (1.0 - bits) @ np.log(1.0 - theta)
            )
    m = out.max(axis=1, keepdims=True)
    m[~np.isfinite(m)] = 0.0
    expd = np.exp(out - m)
    denom = expd.sum(axis=1)
    result = np.where(denom > 0, expd[:, 1] / np.where(denom > 0, denom, 1.0), 0.5)
    return result


def save_model(model: TrainedModel, path: Path | str) -> None:
    """Write the model as schema-versioned JSON of integers (alpha as text)."""
    payload = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "catalog_mode": model.catalog_mode,
        "alpha": repr(model.alpha),
        "class_counts": {"benign": model.n_benign, "suspicious": model.n_suspicious},
        "features": [
            {"name": n, "count_pos_sus": ps, "count_pos_ben": pb}
            for n, ps, pb in zip(model.feature_names, model.pos_suspicious, model.pos_benign)
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_model(path: Path | str) -> TrainedModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "schema_version" not in payload:
        raise ModelError(f"model file {path} has no schema_version")
    if payload["schema_version"] != MODEL_SCHEMA_VERSION:
        raise ModelError(
            f"model file {path} has schema_version {payload['schema_version']}, "
            f"this build reads version {MODEL_SCHEMA_VERSION}"
        )
    try:
        features = payload["features"]
        return TrainedModel(
            feature_names=tuple(f["name"] for f in features),
            n_benign=int(payload["class_counts"]["benign"]),
            n_suspicious=int(payload["class_counts"]["suspicious"]),
            pos_benign=tuple(int(f["count_pos_ben"]) for f in features),
            pos_suspicious=tuple(int(f["count_pos_sus"]) for f in features),
            alpha=float(payload["alpha"]),
            catalog_mode=payload.get("catalog_mode"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model file {path} is malformed: {exc}") from exc
