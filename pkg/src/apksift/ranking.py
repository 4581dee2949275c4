"""Mutual-information scoring, descending rank, and top-n selection.

Each feature's score is the plug-in mutual information (in bits, log
base 2) between its binary indicator and the class variable, estimated
from raw contingency counts with no smoothing; empty cells contribute
zero via the 0*log(0) convention. Features are ranked by descending
score, ties broken by ascending feature name so selections are
reproducible.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import ClassLabel
from .detectors import FeatureMatrix
from .errors import RankingError

#: Fixed selection presets: top 5, ranks 16-20, and top 10/15/20.
PRESETS = {
    "5fT": (0, 5),
    "5fL": (15, 20),
    "10f": (0, 10),
    "15f": (0, 15),
    "20f": (0, 20),
}


@dataclass(frozen=True)
class ContingencyTable:
    """Per-feature class counts: how often the bit is set in each class."""

    feature: str
    n_pos_sus: int
    n_pos_ben: int
    n_sus: int
    n_ben: int

    def __post_init__(self):
        for label, count, total in (
            ("suspicious", self.n_pos_sus, self.n_sus),
            ("benign", self.n_pos_ben, self.n_ben),
        ):
            if not 0 <= count <= total:
                raise RankingError(
                    f"feature {self.feature!r}: {label} count {count} outside [0, {total}]"
                )

    @property
    def n_neg_sus(self) -> int:
        return self.n_sus - self.n_pos_sus

    @property
    def n_neg_ben(self) -> int:
        return self.n_ben - self.n_pos_ben


@dataclass(frozen=True)
class RankedFeature:
    name: str
    score: float
    benign_count: int
    malware_count: int

    @property
    def total(self) -> int:
        return self.benign_count + self.malware_count


@dataclass(frozen=True)
class FeatureSelection:
    names: tuple[str, ...]
    tag: str


def build_contingency(matrix: FeatureMatrix) -> list[ContingencyTable]:
    """Count per-feature positives in each class over a fully labeled matrix."""
    unlabeled = [matrix.ids[i] for i, lab in enumerate(matrix.labels) if lab is None]
    if unlabeled:
        raise RankingError(f"matrix contains unlabeled rows: {', '.join(unlabeled[:5])}")
    sus_mask = np.array([lab is ClassLabel.SUSPICIOUS for lab in matrix.labels])
    n_sus = int(sus_mask.sum())
    n_ben = len(matrix) - n_sus
    if n_sus == 0 or n_ben == 0:
        raise RankingError("both classes must be present to build contingency tables")
    pos_sus = matrix.bits[sus_mask].sum(axis=0)
    pos_ben = matrix.bits[~sus_mask].sum(axis=0)
    return [
        ContingencyTable(
            feature=name,
            n_pos_sus=int(pos_sus[j]),
            n_pos_ben=int(pos_ben[j]),
            n_sus=n_sus,
            n_ben=n_ben,
        )
        for j, name in enumerate(matrix.feature_names)
    ]


def mutual_information(table: ContingencyTable) -> float:
    """Plug-in mutual information of one feature with the class, in bits.

    Joint probabilities are cell/(N_sus + N_ben) and class priors are the
    class shares; for equal class sizes the score lies in [0, 1].
    """
    if table.n_sus < 1 or table.n_ben < 1:
        raise RankingError("mutual information needs at least one sample per class")
    n = table.n_sus + table.n_ben
    cells = {
        (1, "sus"): table.n_pos_sus,
        (1, "ben"): table.n_pos_ben,
        (0, "sus"): table.n_neg_sus,
        (0, "ben"): table.n_neg_ben,
    }
    p_r = {1: (table.n_pos_sus + table.n_pos_ben) / n, 0: (table.n_neg_sus + table.n_neg_ben) / n}
    p_c = {"sus": table.n_sus / n, "ben": table.n_ben / n}
    score = 0.0
    for (r, c), count in cells.items():
        if count == 0:
            continue  # 0 * log(0 / x) = 0 by convention
        p_joint = count / n
        score += p_joint * math.log2(p_joint / (p_r[r] * p_c[c]))
    return max(score, 0.0)


def rank_features(tables: list[ContingencyTable]) -> list[RankedFeature]:
    """Descending MI order; ties broken by ascending feature name."""
    ranked = [
        RankedFeature(
            name=t.feature,
            score=mutual_information(t),
            benign_count=t.n_pos_ben,
            malware_count=t.n_pos_sus,
        )
        for t in tables
    ]
    ranked.sort(key=lambda r: (-r.score, r.name))
    return ranked


def select_top(ranked: list[RankedFeature], preset: str | None = None,
               n: int | None = None) -> FeatureSelection:
    """Resolve a named preset or an explicit top-n into concrete features."""
    if (preset is None) == (n is None):
        raise RankingError("specify exactly one of preset or n")
    if preset is not None:
        if preset not in PRESETS:
            raise RankingError(f"unknown preset {preset!r} (expected one of {sorted(PRESETS)})")
        start, stop = PRESETS[preset]
        tag = preset
    else:
        if n < 1:
            raise RankingError(f"top-n selection needs n >= 1, got {n}")
        start, stop = 0, n
        tag = f"custom-{n}"
    if len(ranked) < stop:
        raise RankingError(
            f"selection {tag!r} needs {stop} ranked features, only {len(ranked)} available"
        )
    return FeatureSelection(names=tuple(r.name for r in ranked[start:stop]), tag=tag)


def write_ranking_csv(ranked: list[RankedFeature], path: Path | str) -> None:
    """Ranking report mirroring the frequency-table layout, scores to 5 dp."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "feature", "benign_count", "malware_count", "total", "infogain"])
        for pos, r in enumerate(ranked, start=1):
            writer.writerow(
                [pos, r.name, r.benign_count, r.malware_count, r.total, f"{r.score:.5f}"]
            )
