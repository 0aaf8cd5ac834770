"""Detection metrics: EER, DET curves, and the tandem detection cost function.

Scores follow the usual polarity: higher means more bona-fide-like
(or more target-like for ASV scores).  A trial is accepted when its
score is >= the threshold, everywhere in this module.

The t-DCF here is the unconstrained-threshold, fixed-ASV formulation:

    tDCF(s) = C1 * Pmiss_cm(s) + C2 * Pfa_cm(s)

    C1 = pi_tar * (Cmiss_cm - Cmiss_asv * Pmiss_asv)
         - pi_non * Cfa_asv * Pfa_asv
    C2 = Cfa_cm * pi_spoof * (1 - Pmiss_spoof_asv)

normalized by min(C1, C2) and minimized over all countermeasure
thresholds.  The default constants (see ``data/tdcf_default.json``)
follow the ASVspoof 2019 evaluation convention and are configuration,
not facts of this implementation.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCostError, ValidationError


@dataclass
class ScoreSet:
    """Positive-class (bona fide / target) and negative-class scores."""

    positives: np.ndarray
    negatives: np.ndarray

    def __post_init__(self):
        self.positives = np.asarray(self.positives, dtype=np.float64)
        self.negatives = np.asarray(self.negatives, dtype=np.float64)
        if not (np.all(np.isfinite(self.positives)) and np.all(np.isfinite(self.negatives))):
            raise ValueError("scores contain NaN/Inf")


@dataclass
class TdcfParams:
    cost_miss_asv: float
    cost_fa_asv: float
    cost_miss_cm: float
    cost_fa_cm: float
    prior_target: float
    prior_nontarget: float
    prior_spoof: float

    def __post_init__(self):
        priors = self.prior_target + self.prior_nontarget + self.prior_spoof
        if abs(priors - 1.0) > 1e-9:
            raise ValueError(f"priors must sum to 1, got {priors}")
        costs = (self.cost_miss_asv, self.cost_fa_asv, self.cost_miss_cm, self.cost_fa_cm)
        if any(c < 0 for c in costs):
            raise ValueError("costs must be nonnegative")
        if not any(c > 0 for c in costs):
            raise ValueError("at least one cost must be positive")

    @classmethod
    def default(cls) -> "TdcfParams":
        text = (
            importlib.resources.files("replaykit")
            .joinpath("data/tdcf_default.json")
            .read_text()
        )
        obj = json.loads(text)
        obj.pop("_comment", None)
        return cls(**obj)


@dataclass
class AsvOperatingPoint:
    """Fixed-ASV error rates at a chosen ASV threshold."""

    p_miss_asv: float
    p_fa_asv: float
    p_miss_spoof_asv: float

    def __post_init__(self):
        for name in ("p_miss_asv", "p_fa_asv", "p_miss_spoof_asv"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


def _rate_curves(s: ScoreSet):
    """FRR/FAR step functions over the candidate thresholds.

    Thresholds are one value below every score, then each distinct
    score, then one value above:  at the lowest threshold everything is
    accepted (FRR 0, FAR 1), at the highest everything is rejected.
    """
    if len(s.positives) == 0 or len(s.negatives) == 0:
        raise ValueError("both score sets must be nonempty")
    distinct = np.unique(np.concatenate([s.positives, s.negatives]))
    thr = np.concatenate([[distinct[0] - 1.0], distinct, [distinct[-1] + 1.0]])
    pos = np.sort(s.positives)
    neg = np.sort(s.negatives)
    # accept iff score >= threshold
    frr = np.searchsorted(pos, thr, side="left") / len(pos)   # P(pos < thr)
    far = 1.0 - np.searchsorted(neg, thr, side="left") / len(neg)  # P(neg >= thr)
    return frr, far, thr


def compute_eer(s: ScoreSet) -> tuple[float, float]:
    """Equal error rate and its threshold.

    FRR and FAR are swept over all distinct scores; the EER is the value
    at their crossing, linearly interpolated between the two adjacent
    thresholds that bracket the sign change of FRR - FAR.
    """
    frr, far, thr = _rate_curves(s)
    diff = frr - far
    # first index where FRR >= FAR; diff[0] = -1, diff[-1] = +1 always
    idx = int(np.argmax(diff >= 0))
    if diff[idx] == 0:
        return float(frr[idx]), float(thr[idx])
    lo, hi = idx - 1, idx
    t = -diff[lo] / (diff[hi] - diff[lo])
    eer = frr[lo] + t * (frr[hi] - frr[lo])
    threshold = thr[lo] + t * (thr[hi] - thr[lo])
    return float(eer), float(threshold)


def det_points(s: ScoreSet) -> np.ndarray:
    """DET staircase: one (p_miss, p_fa) row per candidate threshold.

    Includes the (0, 1) and (1, 0) endpoints.  p_miss is non-decreasing
    and p_fa non-increasing along the sweep; plotting on probit axes is
    left to external tools.
    """
    frr, far, _ = _rate_curves(s)
    return np.column_stack([frr, far])


def asv_rates(
    target: np.ndarray,
    nontarget: np.ndarray,
    spoof: np.ndarray,
    threshold: float | None = None,
) -> AsvOperatingPoint:
    """ASV miss/false-alarm rates at ``threshold``.

    When ``threshold`` is None, the target/non-target EER threshold is
    used.  Spoof trials scoring below the threshold count as rejected
    (p_miss_spoof_asv).
    """
    target = np.asarray(target, dtype=np.float64)
    nontarget = np.asarray(nontarget, dtype=np.float64)
    spoof = np.asarray(spoof, dtype=np.float64)
    if len(target) == 0 or len(nontarget) == 0 or len(spoof) == 0:
        raise ValueError("target, nontarget, and spoof score lists must be nonempty")
    if threshold is None:
        _, threshold = compute_eer(ScoreSet(target, nontarget))
    return AsvOperatingPoint(
        p_miss_asv=float(np.mean(target < threshold)),
        p_fa_asv=float(np.mean(nontarget >= threshold)),
        p_miss_spoof_asv=float(np.mean(spoof < threshold)),
    )


def tdcf_coefficients(asv_op: AsvOperatingPoint, params: TdcfParams) -> tuple[float, float]:
    """The (C1, C2) weights of the t-DCF; raises if either is non-positive."""
    c1 = params.prior_target * (
        params.cost_miss_cm - params.cost_miss_asv * asv_op.p_miss_asv
    ) - params.prior_nontarget * params.cost_fa_asv * asv_op.p_fa_asv
    c2 = params.cost_fa_cm * params.prior_spoof * (1.0 - asv_op.p_miss_spoof_asv)
    if c1 <= 0:
        raise DegenerateCostError(
            f"C1 = {c1:.6g} <= 0: ASV operating point / cost configuration makes "
            "the countermeasure miss term non-positive"
        )
    if c2 <= 0:
        raise DegenerateCostError(
            f"C2 = {c2:.6g} <= 0: ASV passes no spoof trials, the countermeasure "
            "false-alarm term is non-positive"
        )
    return float(c1), float(c2)


def min_tdcf(
    cm: ScoreSet, asv_op: AsvOperatingPoint, params: TdcfParams
) -> tuple[float, float]:
    """Minimum normalized t-DCF over all CM thresholds, and its threshold.

    Normalization divides by min(C1, C2), the cost of the better of the
    two constant classifiers, so a useless countermeasure scores 1.0.
    """
    c1, c2 = tdcf_coefficients(asv_op, params)
    p_miss_cm, p_fa_cm, thr = _rate_curves(cm)
    curve = c1 * p_miss_cm + c2 * p_fa_cm
    idx = int(np.argmin(curve))
    return float(curve[idx] / min(c1, c2)), float(thr[idx])


# ---------------------------------------------------------------------------
# score-file I/O
# ---------------------------------------------------------------------------

def write_scores(path, scores: dict[str, float]) -> None:
    """Write `UTT_ID SCORE` lines, 6 decimal places, sorted by utt id."""
    with open(path, "w") as f:
        for utt in sorted(scores):
            f.write(f"{utt} {scores[utt]:.6f}\n")


def read_scores(path) -> dict[str, float]:
    scores = {}
    with open(path) as f:
        for ln, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ValidationError(f"{path}:{ln}: expected 'UTT_ID SCORE'")
            scores[parts[0]] = float(parts[1])
    return scores


def read_asv_scores(path) -> dict[str, np.ndarray]:
    """Read `UTT_ID SCORE TRIAL_TYPE` lines into target/nontarget/spoof arrays."""
    buckets: dict[str, list[float]] = {"target": [], "nontarget": [], "spoof": []}
    with open(path) as f:
        for ln, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3 or parts[2] not in buckets:
                raise ValidationError(
                    f"{path}:{ln}: expected 'UTT_ID SCORE target|nontarget|spoof'"
                )
            buckets[parts[2]].append(float(parts[1]))
    return {k: np.asarray(v, dtype=np.float64) for k, v in buckets.items()}
