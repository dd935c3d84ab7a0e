"""Adjustments that pull sampled type frequencies toward the base distribution."""

from __future__ import annotations

import logging
import math
from typing import Mapping, Sequence

import numpy as np

from mms_sampler.config import get_limits_config
from mms_sampler.evaluation.projection import TypeDistribution, TypeLabel, TypeProjection

logger = logging.getLogger(__name__)


def reweight_lambda(
    probs: Sequence[float],
    projection: TypeProjection,
    p: TypeDistribution,
    qhat: TypeDistribution,
    lam: float | None = None,
) -> np.ndarray:
    """
    Scale each column's probability by (p_l + lam) / (qhat_l + lam) and renormalize.

    Types that are rare in the sampled data get boosted, common ones damped.
    """
    lam = get_limits_config().evaluation.reweight_lambda if lam is None else lam
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    probs = np.asarray(probs, dtype=float)
    ratios = np.array([(p.get(label) + lam) / (qhat.get(label) + lam) for label in projection.labels])
    scaled = probs * ratios
    logger.debug("reweighting with lambda=%g: ratios in [%.4f, %.4f]", lam, ratios.min(), ratios.max())
    return scaled / math.fsum(scaled)


def reweight_partition(
    p: TypeDistribution,
    qhat: TypeDistribution,
    partition: Mapping[TypeLabel, object],
) -> TypeDistribution:
    """
    Rescale p inside each class so class masses match qhat's.

    Raises:
        ValueError: If a label has no class, or a class has qhat mass but no p mass.
    """
    missing = [label for label in set(p.weights) | set(qhat.weights) if label not in partition]
    if missing:
        raise ValueError(f"labels without a class: {sorted(missing)}")
    p_mass = p.class_masses(partition)
    q_mass = qhat.class_masses(partition)
    for cls_, mass in q_mass.items():
        if mass > 0 and p_mass.get(cls_, 0.0) <= 0:
            raise ValueError(f"class {cls_!r} has sampled mass but no base mass")
    adjusted = {
        label: (w * q_mass.get(partition[label], 0.0) / p_mass[partition[label]] if w > 0 else 0.0)
        for label, w in p.weights.items()
    }
    total = math.fsum(adjusted.values())
    # fold the rounding residue back in so the weights validate
    return TypeDistribution({label: w / total for label, w in adjusted.items()})
