"""Activation-based importance scores and top-k selection."""

from typing import List

import numpy as np
from loguru import logger

from ..exceptions import ModelError
from ..models.kan import ImportanceEntry, ImportanceReport, KanModel
from .kan import activation_outputs, build_design


def rank_scores(names, alphas) -> ImportanceReport:
    """Rank by descending alpha; equal alphas fall back to name order."""
    order = sorted(range(len(names)), key=lambda j: (-alphas[j], names[j]))
    entries = tuple(
        ImportanceEntry(name=names[j], alpha=float(alphas[j]), rank=rank)
        for rank, j in enumerate(order, start=1)
    )
    return ImportanceReport(entries=entries)


def importance_scores(model: KanModel, data: np.ndarray) -> ImportanceReport:
    """
    alpha_j = mean_n |psi_j(u_nj)|, normalised to sum to 1.

    Raises:
        ModelError: Empty data
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[0] == 0:
        raise ModelError("Importance scores need a non-empty feature matrix")
    design = build_design(model, data)
    psi = activation_outputs(
        [a.coefficients for a in model.activations],
        np.array([a.base_weight for a in model.activations]),
        design,
    )
    raw = np.abs(psi).mean(axis=0)
    total = float(raw.sum())
    if total > 0:
        alphas = raw / total
    else:
        logger.warning("All activations are zero on the data; importance scores are all 0")
        alphas = raw
    return rank_scores(list(model.input_names), alphas.tolist())


def select_top_k(report: ImportanceReport, k: int) -> List[str]:
    """First k feature names by rank."""
    if not 0 <= k <= len(report):
        raise ModelError(f"k={k} out of range for {len(report)} ranked features")
    selected = report.ranked_names[:k]
    logger.info(f"Selected top-{k} features: {', '.join(selected)}")
    return selected
