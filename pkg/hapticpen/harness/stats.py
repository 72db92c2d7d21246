import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats  # type: ignore

from hapticpen import exceptions

logger = logging.getLogger(__name__)

_ZERO_ERROR = 1e-20


@dataclass(frozen=True)
class AnovaResult:
    F: float
    df_num: int
    df_den: int
    p: float

    def __str__(self):
        return f"F({self.df_num},{self.df_den})={self.F:.3f}, p={self.p:.3g}"


def rm_anova_oneway(data) -> AnovaResult:
    """One-way repeated-measures ANOVA.

    Parameters:

        data --
            A participants x conditions matrix, n >= 2 and k >= 2, no missing
            values.

    Returns:

        result --
            F with (k - 1, (k - 1)(n - 1)) degrees of freedom and its p-value.
            Identical condition means give F = 0, p = 1; otherwise zero error
            variance gives F = inf, p = 0.

    Example::

        rm_anova_oneway(np.column_stack([nvh_percent, oh_percent]))
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise exceptions.InvalidArgumentError(
            f"Expected a participants x conditions matrix, got shape {data.shape}"
        )
    n, k = data.shape
    if n < 2 or k < 2:
        raise exceptions.InvalidArgumentError(
            f"Need at least 2 participants and 2 conditions, got {n} x {k}"
        )
    if not np.all(np.isfinite(data)):
        raise exceptions.InvalidArgumentError("Matrix is incomplete (non-finite values)")

    df_num = k - 1
    df_den = (k - 1) * (n - 1)
    condition_means = data.mean(axis=0)
    if np.ptp(condition_means) == 0:
        return AnovaResult(0.0, df_num, df_den, 1.0)

    subject_means = data.mean(axis=1)
    grand = data.mean()
    ss_total = float(np.sum((data - grand) ** 2))
    ss_conditions = n * float(np.sum((condition_means - grand) ** 2))
    residual = data - subject_means[:, None] - condition_means[None, :] + grand
    ss_error = float(np.sum(residual ** 2))
    logger.debug(
        f"SS total={ss_total:g} conditions={ss_conditions:g} error={ss_error:g}"
    )
    if ss_error <= _ZERO_ERROR * ss_total:
        return AnovaResult(math.inf, df_num, df_den, 0.0)
    F = (ss_conditions / df_num) / (ss_error / df_den)
    return AnovaResult(F, df_num, df_den, float(stats.f.sf(F, df_num, df_den)))
