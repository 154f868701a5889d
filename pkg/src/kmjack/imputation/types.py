from dataclasses import dataclass

import numpy as np

from kmjack.errors import NotApplicableError
from kmjack.km_core import OrderedSample


@dataclass(frozen=True, eq=False)
class ImputedSample:
    """An ordered sample whose censored largest datum has been imputed.

    The first ``n - 1`` observations are those of ``base``; the largest is
    replaced by ``imputed_time`` with indicator ``imputed_status`` (always 1).
    """

    base: OrderedSample
    imputed_time: float
    method_tag: str
    imputed_status: int = 1

    def __post_init__(self) -> None:
        if self.base.statuses[-1] != 0:
            raise NotApplicableError("imputation applies only when the largest datum is censored")
        if self.imputed_status != 1:
            raise ValueError("imputed observations are always reclassified as events")
        imputed_time = float(self.imputed_time)
        if not np.isfinite(imputed_time) or imputed_time < self.base.times[-1]:
            raise ValueError(
                f"imputed time {imputed_time!r} is below the largest observation "
                f"{self.base.times[-1]!r}"
            )
        object.__setattr__(self, "imputed_time", imputed_time)

    @property
    def times(self) -> np.ndarray:
        times = self.base.times.copy()
        times[-1] = self.imputed_time
        return times

    @property
    def statuses(self) -> np.ndarray:
        statuses = self.base.statuses.copy()
        statuses[-1] = self.imputed_status
        return statuses
