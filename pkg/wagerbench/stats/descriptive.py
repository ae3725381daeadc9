"""Descriptive summaries."""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Descriptives:
    n: int
    mean: Optional[float]
    median: Optional[float]
    sd: Optional[float]  # sample SD (ddof=1); None below two observations
    minimum: Optional[float]
    q1: Optional[float]
    q3: Optional[float]
    maximum: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def describe(values: Sequence[float]) -> Descriptives:
    data = np.asarray(list(values), dtype=float)
    if data.size == 0:
        return Descriptives(0, None, None, None, None, None, None, None)
    q1, median, q3 = np.quantile(data, [0.25, 0.5, 0.75])
    return Descriptives(
        n=int(data.size),
        mean=float(data.mean()),
        median=float(median),
        sd=float(data.std(ddof=1)) if data.size > 1 else None,
        minimum=float(data.min()),
        q1=float(q1),
        q3=float(q3),
        maximum=float(data.max()),
    )
