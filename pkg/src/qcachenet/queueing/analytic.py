"""
Closed-form M/D/1/I mean wait.

t_wq = (I - 1 - (sum_{i<I} b_i - I) / (rho * b_{I-1})) / gamma

The coefficient sum is kept exactly as printed (starting at i = 1, with
b_0 = 1 by convention). A `full_sum` variant starts the sum at i = 0.
Neither variant is trusted for downstream rates; the Markov backend is.
"""
import logging
import math
from typing import List

from .params import QueueParams
from ..errors import DegenerateFormulaError, InvalidConfigError, NumericalFailureError

logger = logging.getLogger(__name__)

VARIANTS = ("literal", "full_sum")


def b_coefficients(capacity: int, rho: float, variant: str = "literal") -> List[float]:
    """
    Coefficients b_0..b_capacity.

    b_n = sum_{i=start..n} (-1)^i / i! * (n - i)^i * e^{(n - i) rho} * rho^i
    with start = 1 (literal) or 0 (full_sum); b_0 = 1 in both.

    Raises:
        InvalidConfigError: Unknown variant or rho <= 0
        NumericalFailureError: If an exponential overflows
    """
    if variant not in VARIANTS:
        raise InvalidConfigError(f"Unknown analytic variant '{variant}'. Supported: {', '.join(VARIANTS)}")
    if not rho > 0:
        raise InvalidConfigError(f"Utilization rho={rho!r} must be > 0")

    start = 1 if variant == "literal" else 0
    coefficients = [1.0]
    try:
        for n in range(1, capacity + 1):
            total = 0.0
            for i in range(start, n + 1):
                total += (
                    (-1) ** i / math.factorial(i)
                    * float(n - i) ** i
                    * math.exp((n - i) * rho)
                    * rho ** i
                )
            coefficients.append(total)
    except OverflowError as e:
        raise NumericalFailureError(
            f"b-coefficient overflow at capacity={capacity}, rho={rho}: {e}"
        )
    return coefficients


def mean_wait_analytic(q: QueueParams, variant: str = "literal") -> float:
    """
    Mean queueing delay (seconds) from the closed form.

    Raises:
        DegenerateFormulaError: If b_{I-1} = 0 (the formula divides by zero)
    """
    capacity = q.capacity
    rho = q.utilization
    b = b_coefficients(capacity, rho, variant)
    denominator = rho * b[capacity - 1]
    if denominator == 0 or not math.isfinite(denominator):
        raise DegenerateFormulaError(
            f"Analytic wait undefined: b_{capacity - 1}={b[capacity - 1]!r} "
            f"(lambda={q.arrival_rate}, gamma={q.serving_rate}, I={capacity})"
        )
    numerator = sum(b[:capacity]) - capacity
    wait = (capacity - 1 - numerator / denominator) / q.serving_rate
    logger.debug(f"analytic[{variant}] I={capacity} rho={rho:.4g} -> {wait:.6g} s")
    return wait
