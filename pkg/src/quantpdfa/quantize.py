"""Interval quantization of probabilities.

``[0, 1]`` is cut into ``kappa`` cells ``[n/kappa, (n+1)/kappa)``, the last
one closed. A distribution quantizes to the tuple of its per-coordinate cell
indices (its quantization vector). Cell boundaries are evaluated in plain
double precision: ``min(floor(x * kappa), kappa - 1)``; no epsilon snapping.
"""
import math

from .errors import InputError
from .pdfa import PROB_SLACK

QuantVector = tuple  # tuple[int, ...]


def _check_kappa(kappa):
    if not isinstance(kappa, int) or isinstance(kappa, bool) or kappa < 1:
        raise InputError(f"quantization parameter must be a positive integer, got {kappa!r}")


def interval_index(x: float, kappa: int) -> int:
    _check_kappa(kappa)
    if math.isnan(x) or not (-PROB_SLACK <= x <= 1 + PROB_SLACK):
        raise InputError(f"probability {x!r} outside [0, 1]")
    if x <= 0.0:
        return 0
    return min(int(x * kappa), kappa - 1)


def quantize_distribution(dist, kappa: int) -> QuantVector:
    return tuple(interval_index(x, kappa) for x in dist)


def quant_equal(d1, d2, kappa: int) -> bool:
    if len(d1) != len(d2):
        raise InputError("distributions have different layouts")
    return quantize_distribution(d1, kappa) == quantize_distribution(d2, kappa)


def linf_distance(d1, d2) -> float:
    if len(d1) != len(d2):
        raise InputError("distributions have different layouts")
    return max((abs(x - y) for x, y in zip(d1, d2)), default=0.0)


def format_vector(v: QuantVector) -> str:
    return "(" + ", ".join(str(i) for i in v) + ")"
