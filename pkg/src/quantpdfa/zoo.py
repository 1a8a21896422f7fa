"""Small hand-built automata used in docs, tests and the CLI."""
from .pdfa import Pdfa


def geometric(eps: float = 0.0) -> Pdfa:
    """Over ``{a}``: emits ``a`` surely, then stops with probability 0.5 + eps.

    With ``eps=0`` it maps ``a^n`` (n >= 1) to ``0.5^n`` and the empty string to 0.
    """
    return Pdfa(["a"], [(0.0, 1.0), (0.5 + eps, 0.5 - eps)], [[1], [1]], 0)


def alternating() -> Pdfa:
    """Four-state PDFA over ``{a, b}`` supported on ``(ab)^+``."""
    dists = [
        (0.0, 0.1, 0.9),
        (0.0, 0.8, 0.2),
        (0.3, 0.1, 0.6),
        (0.0, 0.5, 0.5),
    ]
    trans = [[1, 3], [3, 2], [1, 3], [3, 3]]
    return Pdfa(["a", "b"], dists, trans, 0)


def alternating_unrolled() -> Pdfa:
    """Five-state PDFA computing the same function as :func:`alternating`.

    The loop through the accepting state is unrolled once with different
    weights, so the two automata agree on every string but are not equivalent.
    """
    dists = [
        (0.0, 0.1, 0.9),
        (0.0, 0.8, 0.2),
        (0.3, 0.2, 0.5),
        (0.0, 0.5, 0.5),
        (0.0, 0.9, 0.1),
    ]
    trans = [[1, 3], [3, 2], [4, 3], [3, 3], [3, 2]]
    return Pdfa(["a", "b"], dists, trans, 0)


def weighted_tomita2() -> Pdfa:
    """Four-state PDFA over ``{0, 1}``; states are, in order, reached by λ, 1, 0, 10."""
    dists = [
        (0.0, 0.5, 0.5),  # λ
        (0.1, 0.6, 0.3),  # 1
        (0.1, 0.3, 0.6),  # 0
        (0.1, 0.3, 0.6),  # 10
    ]
    trans = [
        [2, 1],  # λ: 0 -> "0", 1 -> "1"
        [3, 1],  # 1: 0 -> "10", 1 -> "1"
        [2, 3],  # 0: 0 -> "0", 1 -> "10"
        [2, 1],  # 10: 0 -> "0", 1 -> "1"
    ]
    return Pdfa(["0", "1"], dists, trans, 0)


def uniform_loop(symbols=("a", "b")) -> Pdfa:
    """Single state, uniform over the terminal and every symbol."""
    k = len(symbols) + 1
    return Pdfa(list(symbols), [[1.0 / k] * k], [[0] * len(symbols)], 0)
