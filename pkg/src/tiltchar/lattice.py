"""SL3/GL3 weight lattice, root-system constants, pairing and dominance.

Weights are stored in fundamental-weight coordinates: an SL3 weight is a
pair ``(a, b)`` of integers and a GL3 weight is a triple ``(l1, l2, l3)``.
The positive roots in fundamental coordinates are alpha ``(2, -1)``,
beta ``(-1, 2)`` and their sum ``(1, 1)``; rho is ``(1, 1)``.
"""

from __future__ import annotations

from .errors import NoLift

Weight = tuple[int, int]
GLWeight = tuple[int, int, int]

ALPHA: Weight = (2, -1)
BETA: Weight = (-1, 2)
ALPHA_BETA: Weight = (1, 1)
RHO: Weight = (1, 1)

# Positive roots named by short keys: "a" = alpha, "b" = beta, "ab" = alpha+beta.
ROOTS: dict[str, Weight] = {"a": ALPHA, "b": BETA, "ab": ALPHA_BETA}
ROOT_NAMES: tuple[str, str, str] = ("a", "b", "ab")
SIMPLE_ROOTS: tuple[str, str] = ("a", "b")


def add(x: Weight, y: Weight) -> Weight:
    return (x[0] + y[0], x[1] + y[1])


def sub(x: Weight, y: Weight) -> Weight:
    return (x[0] - y[0], x[1] - y[1])


def scale(k: int, x: Weight) -> Weight:
    return (k * x[0], k * x[1])


def pairing(lam: Weight, root: str) -> int:
    """Pairing of a weight with the coroot of a positive root.

    In fundamental coordinates this is a coordinate projection:
    ``a`` for alpha, ``b`` for beta and ``a + b`` for alpha+beta.
    """
    a, b = lam
    if root == "a":
        return a
    if root == "b":
        return b
    if root == "ab":
        return a + b
    raise ValueError(f"unknown positive root {root!r}")


def is_dominant(lam: Weight) -> bool:
    return lam[0] >= 0 and lam[1] >= 0


def dominance_leq(mu: Weight, lam: Weight) -> bool:
    """True iff ``lam - mu`` is a non-negative integer combination of alpha, beta."""
    x, y = lam[0] - mu[0], lam[1] - mu[1]
    ca, cb = 2 * x + y, x + 2 * y
    return ca % 3 == 0 and cb % 3 == 0 and ca >= 0 and cb >= 0


def weight_sort_key(lam: Weight) -> tuple[int, int]:
    """Total order refining dominance: sort by (a+b, a)."""
    return (lam[0] + lam[1], lam[0])


def sl3_of(w: GLWeight) -> Weight:
    """SL3 weight of a GL3 weight; kills the determinant twist."""
    return (w[0] - w[1], w[1] - w[2])


def is_partition3(w: GLWeight) -> bool:
    return w[0] >= w[1] >= w[2] >= 0


def minimal_gl3(lam: Weight, n: int) -> GLWeight:
    """The unique GL3 weight of total degree ``n`` mapping to ``lam``.

    Raises NoLift when the degree congruence fails or the last entry
    would be negative.
    """
    a, b = lam
    rem = n - (a + b) - b
    if rem % 3 != 0:
        raise NoLift(f"no GL3 weight of degree {n} maps to {lam}")
    l3 = rem // 3
    if l3 < 0:
        raise NoLift(f"no GL3 weight of degree {n} with non-negative parts maps to {lam}")
    return (a + b + l3, b + l3, l3)


def gl3_degree(w: GLWeight) -> int:
    return w[0] + w[1] + w[2]
