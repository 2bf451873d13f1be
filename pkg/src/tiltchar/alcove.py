"""Affine Weyl group combinatorics: facets, orbit representatives, closures.

All dot-action computations work on the shifted vector ``v = lam + rho``
whose pairings with the three positive coroots are
``d = (a+1, b+1, a+b+2)``.  A facet at level ``l`` is classified by the
integers ``n_gamma`` with ``(n_gamma - 1) * l < d_gamma <= n_gamma * l``,
with equality exactly for the roots on hyperplanes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadLevel
from .lattice import RHO, ROOT_NAMES, ROOTS, Weight, add, is_dominant, pairing, sub


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ParamSet:
    """Level data: root-order level ``ell`` and field characteristic ``pi``.

    The classical case is ``pi == ell`` (both the prime p); the mixed
    quantum case has ``pi > ell``.  The second-layer level is
    ``ell * pi``.
    """

    ell: int
    pi: int

    def __post_init__(self) -> None:
        if self.ell < 2:
            raise BadLevel("level must be at least 2")
        if not _is_prime(self.pi):
            raise BadLevel(f"characteristic {self.pi} is not prime")
        if self.pi < self.ell:
            raise BadLevel("characteristic must be at least the root-order level")

    @property
    def layer2(self) -> int:
        return self.ell * self.pi

    @property
    def classical(self) -> bool:
        return self.ell == self.pi


def dvec(lam: Weight) -> tuple[int, int, int]:
    """Pairings of ``lam + rho`` with the three positive coroots."""
    v = add(lam, RHO)
    return (v[0], v[1], v[0] + v[1])


@dataclass(frozen=True)
class FacetDescriptor:
    level: int
    r0: frozenset[str]
    n: dict[str, int] = field(hash=False)

    @property
    def r1(self) -> frozenset[str]:
        return frozenset(ROOT_NAMES) - self.r0

    @property
    def kind(self) -> str:
        k = len(self.r0)
        if k == 0:
            return "alcove"
        if k == 1:
            return "wall"
        return "special"

    @property
    def wall_root(self) -> str:
        assert len(self.r0) == 1
        return next(iter(self.r0))

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "kind": self.kind,
            "r0": sorted(self.r0),
            "n_gamma": dict(self.n),
        }


def facet_classify(lam: Weight, level: int) -> FacetDescriptor:
    if level < 2:
        raise BadLevel("level must be at least 2")
    d = dict(zip(ROOT_NAMES, dvec(lam)))
    n: dict[str, int] = {}
    r0 = set()
    for name, dg in d.items():
        # n with (n-1)*level < dg <= n*level.
        n[name] = -((-dg) // level)
        if dg % level == 0:
            n[name] = dg // level
            r0.add(name)
    assert len(r0) != 2
    return FacetDescriptor(level=level, r0=frozenset(r0), n=n)


def dot_reflect(root: str, m: int, lam: Weight, level: int) -> Weight:
    """Affine dot-reflection s_{root, m*level} applied to a weight."""
    v = add(lam, RHO)
    excess = pairing(v, root) - m * level
    gamma = ROOTS[root]
    return sub(lam, (excess * gamma[0], excess * gamma[1]))


@dataclass(frozen=True)
class AffineMap:
    """Affine-linear map acting on the shifted vector ``v = lam + rho``."""

    m: tuple[int, int, int, int]  # row-major 2x2 matrix
    t: tuple[int, int]

    def apply_v(self, v: Weight) -> Weight:
        a, b, c, d = self.m
        return (a * v[0] + b * v[1] + self.t[0], c * v[0] + d * v[1] + self.t[1])

    def dot(self, lam: Weight) -> Weight:
        v = self.apply_v(add(lam, RHO))
        return sub(v, RHO)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: (self*other)(v) = self(other(v))."""
        a, b, c, d = self.m
        e, f, g, h = other.m
        return AffineMap(
            m=(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h),
            t=self.apply_v(other.t),
        )

    def inverse(self) -> "AffineMap":
        a, b, c, d = self.m
        det = a * d - b * c
        assert det in (1, -1)
        ia, ib, ic, id_ = d * det, -b * det, -c * det, a * det
        tx = -(ia * self.t[0] + ib * self.t[1])
        ty = -(ic * self.t[0] + id_ * self.t[1])
        return AffineMap(m=(ia, ib, ic, id_), t=(tx, ty))


IDENTITY_MAP = AffineMap(m=(1, 0, 0, 1), t=(0, 0))


def reflection_map(root: str, m: int, level: int) -> AffineMap:
    """s_{root, m*level} as a map on v = lam + rho."""
    k = m * level
    if root == "a":
        return AffineMap(m=(-1, 0, 1, 1), t=(2 * k, -k))
    if root == "b":
        return AffineMap(m=(1, 1, 0, -1), t=(-k, 2 * k))
    if root == "ab":
        return AffineMap(m=(0, -1, -1, 0), t=(k, k))
    raise ValueError(f"unknown positive root {root!r}")


def in_closure_c(lam: Weight, level: int) -> bool:
    da, db, dab = dvec(lam)
    return da >= 0 and db >= 0 and dab <= level


def orbit_rep_with_map(lam: Weight, level: int) -> tuple[Weight, int, bool, AffineMap]:
    """Reflect into the closure of the fundamental alcove.

    Returns ``(mu, parity, trivial_stab, f)`` with ``mu`` in the closure,
    ``parity`` the sign of the group element used, ``trivial_stab`` true
    iff the orbit is regular, and ``f`` the composite map with
    ``f . lam = mu`` (dot action).
    """
    cur = lam
    parity = 1
    fmap = IDENTITY_MAP
    seen = {cur}
    while True:
        da, db, dab = dvec(cur)
        if da < 0:
            r = reflection_map("a", 0, level)
        elif db < 0:
            r = reflection_map("b", 0, level)
        elif dab > level:
            m = (dab - 1) // level
            r = reflection_map("ab", m, level)
        else:
            trivial = da != 0 and db != 0 and dab % level != 0
            return cur, parity, trivial, fmap
        cur = r.dot(cur)
        parity = -parity
        fmap = r.compose(fmap)
        assert cur not in seen, "orbit reduction cycled"
        seen.add(cur)


def orbit_rep(lam: Weight, level: int) -> tuple[Weight, int, bool]:
    mu, parity, trivial, _ = orbit_rep_with_map(lam, level)
    return mu, parity, trivial


def linked(lam: Weight, mu: Weight, level: int) -> bool:
    return orbit_rep(lam, level)[0] == orbit_rep(mu, level)[0]


def lower_closure_special_point(lam: Weight, level: int) -> Weight | None:
    """The special point in the lower closure of lam's facet, if dominant.

    The lower closure replaces ``d_gamma`` by ``n_gamma * level`` on the
    walls the facet lies on and by ``(n_gamma - 1) * level`` on the strict
    ones; a special point exists there iff those targets are additive.
    """
    f = facet_classify(lam, level)
    t = {
        name: f.n[name] * level if name in f.r0 else (f.n[name] - 1) * level
        for name in ROOT_NAMES
    }
    if t["a"] + t["b"] != t["ab"]:
        return None
    sigma = (t["a"] - 1, t["b"] - 1)
    return sigma if is_dominant(sigma) else None


def is_special(lam: Weight, level: int) -> bool:
    return len(facet_classify(lam, level).r0) == 3


def just_dominant(lam: Weight, level: int) -> bool:
    """Dominant, not special, and no dominant special point in the lower closure."""
    return (
        is_dominant(lam)
        and not is_special(lam, level)
        and lower_closure_special_point(lam, level) is None
    )
