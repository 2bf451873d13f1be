"""Antispherical Kazhdan-Lusztig combinatorics for affine A2.

Characteristic-zero quantum tilting characters at a root of unity are
governed by antispherical Kazhdan-Lusztig polynomials of the affine Weyl
group: the nabla-multiplicity of the alcove ``y`` in the tilting module
of the alcove ``x`` is the value at 1 of the polynomial ``n_{y,x}``.

The alcove combinatorics is level-independent, so it is computed once at
a rational reference level and reused for every actual level.  An alcove
is identified by the triple of integers ``(n_a, n_b, n_ab)`` describing
which strips its interior lies in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import OutOfImplementedRange
from .lattice import Weight

AlcoveKey = tuple[int, int, int]
Poly = dict[int, int]  # exponent of v -> integer coefficient

# Reference interior point of the fundamental alcove at level 1,
# chosen irrational-ish (denominator coprime to everything relevant).
_BASE_POINT = (Fraction(5, 17), Fraction(6, 17))

_MAX_LENGTH = 120


def _gen_point(point, s: int):
    """Apply generator s in {0, 1, 2} to a rational point v=(x, y) at level 1.

    1 = reflection in d_a = 0, 2 = reflection in d_b = 0,
    0 = affine reflection in d_ab = 1.
    """
    x, y = point
    if s == 1:
        return (-x, x + y)
    if s == 2:
        return (x + y, -y)
    return (1 - y, 1 - x)


# Generators as integer affine maps (matrix row-major, translation).
_GEN_MAP = {
    1: ((-1, 0, 1, 1), (0, 0)),
    2: ((1, 1, 0, -1), (0, 0)),
    0: ((0, -1, -1, 0), (1, 1)),
}
_ID_MAP = ((1, 0, 0, 1), (0, 0))


def _map_compose(f, g):
    """f after g, both integer affine maps (m, t)."""
    (a, b, c, d), (e1, e2) = f
    (p, q, r, s), (u1, u2) = g
    return (
        (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s),
        (a * u1 + b * u2 + e1, c * u1 + d * u2 + e2),
    )


def _map_point(f, point):
    (a, b, c, d), (e1, e2) = f
    x, y = point
    return (a * x + b * y + e1, c * x + d * y + e2)


def _key_of_point(point) -> AlcoveKey:
    x, y = point
    def up(f: Fraction) -> int:
        return -((-f.numerator) // f.denominator)
    return (up(x), up(y), up(x + y))


def _is_dominant_key(key: AlcoveKey) -> bool:
    return key[0] >= 1 and key[1] >= 1


def key_length(key: AlcoveKey) -> int:
    return (key[0] - 1) + (key[1] - 1) + (key[2] - 1)


@dataclass
class _AlcoveTable:
    word: dict[AlcoveKey, tuple[int, ...]]
    length: dict[AlcoveKey, int]
    neighbors: dict[tuple[AlcoveKey, int], AlcoveKey]
    max_length: int

    def neighbor(self, key: AlcoveKey, s: int) -> AlcoveKey:
        # right multiplication: crossing the transported s-wall of the alcove
        return self.neighbors[(key, s)]


@lru_cache(maxsize=None)
def _alcove_table(max_length: int) -> _AlcoveTable:
    start = _key_of_point(_BASE_POINT)
    word: dict[AlcoveKey, tuple[int, ...]] = {start: ()}
    length = {start: 0}
    amap = {start: _ID_MAP}
    neighbors: dict[tuple[AlcoveKey, int], AlcoveKey] = {}
    frontier = [start]
    cur_len = 0
    while frontier and cur_len < max_length:
        nxt = []
        for key in frontier:
            for s in (0, 1, 2):
                # Right multiplication appends s to the word; the new
                # alcove is (map of key) composed with (map of s), applied
                # to the reference point.
                m_new = _map_compose(amap[key], _GEN_MAP[s])
                k_new = _key_of_point(_map_point(m_new, _BASE_POINT))
                neighbors[(key, s)] = k_new
                if k_new not in word:
                    word[k_new] = word[key] + (s,)
                    length[k_new] = cur_len + 1
                    amap[k_new] = m_new
                    nxt.append(k_new)
        frontier = nxt
        cur_len += 1
    return _AlcoveTable(
        word=word, length=length, neighbors=neighbors, max_length=max_length
    )


def _apply_word(word: tuple[int, ...]):
    """Point of the alcove with the given (left-to-right) word.

    The alcove of ``s_{i1} ... s_{ik}`` is the image of the fundamental
    alcove under the composite map applied left to right, i.e. point =
    g_{i1}(g_{i2}( ... g_{ik}(base) ... )).
    """
    p = _BASE_POINT
    for s in reversed(word):
        p = _gen_point(p, s)
    return p


def _poly_add(p: Poly, q: Poly, c: int = 1) -> Poly:
    out = dict(p)
    for e, m in q.items():
        nm = out.get(e, 0) + c * m
        if nm:
            out[e] = nm
        else:
            out.pop(e, None)
    return out


def _poly_shift(p: Poly, k: int) -> Poly:
    return {e + k: m for e, m in p.items()}


@lru_cache(maxsize=None)
def _kl_table(max_length: int) -> dict[AlcoveKey, dict[AlcoveKey, Poly]]:
    """Self-dual antispherical basis elements N-bar_x for dominant alcoves.

    Entry ``table[x][y]`` is the polynomial n_{y,x}; the recursion is the
    standard one: N-bar_x = N-bar_{xs} C_s minus mu-corrections over the
    elements with an s-descent.
    """
    if max_length > _MAX_LENGTH:
        raise OutOfImplementedRange(
            f"alcove length {max_length} beyond implemented bound {_MAX_LENGTH}"
        )
    tab = _alcove_table(max_length + 1)
    dominant = sorted(
        (k for k in tab.word if _is_dominant_key(k) and tab.length[k] <= max_length),
        key=lambda k: tab.length[k],
    )
    table: dict[AlcoveKey, dict[AlcoveKey, Poly]] = {}
    for x in dominant:
        if tab.length[x] == 0:
            table[x] = {x: {0: 1}}
            continue
        wx = tab.word[x]
        s = wx[-1]
        y = _key_of_point(_apply_word(wx[:-1]))
        assert y in table, "shorter alcove missing from table"
        # N-bar_y * C_s.
        product: dict[AlcoveKey, Poly] = {}
        for z, poly in table[y].items():
            zs = tab.neighbor(z, s)
            if not _is_dominant_key(zs):
                continue  # N_z * C_s = 0 in the antispherical module
            going_up = tab.length[zs] > tab.length[z]
            product[zs] = _poly_add(product.get(zs, {}), poly)
            shifted = _poly_shift(poly, 1 if going_up else -1)
            product[z] = _poly_add(product.get(z, {}), shifted)
        # Subtract mu(z, y) * N-bar_z over z with an s-descent.
        for z, poly in table[y].items():
            mu = poly.get(1, 0)
            if not mu:
                continue
            zs = tab.neighbor(z, s)
            # z's term N_z * C_s vanishes when zs leaves the dominant cone,
            # so only genuine dominant descents need a correction.
            descent = _is_dominant_key(zs) and tab.length[zs] < tab.length[z]
            if not descent:
                continue
            for w, q in table[z].items():
                product[w] = _poly_add(product.get(w, {}), q, -mu)
        product = {z: p for z, p in product.items() if p}
        # Sanity: unitriangular with positive coefficients in v*Z[v].
        assert product.get(x) == {0: 1}
        for z, p in product.items():
            if z != x:
                assert all(e >= 1 and m > 0 for e, m in p.items()), (x, z, p)
        table[x] = product
    return table


def alcove_key_of_facet(n: dict[str, int]) -> AlcoveKey:
    return (n["a"], n["b"], n["ab"])


def nabla_multiplicities(x: AlcoveKey) -> dict[AlcoveKey, int]:
    """Values n_{y,x}(1) over dominant alcoves y for a dominant alcove x."""
    need = key_length(x)
    table = _kl_table(_round_up(need))
    return {y: sum(p.values()) for y, p in table[x].items()}


def alcove_word(y: AlcoveKey) -> tuple[int, ...]:
    tab = _alcove_table(_round_up(key_length(y)) + 1)
    return tab.word[y]


def _round_up(n: int) -> int:
    """Quantize table sizes so the lru_cache is reused across queries."""
    for bound in (6, 12, 20, 30, 45, 60, 80, 120):
        if n <= bound:
            return bound
    raise OutOfImplementedRange(f"alcove length {n} beyond implemented bound")
