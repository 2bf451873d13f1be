"""Formal SL3 characters: Weyl characters, sign normalization, chi-basis.

Two sparse representations are used throughout the package:

* ``FormalCharacter`` -- dict mapping weights to integer multiplicities
  (a weight map).  Genuine characters are invariant under the finite
  Weyl group.
* ``VirtualChar`` -- Counter mapping *dominant* weights to integer
  coefficients in the basis of Weyl characters ``chi(mu)``.

``nabla``-filtration multisets are VirtualChars with non-negative entries.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

from .errors import NotDominant, NotWInvariant
from .lattice import (
    RHO,
    ROOT_NAMES,
    ROOTS,
    Weight,
    add,
    is_dominant,
    pairing,
    weight_sort_key,
)

FormalCharacter = dict[Weight, int]
VirtualChar = Counter  # Counter[Weight, int]


def _ip3(x: Weight, y: Weight) -> int:
    """Three times the W-invariant inner product in fundamental coordinates."""
    return 2 * x[0] * y[0] + x[0] * y[1] + x[1] * y[0] + 2 * x[1] * y[1]


def _s_alpha(v: Weight) -> Weight:
    return (-v[0], v[0] + v[1])


def _s_beta(v: Weight) -> Weight:
    return (v[0] + v[1], -v[1])


def weyl_orbit(lam: Weight) -> set[Weight]:
    """Orbit of a weight under the finite Weyl group (linear action)."""
    orbit = {lam}
    frontier = [lam]
    while frontier:
        w = frontier.pop()
        for image in (_s_alpha(w), _s_beta(w)):
            if image not in orbit:
                orbit.add(image)
                frontier.append(image)
    return orbit


@lru_cache(maxsize=None)
def weyl_character(lam: Weight) -> FormalCharacter:
    """Weight multiplicities of the irreducible character chi(lam).

    Computed by the Freudenthal recursion with exact integers.  The
    returned dict is shared via the cache and must not be mutated.
    """
    a, b = lam
    if a < 0 or b < 0:
        raise NotDominant(f"{lam} is not dominant")
    # Dominant weights mu <= lam: lam - mu = i*alpha + j*beta.
    dom_weights: list[Weight] = []
    for i in range(a + b + 1):
        for j in range(a + b + 1):
            mu = (a - 2 * i + j, b + i - 2 * j)
            if mu[0] >= 0 and mu[1] >= 0:
                dom_weights.append(mu)
    # Process from the top of the dominance order downwards.
    dom_weights.sort(key=weight_sort_key, reverse=True)
    lam_rho = add(lam, RHO)
    norm_top = _ip3(lam_rho, lam_rho)
    mult: dict[Weight, int] = {lam: 1}

    def orbit_mult(w: Weight) -> int:
        # Multiplicity of an arbitrary weight = that of its dominant rep.
        guard = 0
        while w[0] < 0 or w[1] < 0:
            w = _s_alpha(w) if w[0] < 0 else _s_beta(w)
            guard += 1
            assert guard < 10_000
        return mult.get(w, 0)

    for mu in dom_weights:
        if mu == lam:
            continue
        mu_rho = add(mu, RHO)
        denom = norm_top - _ip3(mu_rho, mu_rho)
        acc = 0
        for name in ROOT_NAMES:
            gamma = ROOTS[name]
            k = 1
            while True:
                w = (mu[0] + k * gamma[0], mu[1] + k * gamma[1])
                # Beyond lam in height: multiplicity is zero from then on.
                if w[0] + w[1] > a + b + 2:
                    break
                m = orbit_mult(w)
                if m:
                    acc += m * _ip3(w, gamma)
                k += 1
        assert denom > 0 and (2 * acc) % denom == 0
        m_mu = (2 * acc) // denom
        if m_mu:
            mult[mu] = m_mu

    # Extend to the full Weyl orbit.
    out: FormalCharacter = {}
    for mu, m in mult.items():
        for w in weyl_orbit(mu):
            out[w] = m
    return out


def char_dimension(c: FormalCharacter) -> int:
    return sum(c.values())


@lru_cache(maxsize=None)
def weyl_dimension(lam: Weight) -> int:
    a, b = lam
    return (a + 1) * (b + 1) * (a + b + 2) // 2


def char_mul(c1: FormalCharacter, c2: FormalCharacter) -> FormalCharacter:
    out: FormalCharacter = {}
    for w1, m1 in c1.items():
        for w2, m2 in c2.items():
            w = (w1[0] + w2[0], w1[1] + w2[1])
            out[w] = out.get(w, 0) + m1 * m2
    return {w: m for w, m in out.items() if m}


def char_dilate(c: FormalCharacter, scale: int) -> FormalCharacter:
    return {(scale * w[0], scale * w[1]): m for w, m in c.items()}


def chi_normalize(lam: Weight) -> tuple[int, Weight | None]:
    """Sign-normalize chi at an arbitrary weight via the finite dot action.

    Returns ``(0, None)`` when ``lam + rho`` lies on a reflection
    hyperplane (the character vanishes), otherwise ``(sign, mu)`` with
    ``mu`` dominant and ``chi(lam) = sign * chi(mu)``.
    """
    v = add(lam, RHO)
    sign = 1
    guard = 0
    while True:
        if v[0] == 0 or v[1] == 0 or v[0] + v[1] == 0:
            return (0, None)
        if v[0] > 0 and v[1] > 0:
            return (sign, (v[0] - 1, v[1] - 1))
        v = _s_alpha(v) if v[0] < 0 else _s_beta(v)
        sign = -sign
        guard += 1
        assert guard < 10_000


def expand_in_chi(c: FormalCharacter) -> VirtualChar:
    """Expand a W-invariant weight map in the basis of Weyl characters."""
    residual = {w: m for w, m in c.items() if m}
    out: VirtualChar = Counter()
    while residual:
        top = max(residual, key=weight_sort_key)
        if not is_dominant(top):
            raise NotWInvariant(f"maximal weight {top} of expansion is not dominant")
        coeff = residual[top]
        out[top] += coeff
        for w, m in weyl_character(top).items():
            nm = residual.get(w, 0) - coeff * m
            if nm:
                residual[w] = nm
            else:
                residual.pop(w, None)
    return out


def contract_to_weights(v: VirtualChar) -> FormalCharacter:
    """Inverse of expand_in_chi: sum of Weyl characters with coefficients."""
    out: FormalCharacter = {}
    for mu, coeff in v.items():
        if not coeff:
            continue
        if not is_dominant(mu):
            raise NotDominant(f"{mu} is not dominant")
        for w, m in weyl_character(mu).items():
            nm = out.get(w, 0) + coeff * m
            if nm:
                out[w] = nm
            else:
                out.pop(w, None)
    return out


def chi_times_weightmap(lam: Weight, weights: FormalCharacter) -> VirtualChar:
    """chi-expansion of ``chi(lam) * (sum of weight-map terms)``.

    Uses the classical identity chi(lam) * e(nu) -> signed chi of the
    dominant normalization of lam + nu, which avoids expanding the full
    product weight map.
    """
    out: VirtualChar = Counter()
    for nu, m in weights.items():
        sign, mu = chi_normalize(add(lam, nu))
        if sign:
            out[mu] += sign * m
    # keep genuinely negative coefficients: a single signed product is a
    # virtual character and cancellation may only happen across a sum
    return Counter({w: m for w, m in out.items() if m})


def virtual_is_nonnegative(v: VirtualChar) -> bool:
    """True iff the contracted weight map has only non-negative entries."""
    return all(m >= 0 for m in contract_to_weights(v).values())
