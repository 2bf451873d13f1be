"""Translation functors on good-filtration data.

The functor is implemented purely combinatorially: for ``mu``, ``lam`` in
the closure of the fundamental alcove and a dominant weight
``w . mu`` in the orbit of ``mu``, the translate of ``nabla(w . mu)`` has
nabla-factors ``w w1 . lam`` over the stabilizer ``w1`` of ``mu``, each
distinct dominant value exactly once.
"""

from __future__ import annotations

from collections import Counter

from .charring import VirtualChar
from .errors import NotInClosure, NotLinked
from .lattice import Weight, is_dominant
from .alcove import (
    IDENTITY_MAP,
    AffineMap,
    dvec,
    in_closure_c,
    orbit_rep_with_map,
    reflection_map,
)


def stabilizer_maps(mu: Weight, level: int) -> list[AffineMap]:
    """The stabilizer of ``mu`` in the affine Weyl group, as explicit maps.

    Generated by the reflections in the hyperplanes through ``mu``;
    for a weight in the closure of the fundamental alcove this is
    trivial, of order two (one wall) or the order-six rank-2 group
    (special point).
    """
    d = dict(zip(("a", "b", "ab"), dvec(mu)))
    gens = []
    for name, dg in d.items():
        if dg % level == 0:
            gens.append(reflection_map(name, dg // level, level))
    elements: dict[tuple, AffineMap] = {(IDENTITY_MAP.m, IDENTITY_MAP.t): IDENTITY_MAP}
    frontier = [IDENTITY_MAP]
    while frontier:
        g = frontier.pop()
        for r in gens:
            h = r.compose(g)
            key = (h.m, h.t)
            if key not in elements:
                elements[key] = h
                frontier.append(h)
    assert len(elements) in (1, 2, 6)
    return list(elements.values())


def translate_factor(
    w_dot_mu: Weight, mu: Weight, lam: Weight, level: int
) -> list[Weight]:
    """Nabla-factors of the translate of ``nabla(w_dot_mu)`` from mu to lam."""
    if not in_closure_c(mu, level) or not in_closure_c(lam, level):
        raise NotInClosure("translation endpoints must lie in the fundamental closure")
    rep, _, _, fmap = orbit_rep_with_map(w_dot_mu, level)
    if rep != mu:
        raise NotLinked(f"{w_dot_mu} is not in the orbit of {mu} at level {level}")
    w = fmap.inverse()
    out: set[Weight] = set()
    for w1 in stabilizer_maps(mu, level):
        image = w.compose(w1).dot(lam)
        if is_dominant(image):
            out.add(image)
    return sorted(out)


def translate_filtration(
    factors: VirtualChar, mu: Weight, lam: Weight, level: int
) -> VirtualChar:
    """Additive extension of translate_factor to a nabla-filtration."""
    out: VirtualChar = Counter()
    for w_dot_mu, mult in factors.items():
        assert mult > 0
        for image in translate_factor(w_dot_mu, mu, lam, level):
            out[image] += mult
    return out


def translate_to_class(
    factors: VirtualChar, target: Weight, level: int
) -> VirtualChar:
    """Translate a filtration from its own linkage class to the class of target.

    Convenience wrapper: the source closure representative is computed
    from the first factor, the target representative from ``target``.
    """
    if not factors:
        return Counter()
    some = next(iter(factors))
    mu = orbit_rep_with_map(some, level)[0]
    lam = orbit_rep_with_map(target, level)[0]
    return translate_filtration(factors, mu, lam, level)
