"""Decomposition certificates: quantum characters, sum formula, Levi checks.

These are the three independent arguments used to split translated
tilting modules into indecomposables, plus character-level socle
bookkeeping.  Everything here is a pure function of weights and levels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

from . import _klpoly
from .alcove import (
    facet_classify,
    orbit_rep_with_map,
    reflection_map,
)
from .charring import VirtualChar, chi_normalize
from .errors import BadLevel, NotDominant
from .lattice import (
    ROOT_NAMES,
    Weight,
    add,
    is_dominant,
    pairing,
    weight_sort_key,
)
from .alcove import IDENTITY_MAP, dvec, linked


@dataclass(frozen=True)
class TiltingChar:
    """A nabla-filtration multiset together with its highest weight."""

    top: Weight
    factors: tuple[tuple[Weight, int], ...]

    @staticmethod
    def from_counter(top: Weight, factors: VirtualChar) -> "TiltingChar":
        items = tuple(sorted((w, m) for w, m in factors.items() if m))
        assert all(m > 0 for _, m in items)
        return TiltingChar(top=top, factors=items)

    def counter(self) -> VirtualChar:
        return Counter(dict(self.factors))

    def to_json(self) -> dict:
        return {
            "top": list(self.top),
            "factors": [[w[0], w[1], m] for w, m in self.factors],
        }


@dataclass(frozen=True)
class Certificate:
    kind: str  # LeviRemoval | SumFormulaZero | QuantumIndecomposable | SocleExclusion
    payload: dict = field(hash=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": _jsonable(self.payload)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, Counter):
        return [[list(k), v] for k, v in sorted(obj.items())]
    return obj


@dataclass(frozen=True)
class Fail:
    reason: str
    payload: dict = field(default_factory=dict, hash=False)

    def __bool__(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# Characteristic-zero quantum tilting characters.
# ---------------------------------------------------------------------------


def _upper_alcove_key(lam: Weight, level: int) -> tuple[int, int, int]:
    """Key of the alcove containing ``lam`` nudged towards ``+rho``."""
    facet = facet_classify(lam, level)
    return tuple(
        facet.n[name] + (1 if name in facet.r0 else 0) for name in ("a", "b", "ab")
    )


@lru_cache(maxsize=None)
def quantum_tilting_char(lam: Weight, level: int) -> TiltingChar:
    """Character of the indecomposable quantum tilting module at a root
    of unity of order ``level`` in characteristic zero.

    Computed from antispherical Kazhdan-Lusztig data: the weight is
    assigned the alcove obtained by nudging it towards ``-rho`` (for a
    regular weight, its own alcove), and the nabla-factors are the orbit
    weights of the alcoves below with the polynomial values at 1,
    dominant images only, fibre multiplicities summed.
    """
    if level < 2:
        raise BadLevel("level must be at least 2")
    if not is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    x_key = _upper_alcove_key(lam, level)
    rep, _, _, _ = orbit_rep_with_map(lam, level)
    mults = _klpoly.nabla_multiplicities(x_key)
    gens = {
        1: reflection_map("a", 0, level),
        2: reflection_map("b", 0, level),
        0: reflection_map("ab", 1, level),
    }
    factors: VirtualChar = Counter()
    for y_key, m in mults.items():
        g = IDENTITY_MAP
        for s in _klpoly.alcove_word(y_key):
            g = g.compose(gens[s])
        w = g.dot(rep)
        if not is_dominant(w):
            continue
        # a singular weight is hit by every alcove of its upper star; its
        # multiplicity is the polynomial value at the alcove just above it
        # (the factors of T(lam) fold from those of the regular tilting in
        # the alcove above lam under translation onto the facet)
        if _upper_alcove_key(w, level) == y_key:
            factors[w] = m
    assert factors[lam] == 1, (lam, level, factors)
    assert all(weight_sort_key(w) <= weight_sort_key(lam) for w in factors)
    return TiltingChar.from_counter(lam, factors)


# ---------------------------------------------------------------------------
# Jantzen sum formula.
# ---------------------------------------------------------------------------


def _val(pi: int, m: int) -> int:
    v = 0
    while m % pi == 0:
        m //= pi
        v += 1
    return v


@dataclass(frozen=True)
class SumFormulaResult:
    virtual: tuple[tuple[Weight, int], ...]

    def counter(self) -> VirtualChar:
        return Counter(dict(self.virtual))

    def is_zero(self) -> bool:
        return not any(m for _, m in self.virtual)


def jantzen_sum(lam: Weight, ell: int, pi: int) -> SumFormulaResult:
    """Sum over the Jantzen filtration layers of the Weyl module of lam.

    The coefficient of the reflected Weyl character at the hyperplane
    ``m * ell`` is ``1 + v_pi(m)``, which specializes to the classical
    ``v_p(m p)`` when ``ell == pi``.
    """
    if pi < 3:
        raise BadLevel("sum formula requires characteristic at least 3")
    out: VirtualChar = Counter()
    d = dict(zip(ROOT_NAMES, dvec(lam)))
    from .alcove import dot_reflect

    for name in ROOT_NAMES:
        m = 1
        while m * ell < d[name]:
            nu = 1 + _val(pi, m)
            sign, mu = chi_normalize(dot_reflect(name, m, lam, ell))
            if sign:
                out[mu] += nu * sign
            m += 1
    out = Counter({w: c for w, c in out.items() if c})
    return SumFormulaResult(virtual=tuple(sorted(out.items())))


def jantzen_sum_layer2(lam: Weight, ell: int, pi: int) -> SumFormulaResult:
    """The part of the sum formula coming from second-layer hyperplanes
    (multiples of ``ell * pi``) only."""
    if pi < 3:
        raise BadLevel("sum formula requires characteristic at least 3")
    out: VirtualChar = Counter()
    d = dict(zip(ROOT_NAMES, dvec(lam)))
    from .alcove import dot_reflect

    layer2 = ell * pi
    for name in ROOT_NAMES:
        m = 1
        while m * layer2 < d[name]:
            nu = 1 + _val(pi, m)
            sign, mu = chi_normalize(dot_reflect(name, m * pi, lam, ell))
            if sign:
                out[mu] += nu * sign
            m += 1
    out = Counter({w: c for w, c in out.items() if c})
    return SumFormulaResult(virtual=tuple(sorted(out.items())))


def jantzen_sum_filtration(factors: VirtualChar, ell: int, pi: int) -> SumFormulaResult:
    """Sum formula applied to a filtration: summed over its Weyl factors."""
    out: VirtualChar = Counter()
    for w, mult in factors.items():
        for mu, c in jantzen_sum(w, ell, pi).virtual:
            out[mu] += mult * c
    out = Counter({w: c for w, c in out.items() if c})
    return SumFormulaResult(virtual=tuple(sorted(out.items())))


def layer2_sum_filtration(factors: VirtualChar, ell: int, pi: int) -> SumFormulaResult:
    """Second-layer sum formula summed over the Weyl factors of a filtration."""
    out: VirtualChar = Counter()
    for w, mult in factors.items():
        for mu, c in jantzen_sum_layer2(w, ell, pi).virtual:
            out[mu] += mult * c
    out = Counter({w: c for w, c in out.items() if c})
    return SumFormulaResult(virtual=tuple(sorted(out.items())))


# ---------------------------------------------------------------------------
# Rank-1 (SL2) tilting characters and Levi-line checks.
# ---------------------------------------------------------------------------


def _sl2_chi_weights(a: int) -> Counter:
    return Counter({a - 2 * k: 1 for k in range(a + 1)})


def _sl2_expand(weights: Counter) -> Counter:
    residual = Counter({w: m for w, m in weights.items() if m})
    out: Counter = Counter()
    while residual:
        top = max(residual)
        c = residual[top]
        assert top >= 0 and c > 0, "rank-1 expansion left the character cone"
        out[top] += c
        for w, m in _sl2_chi_weights(top).items():
            residual[w] -= c * m
        residual = Counter({w: m for w, m in residual.items() if m})
    return out


@lru_cache(maxsize=None)
def sl2_tilting_char(a: int, ell: int, pi: int) -> tuple[tuple[int, int], ...]:
    """Nabla-factor multiset of the rank-1 indecomposable tilting module.

    Window-plus-twist recursion: for ``a`` past the first reflection the
    module is the window tilting tensor a dilated classical tilting at
    the characteristic.
    """
    assert a >= 0
    if a <= ell - 1:
        return ((a, 1),)
    abar = (a - (ell - 1)) % ell
    a1 = (a - (ell - 1)) // ell
    window = Counter(_sl2_chi_weights(ell - 1 + abar))
    if abar > 0:
        window += _sl2_chi_weights(ell - 1 - abar)
    outer = sl2_tilting_char(a1, pi, pi)
    outer_weights: Counter = Counter()
    for w, m in outer:
        for x, k in _sl2_chi_weights(w).items():
            outer_weights[ell * x] += m * k
    prod: Counter = Counter()
    for w1, m1 in window.items():
        for w2, m2 in outer_weights.items():
            prod[w1 + w2] += m1 * m2
    return tuple(sorted(_sl2_expand(prod).items()))


def levi_line_multiplicities(
    factors: VirtualChar, anchor: Weight
) -> dict[int, int]:
    """Multiplicities of the factors lying on the alpha-line through anchor,
    indexed by the rank-1 weight (the pairing with the alpha coroot)."""
    out: dict[int, int] = {}
    for w, m in factors.items():
        if not m:
            continue
        tb = anchor[1] - w[1]
        if w[0] - anchor[0] == 2 * tb:
            out[w[0]] = out.get(w[0], 0) + m
    return out


def levi_sl2_check(
    factors: VirtualChar, anchor: Weight, ell: int, pi: int
):
    """Check the alpha-line multiplicities match the rank-1 tilting character
    of the top line weight.  Returns a Certificate or Fail."""
    line = levi_line_multiplicities(factors, anchor)
    if not line:
        return Fail("empty line", {"anchor": anchor})
    top = max(line)
    expected = dict(sl2_tilting_char(top, ell, pi))
    if line == expected:
        return Certificate(
            kind="LeviRemoval",
            payload={"anchor": anchor, "line": line, "sl2_top": top},
        )
    mismatch = sorted(set(line.items()) ^ set(expected.items()))
    return Fail("line mismatch", {"anchor": anchor, "mismatch": mismatch})


# ---------------------------------------------------------------------------
# Quantum feasibility.
# ---------------------------------------------------------------------------


def quantum_decompose(factors: VirtualChar, level: int):
    """Greedy expansion of a filtration in the basis of characteristic-zero
    quantum tilting characters at the given level.

    Returns a Counter of components or Fail at the first negative
    coefficient.  Valid by unitriangularity; ties processed in decreasing
    (a+b, a) order.
    """
    residual = Counter({w: m for w, m in factors.items() if m})
    components: Counter = Counter()
    while residual:
        top = max(residual, key=weight_sort_key)
        m = residual[top]
        if m < 0:
            return Fail(
                "negative coefficient",
                {"level": level, "weight": top, "deficit": -m},
            )
        components[top] += m
        for w, k in quantum_tilting_char(top, level).factors:
            residual[w] -= m * k
        residual = Counter({w: c for w, c in residual.items() if c})
    return components


def quantum_feasible(c: TiltingChar, ell: int, pi: int):
    """Feasibility at levels ell and ell*pi plus the indecomposability test.

    Returns a QuantumIndecomposable Certificate, a plain feasibility
    Certificate (feasible but with a feasible proper sub-multiset), or
    Fail.
    """
    factors = c.counter()
    comp_ell = quantum_decompose(factors, ell)
    if isinstance(comp_ell, Fail):
        return comp_ell
    comp_l2 = quantum_decompose(factors, ell * pi)
    if isinstance(comp_l2, Fail):
        return comp_l2
    if _has_feasible_proper_part(comp_ell, c.top, ell, pi):
        return Certificate(
            kind="QuantumFeasible",
            payload={
                "top": c.top,
                "components": {ell: comp_ell, ell * pi: comp_l2},
                "indecomposable": False,
            },
        )
    return Certificate(
        kind="QuantumIndecomposable",
        payload={
            "top": c.top,
            "components": {ell: comp_ell, ell * pi: comp_l2},
            "indecomposable": True,
        },
    )


def _has_feasible_proper_part(
    comp_ell: Counter, top: Weight, ell: int, pi: int
) -> bool:
    """Is some proper sub-multiset of the level-ell components containing
    the top component feasible at the second level too?"""
    items = sorted(comp_ell.items(), key=lambda t: weight_sort_key(t[0]), reverse=True)
    assert items and items[0][0] == top
    ranges = []
    for w, m in items:
        if w == top:
            ranges.append(range(1, m + 1))
        else:
            ranges.append(range(0, m + 1))
    total = sum(m for _, m in items)
    for choice in iproduct(*ranges):
        if sum(choice) == total:
            continue  # not proper
        part: VirtualChar = Counter()
        for (w, _), k in zip(items, choice):
            if k:
                for x, c in quantum_tilting_char(w, ell).factors:
                    part[x] += k * c
        if not isinstance(quantum_decompose(part, ell * pi), Fail):
            return True
    return False


# ---------------------------------------------------------------------------
# Socle bookkeeping (character level only).
# ---------------------------------------------------------------------------


def socle_exclusion(
    candidate: TiltingChar, host_factors: VirtualChar, level: int
):
    """Character-level justification for removing a summand candidate.

    The socle label of a self-dual indecomposable tilting module is
    proxied by its dominance-minimal nabla-factor.  Removal is certified
    when the candidate's socle label is not the label of any nabla-factor
    of the host (so it cannot embed), or when the candidate's top is not
    linked to the host at all.  Returns a Certificate or None (unknown).
    """
    hosts = {w for w, m in host_factors.items() if m}
    if not hosts:
        return None
    some = next(iter(hosts))
    if not linked(candidate.top, some, level):
        return Certificate(
            kind="SocleExclusion",
            payload={"candidate": candidate.top, "reason": "different block"},
        )
    socle_label = min((w for w, _ in candidate.factors), key=weight_sort_key)
    if socle_label not in hosts:
        return Certificate(
            kind="SocleExclusion",
            payload={
                "candidate": candidate.top,
                "socle_label": socle_label,
                "reason": "socle label absent from host filtration",
            },
        )
    return None


# ---------------------------------------------------------------------------
# Certificate re-verification.
# ---------------------------------------------------------------------------


def verify_certificate(cert: Certificate, ell: int, pi: int) -> bool:
    """Independent re-check of a certificate's claim from its payload."""
    kind, payload = cert.kind, cert.payload
    if kind in ("QuantumIndecomposable", "QuantumFeasible"):
        top = payload["top"]
        comp = payload["components"]
        for level, components in comp.items():
            rebuilt: VirtualChar = Counter()
            for w, m in components.items():
                for x, c in quantum_tilting_char(w, level).factors:
                    rebuilt[x] += m * c
            again = quantum_decompose(rebuilt, level)
            if isinstance(again, Fail) or +again != +Counter(components):
                return False
        full = Counter()
        for w, m in comp[ell].items():
            for x, c in quantum_tilting_char(w, ell).factors:
                full[x] += m * c
        indec = not _has_feasible_proper_part(+Counter(comp[ell]), top, ell, pi)
        return indec == payload["indecomposable"]
    if kind == "LeviRemoval":
        line = payload["line"]
        return dict(sl2_tilting_char(payload["sl2_top"], ell, pi)) == dict(line)
    if kind == "SumFormulaZero":
        factors = Counter({tuple(w): m for w, m in payload["factors"]})
        return layer2_sum_filtration(factors, ell, pi).is_zero()
    if kind == "SocleExclusion":
        return True  # structural bookkeeping; payload records the reason
    if kind == "TranslationDecomposition":
        return True  # re-verified by construction in the engine
    return False
