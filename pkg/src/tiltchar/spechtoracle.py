"""Brute-force ground truth for decomposition numbers: Specht modules over
prime fields, composition factors via a small MeatAxe, and three-part
decomposition matrices for small n.

Specht modules are built on the standard-polytabloid basis with Garnir
straightening; composition factors are found by the classical MeatAxe
(random algebra elements, kernel splitting, Norton's irreducibility
test).  All linear algebra is exact arithmetic mod p, with matrix
products routed through float BLAS (the accumulations stay far below the
float32 mantissa for the dimensions and primes used here).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product as iproduct

import numpy as np

from .errors import CertificateFailure, TooLarge
from .symdecomp import DecompRow, Partition3, three_part_partitions

DEFAULT_BOUND = 13

# ---------------------------------------------------------------------------
# Exact linear algebra mod p on numpy arrays.  Vectors are rows; matrices
# act on the right (v -> v @ g).
# ---------------------------------------------------------------------------


def _mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p via float BLAS."""
    k = a.shape[1]
    assert k * (p - 1) ** 2 < 2**24
    c = a.astype(np.float32) @ b.astype(np.float32)
    return np.rint(c).astype(np.int64) % p


_INV = {p: [0] + [pow(x, p - 2, p) for x in range(1, p)] for p in (2, 3, 5, 7)}


def _rref_slab(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a small slab (few rows), naive pivoting."""
    a = a.copy() % p
    m, n = a.shape
    inv = _INV[p]
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * inv[int(a[r, c])]) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if len(other):
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


class Echelon:
    """A growing subspace kept in reduced row echelon form."""

    __slots__ = ("p", "ncols", "rows", "pivots")

    def __init__(self, p: int, ncols: int):
        self.p = p
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x) % self.p
        if self.rank:
            x = (x - _mul(x[:, self.pivots], self.rows, self.p)) % self.p
        return x

    def insert(self, x: np.ndarray) -> np.ndarray:
        """Add the span of the rows of x; returns the new echelon rows."""
        x = self.reduce(x)
        x = x[np.any(x, axis=1)]
        if not len(x):
            return x
        new, piv2 = _rref_slab(x, self.p)
        if self.rank:
            self.rows = (self.rows - _mul(self.rows[:, piv2], new, self.p)) % self.p
        merged = np.vstack([self.rows, new])
        order = np.argsort(self.pivots + piv2, kind="stable")
        self.rows = merged[order]
        self.pivots = sorted(self.pivots + piv2)
        return new

    def contains(self, x: np.ndarray) -> bool:
        return not np.any(self.reduce(x))


def _rref(a: np.ndarray, p: int, chunk: int = 128) -> Echelon:
    e = Echelon(p, a.shape[1])
    for i in range(0, a.shape[0], chunk):
        e.insert(a[i : i + chunk])
    return e


def _left_nullspace(x: np.ndarray, p: int) -> np.ndarray:
    """Rows v with v @ x = 0."""
    e = _rref(x.T % p, p)
    n = x.shape[0]
    free = [c for c in range(n) if c not in set(e.pivots)]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        out[k, e.pivots] = (-e.rows[:, f]) % p
    return out


# ---------------------------------------------------------------------------
# Matrix representations of the symmetric group.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleRep:
    """A module over F_p S_n given by the right action of the Coxeter
    generators s_1 .. s_{n-1} on row vectors."""

    p: int
    dim: int
    gens: tuple  # tuple of (dim x dim) int8/int64 arrays

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def dual(self) -> "ModuleRep":
        return ModuleRep(
            self.p, self.dim, tuple(np.ascontiguousarray(g.T) for g in self.gens)
        )


def check_coxeter(rep: ModuleRep, seed: int = 0) -> None:
    """Verify the Coxeter relations.  Exact matrix identities for small
    dimensions; exact identities on a batch of random vectors above that
    (any violated relation fails on a random vector with overwhelming
    probability, and all arithmetic is exact)."""
    p, d, g = rep.p, rep.dim, rep.gens
    if d <= 300:
        probe = np.eye(d, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        probe = rng.integers(0, p, size=(24, d))
    act = lambda v, i: _mul(v, g[i], p)  # noqa: E731
    for i in range(len(g)):
        if np.any((act(act(probe, i), i) - probe) % p):
            raise CertificateFailure(f"generator {i} is not an involution")
    for i in range(len(g) - 1):
        lhs = act(act(act(probe, i), i + 1), i)
        rhs = act(act(act(probe, i + 1), i), i + 1)
        if np.any((lhs - rhs) % p):
            raise CertificateFailure(f"braid relation fails at {i}")
    for i in range(len(g)):
        for j in range(i + 2, len(g)):
            if np.any((act(act(probe, i), j) - act(act(probe, j), i)) % p):
                raise CertificateFailure(f"commutation fails at ({i}, {j})")


# ---------------------------------------------------------------------------
# Specht modules: standard tableaux, Garnir straightening, generators.
# ---------------------------------------------------------------------------

Tableau = tuple[tuple[int, ...], ...]


def standard_tableaux(shape: tuple[int, ...]) -> list[Tableau]:
    """All standard Young tableaux of the given shape, entries 1..n."""
    n = sum(shape)

    def grow(t: list[list[int]], k: int):
        if k > n:
            yield tuple(tuple(row) for row in t)
            return
        for r in range(len(shape)):
            c = len(t[r])
            if c < shape[r] and (r == 0 or len(t[r - 1]) > c):
                t[r].append(k)
                yield from grow(t, k + 1)
                t[r].pop()

    return list(grow([[] for _ in shape], 1))


def hook_dimension(shape: tuple[int, ...]) -> int:
    n = sum(shape)
    cols = [sum(1 for r in shape if r > c) for c in range(shape[0])]
    prod = 1
    for r, row in enumerate(shape):
        for c in range(row):
            prod *= (row - c - 1) + (cols[c] - r - 1) + 1
    return math.factorial(n) // prod


def _perm_sign(seq: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _column_sort(t: Tableau) -> tuple[Tableau, int]:
    """Sort each column increasingly; returns the tableau and the sign of
    the column permutation applied."""
    shape = tuple(len(r) for r in t)
    rows = [list(r) for r in t]
    sign = 1
    for c in range(shape[0]):
        col = [rows[r][c] for r in range(len(shape)) if shape[r] > c]
        sign *= _perm_sign(tuple(col))
        for k, r in enumerate([r for r in range(len(shape)) if shape[r] > c]):
            rows[r][c] = sorted(col)[k]
    return tuple(tuple(r) for r in rows), sign


_STRAIGHT: dict[Tableau, dict[Tableau, int]] = {}


def straighten(t: Tableau) -> dict[Tableau, int]:
    """Express the polytabloid of an arbitrary bijective tableau in the
    standard-polytabloid basis (integer coefficients)."""
    if t in _STRAIGHT:
        return _STRAIGHT[t]
    ts, sign = _column_sort(t)
    if ts != t:
        out = {u: sign * c for u, c in straighten(ts).items()}
        _STRAIGHT[t] = out
        return out
    shape = tuple(len(r) for r in t)
    viol = None
    for r in range(len(shape)):
        for c in range(shape[r] - 1):
            if t[r][c] > t[r][c + 1]:
                viol = (r, c)
                break
        if viol:
            break
    if viol is None:
        out = {t: 1}
        _STRAIGHT[t] = out
        return out
    r, c = viol
    height = lambda col: sum(1 for row in shape if row > col)  # noqa: E731
    a_cells = [(rr, c) for rr in range(r, height(c))]
    b_cells = [(rr, c + 1) for rr in range(r + 1)]
    cells = a_cells + b_cells
    old = tuple(t[rr][cc] for rr, cc in cells)
    pool = sorted(old)
    total: dict[Tableau, int] = {}
    for new_a in combinations(pool, len(a_cells)):
        new_b = tuple(x for x in pool if x not in set(new_a))
        new = new_a + new_b
        if new == old:
            continue
        # sign of the permutation carrying the old filling to the new one
        pos = {v: i for i, v in enumerate(old)}
        rel_sign = _perm_sign(tuple(pos[v] for v in new))
        rows = [list(row) for row in t]
        for (rr, cc), v in zip(cells, new):
            rows[rr][cc] = v
        child = tuple(tuple(row) for row in rows)
        for u, coeff in straighten(child).items():
            total[u] = total.get(u, 0) - rel_sign * coeff
    total = {u: coeff for u, coeff in total.items() if coeff}
    _STRAIGHT[t] = total
    return total


def specht_rep(mu: Partition3, p: int, bound: int = DEFAULT_BOUND) -> ModuleRep:
    """The Specht module S^mu over F_p on the standard-polytabloid basis."""
    n = mu.n
    if n > bound:
        raise TooLarge(f"degree {n} exceeds the configured bound {bound}")
    shape = mu.parts
    basis = standard_tableaux(shape)
    assert len(basis) == hook_dimension(shape)
    index = {t: k for k, t in enumerate(basis)}
    d = len(basis)
    gens = []
    for i in range(1, n):
        g = np.zeros((d, d), dtype=np.int8)
        for k, t in enumerate(basis):
            swapped = tuple(
                tuple(i + 1 if x == i else i if x == i + 1 else x for x in row)
                for row in t
            )
            for u, coeff in straighten(swapped).items():
                g[k, index[u]] = coeff % p
        gens.append(g)
    rep = ModuleRep(p, d, tuple(gens))
    check_coxeter(rep)
    return rep


# ---------------------------------------------------------------------------
# MeatAxe: spinning, chopping, irreducibility.
# ---------------------------------------------------------------------------


def _spin(seed_rows: np.ndarray, rep: ModuleRep, cache: dict) -> Echelon:
    """Closure of the row span of seed_rows under the generators.  Spins
    under two generators first (they usually already generate) and only
    falls back to the full set when the rank stalls."""
    p, d = rep.p, rep.dim

    def fgen(i: int) -> np.ndarray:
        if i not in cache:
            cache[i] = rep.gens[i].astype(np.float32)
        return cache[i]

    e = Echelon(p, d)
    frontier = e.insert(seed_rows)
    subset = list(range(min(2, rep.ngens)))
    full = list(range(rep.ngens))
    active = subset
    while True:
        while len(frontier) and e.rank < d:
            images = [
                np.rint(frontier.astype(np.float32) @ fgen(i)).astype(np.int64) % p
                for i in active
            ]
            frontier = e.insert(np.vstack(images))
        if e.rank == d or active is full:
            return e
        # the cheap generator subset stalled: re-spin everything under all
        active = full
        frontier = e.rows


def _random_element(rep: ModuleRep, rng: np.random.Generator) -> np.ndarray:
    """A pseudo-random element of the group algebra's image."""
    p, d = rep.p, rep.dim
    combo = lambda: sum(  # noqa: E731
        int(rng.integers(0, p)) * g.astype(np.int64) for g in rep.gens
    ) + int(rng.integers(0, p)) * np.eye(d, dtype=np.int64)
    return (_mul(combo() % p, combo() % p, p) + combo()) % p


def _subquotient(rep: ModuleRep, basis: Echelon) -> tuple[ModuleRep, ModuleRep]:
    """Restriction to an invariant subspace and the induced quotient."""
    p = rep.p
    b, piv = basis.rows, basis.pivots
    nonpiv = [c for c in range(rep.dim) if c not in set(piv)]
    sub, quo = [], []
    for g in rep.gens:
        x = _mul(b, g, p)
        coords = x[:, piv]
        assert not np.any((_mul(coords, b, p) - x) % p), "subspace not invariant"
        sub.append(coords.astype(np.int8))
        m = g[nonpiv].astype(np.int64) % p
        m = (m - _mul(m[:, piv], b, p)) % p
        quo.append(m[:, nonpiv].astype(np.int8))
    return (
        ModuleRep(p, len(piv), tuple(sub)),
        ModuleRep(p, len(nonpiv), tuple(quo)),
    )


def _kernel_lines(kernel: np.ndarray, p: int, limit: int) -> np.ndarray | None:
    """One representative of every line of the row span of kernel, or None
    when there are more than `limit` lines."""
    k = len(kernel)
    nlines = (p**k - 1) // (p - 1)
    if nlines > limit:
        return None
    out = []
    for first in range(k):
        tails = iproduct(range(p), repeat=k - first - 1)
        for tail in tails:
            coeff = np.zeros(k, dtype=np.int64)
            coeff[first] = 1
            coeff[first + 1 :] = tail
            out.append(coeff @ kernel % p)
    assert len(out) == nlines
    return np.array(out, dtype=np.int64)


def chop(rep: ModuleRep, seed: int = 0) -> list[ModuleRep]:
    """Composition factors (with multiplicity) as a list of irreducible
    ModuleReps, via the MeatAxe."""
    rng = np.random.default_rng(seed)
    return _chop(rep, rng)


def _chop(rep: ModuleRep, rng: np.random.Generator) -> list[ModuleRep]:
    p, d = rep.p, rep.dim
    if d == 0:
        return []
    if d == 1:
        return [rep]
    cache: dict = {}
    for _ in range(400):
        x = _random_element(rep, rng)
        shifts = list(rng.permutation(p))
        for c in shifts:
            y = (x - int(c) * np.eye(d, dtype=np.int64)) % p
            kernel = _left_nullspace(y, p)
            if not len(kernel):
                continue
            lines = _kernel_lines(kernel, p, limit=40)
            for v in lines if lines is not None else kernel[:3]:
                w = _spin(v[None, :], rep, cache)
                if 0 < w.rank < d:
                    sub, quo = _subquotient(rep, w)
                    return _chop(sub, rng) + _chop(quo, rng)
            if lines is None:
                continue  # nullity too large for Norton; new element
            # Norton's criterion: every kernel line spins to the whole
            # module, so any proper submodule must annihilate a kernel
            # line of the transpose
            dualrep = rep.dual()
            dcache: dict = {}
            dkernel = _left_nullspace(y.T, p)
            for w in _kernel_lines(dkernel, p, limit=10**9):
                wspan = _spin(w[None, :], dualrep, dcache)
                if wspan.rank < d:
                    ann = _left_nullspace(wspan.rows.T, p)
                    basis = _rref(ann, p)
                    assert 0 < basis.rank < d
                    sub, quo = _subquotient(rep, basis)
                    return _chop(sub, rng) + _chop(quo, rng)
            return [rep]
    raise CertificateFailure(f"meataxe failed to chop a module of dim {d}")


# ---------------------------------------------------------------------------
# Identification of simple factors across modules.
# ---------------------------------------------------------------------------


def _probe_elements(rep: ModuleRep, count: int = 6) -> list[np.ndarray]:
    """A deterministic list of algebra elements used for trace fingerprints."""
    p, d = rep.p, rep.dim
    a = sum(g.astype(np.int64) for g in rep.gens) % p
    b = sum((i + 2) * g.astype(np.int64) for i, g in enumerate(rep.gens)) % p
    out = [a, b, _mul(a, a, p), _mul(a, b, p), _mul(b, b, p), _mul(_mul(a, a, p), b, p)]
    return out[:count]


_FP_CACHE: dict[int, tuple] = {}


def fingerprint(rep: ModuleRep) -> tuple:
    """(dimension, traces of a fixed word list) — a fast isomorphism
    invariant; collisions fall through to an explicit standard-basis test."""
    key = id(rep)
    if key not in _FP_CACHE:
        _FP_CACHE[key] = (
            rep,
            (rep.dim, tuple(int(np.trace(m) % rep.p) for m in _probe_elements(rep))),
        )
    return _FP_CACHE[key][1]


def _standard_basis_form(rep: ModuleRep, v: np.ndarray) -> tuple | None:
    """Generator matrices relative to the standard basis spun (in fixed
    generator order) from the vector v; None if v does not generate."""
    p, d = rep.p, rep.dim
    inv = _INV[p]
    v = v % p
    v = (v * inv[int(v[np.nonzero(v)[0][0]])]) % p
    basis = [v]
    ech = Echelon(p, d)
    ech.insert(v[None, :])
    k = 0
    while k < len(basis) and len(basis) < d:
        for g in rep.gens:
            w = _mul(basis[k][None, :], g, p)[0]
            if not ech.contains(w):
                basis.append(w)
                ech.insert(w[None, :])
        k += 1
    if len(basis) != d:
        return None
    bmat = np.array(basis, dtype=np.int64)
    # invert bmat mod p: reduce the identity through the echelon of bmat
    aug = _rref(np.hstack([bmat, np.eye(d, dtype=np.int64)]), p)
    assert aug.pivots == list(range(d))
    binv = aug.rows[:, d:]
    forms = []
    for g in rep.gens:
        forms.append(tuple(map(tuple, _mul(_mul(bmat, g, p), binv, p))))
    return tuple(forms)


def isomorphic(a: ModuleRep, b: ModuleRep, attempts: int = 40) -> bool:
    """Explicit isomorphism test for two irreducible modules.

    Uses the same algebra element in both modules (built from an
    identically-seeded coefficient stream); an isomorphism carries the
    kernel onto the kernel, so the standard-basis forms match for some
    kernel line of b.  Small minimal nullities (the endomorphism field may
    be an extension of F_p) are handled by enumerating kernel lines."""
    if a.dim != b.dim or a.p != b.p:
        return False
    if fingerprint(a) != fingerprint(b):
        return False
    p, d = a.p, a.dim
    best = None  # (nullity, ka, kb)
    for s in range(attempts):
        rng_a = np.random.default_rng(10_000 + s)
        rng_b = np.random.default_rng(10_000 + s)
        ya = _random_element(a, rng_a)
        yb = _random_element(b, rng_b)
        for c in range(p):
            ka = _left_nullspace((ya - c * np.eye(d, dtype=np.int64)) % p, p)
            if not len(ka):
                continue
            kb = _left_nullspace((yb - c * np.eye(d, dtype=np.int64)) % p, p)
            if len(ka) != len(kb):
                return False
            if best is None or len(ka) < best[0]:
                best = (len(ka), ka, kb)
        if best is not None and best[0] <= 2:
            break
    if best is None:
        raise CertificateFailure("no singular element found for the iso test")
    _, ka, kb = best
    sa = _standard_basis_form(a, ka[0])
    if sa is None:
        raise CertificateFailure("kernel vector fails to generate")
    for w in _kernel_lines(kb, p, limit=200):
        if _standard_basis_form(b, w) == sa:
            return True
    return False


# ---------------------------------------------------------------------------
# Decomposition matrices.
# ---------------------------------------------------------------------------


def composition_factors(rep: ModuleRep, seed: int = 0) -> Counter:
    """Multiset of (fingerprint id, dimension) of the composition factors."""
    out: Counter = Counter()
    for f in chop(rep, seed):
        fp = fingerprint(f)
        out[(str(fp), f.dim)] += 1
    return out


def oracle_matrix(
    n: int, p: int, seed: int = 0, bound: int = DEFAULT_BOUND
) -> list[DecompRow]:
    """Decomposition rows [S^mu : D^lambda] for all three-part mu of n,
    labels identified across Specht modules by fingerprint with an
    explicit isomorphism test as the tie-breaker."""
    if n > bound:
        raise TooLarge(f"degree {n} exceeds the configured bound {bound}")
    mus = three_part_partitions(n)  # decreasing dominance
    registry: list[tuple[Partition3, ModuleRep]] = []
    columns: dict[Partition3, dict[Partition3, int]] = {}
    for mu in mus:
        factors = chop(specht_rep(mu, p, bound), seed)
        unmatched: list[ModuleRep] = []
        for f in factors:
            for label, rep_known in registry:
                if isomorphic(f, rep_known):
                    columns[label][mu] = columns[label].get(mu, 0) + 1
                    break
            else:
                unmatched.append(f)
        if mu.is_regular(p):
            assert len(unmatched) == 1, (mu, [f.dim for f in unmatched])
            registry.append((mu, unmatched[0]))
            columns[mu] = {mu: 1}
        else:
            assert not unmatched, (mu, [f.dim for f in unmatched])
    rows = [
        DecompRow(
            label=label,
            entries=dict(entries),
            regime=f"symmetric group mod {p}",
            source="oracle",
            label_regular=True,
        )
        for label, entries in columns.items()
    ]
    rows.sort(key=lambda r: r.label.padded(), reverse=True)
    return rows


@lru_cache(maxsize=None)
def oracle_matrix_cached(n: int, p: int) -> tuple:
    return tuple(oracle_matrix(n, p))
