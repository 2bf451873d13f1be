"""Decomposition numbers for symmetric groups and Hecke algebras on
three-part partitions, obtained from tilting-module filtration
multiplicities.

The bridge is the Schur functor: for a three-part partition lambda of n,
the column of the decomposition matrix at D^lambda is read off from the
nabla-filtration of the indecomposable GL3 tilting module with highest
weight lambda, via (T(lambda) : nabla(mu)) = [S^mu : D^lambda].
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .alcove import ParamSet
from .errors import BadParams, NoLift, OutOfValidatedRange
from .lattice import GLWeight, minimal_gl3, sl3_of
from .tilting import tilting_char


@dataclass(frozen=True, order=True)
class Partition3:
    """A partition with at most three parts."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.parts
        if len(p) > 3 or any(x < 0 for x in p):
            raise BadParams(f"not a three-part partition: {p}")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise BadParams(f"parts not weakly decreasing: {p}")
        if self.n < 1:
            raise BadParams("empty partition")

    @staticmethod
    def of(*parts: int) -> "Partition3":
        return Partition3(tuple(x for x in parts if x))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def padded(self) -> GLWeight:
        p = self.parts + (0, 0, 0)
        return (p[0], p[1], p[2])

    def is_regular(self, p: int) -> bool:
        """True unless some nonzero part repeats p or more times."""
        return all(self.parts.count(x) < p for x in set(self.parts))

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.parts) + ")"


def dominance_leq3(mu: Partition3, lam: Partition3) -> bool:
    """Dominance order on partitions of the same n."""
    if mu.n != lam.n:
        return False
    a, b = mu.padded(), lam.padded()
    return a[0] <= b[0] and a[0] + a[1] <= b[0] + b[1]


def three_part_partitions(n: int) -> list[Partition3]:
    """All partitions of n with at most three parts, decreasing dominance."""
    out = []
    for first in range(n, (n + 2) // 3 - 1, -1):
        for second in range(min(first, n - first), -1, -1):
            third = n - first - second
            if 0 <= third <= second:
                out.append(Partition3.of(first, second, third))
    out.sort(key=lambda q: q.padded(), reverse=True)
    return out


@dataclass(frozen=True)
class DecompRow:
    """One column of a decomposition matrix, presented as a row: the
    multiplicities [S^mu : D^label] over all three-part mu."""

    label: Partition3
    entries: dict = field(hash=False)
    regime: str = "symmetric group"
    source: str = "engine"
    label_regular: bool = True

    def __post_init__(self) -> None:
        assert self.entries.get(self.label, 0) == 1
        assert all(m >= 0 for m in self.entries.values())

    def to_json(self) -> dict:
        return {
            "label": list(self.label.parts),
            "regime": self.regime,
            "source": self.source,
            "label_regular": self.label_regular,
            "entries": [
                [list(mu.parts), m]
                for mu, m in sorted(
                    self.entries.items(), key=lambda kv: kv[0].padded(), reverse=True
                )
                if m
            ],
        }


def regime_name(ps: ParamSet) -> str:
    if ps.ell == ps.pi:
        return f"symmetric group mod {ps.pi}"
    return f"hecke algebra at (p, l) = ({ps.pi}, {ps.ell})"


def decomposition_row(lam: Partition3, ell: int, pi: int) -> DecompRow:
    """The decomposition numbers [S^mu : D^lam] for three-part mu.

    Computed as the nabla-filtration multiplicities of the tilting module
    whose highest GL3 weight is lam; OutOfValidatedRange propagates when
    the tilting engine refuses the weight.
    """
    ps = ParamSet(ell, pi)
    n = lam.n
    w = sl3_of(lam.padded())
    tc = tilting_char(w, ps)
    entries: dict[Partition3, int] = {}
    for (a, b), m in tc.factors:
        g = minimal_gl3((a, b), n)
        if g[2] < 0:
            raise NoLift(f"factor {(a, b)} has no degree-{n} partition lift")
        entries[Partition3.of(*g)] = m
    return DecompRow(
        label=lam,
        entries=entries,
        regime=regime_name(ps),
        source="engine",
        label_regular=lam.is_regular(pi if ell == pi else ell),
    )


def decomposition_block(
    n: int, ell: int, pi: int, max_first: int | None = None
) -> tuple[list[DecompRow], list[tuple[Partition3, str]]]:
    """All certifiable rows for three-part partitions of n, plus an
    explicit list of refusals (never silently omitted)."""
    rows: list[DecompRow] = []
    refused: list[tuple[Partition3, str]] = []
    for lam in three_part_partitions(n):
        if max_first is not None and lam.parts[0] > max_first:
            refused.append((lam, "beyond requested range"))
            continue
        try:
            rows.append(decomposition_row(lam, ell, pi))
        except (OutOfValidatedRange, NoLift) as exc:
            refused.append((lam, str(exc)))
    return rows, refused


def rows_to_tsv(rows: list[DecompRow]) -> str:
    """TSV table: columns are all mu appearing, rows in decreasing
    dominance of the label."""
    if not rows:
        return ""
    n = rows[0].label.n
    cols = three_part_partitions(n)
    cols = [mu for mu in cols if any(r.entries.get(mu) for r in rows)]
    lines = ["label\tregular\t" + "\t".join(str(mu) for mu in cols)]
    for r in sorted(rows, key=lambda r: r.label.padded(), reverse=True):
        cells = [str(r.entries.get(mu, 0)) for mu in cols]
        flag = "" if r.label_regular else "!singular"
        lines.append(f"{r.label}\t{flag}\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"
